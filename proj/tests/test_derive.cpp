#include "doctest.h"
#include "slr/check.hpp"
#include "slr/derive.hpp"
#include "slr/entail.hpp"
#include "slr/model.hpp"
#include "slr/simplify.hpp"
#include "slr/stdlib.hpp"

using namespace slr;

namespace {
Registry& R() {
  static Registry reg = [] {
    Registry r = make_base_registry();
    stdlib_load(r, {/*oracle_check=*/false, /*derive=*/true});
    return r;
  }();
  return reg;
}

Term W1(const std::string& v, const Sort& s, const std::function<Term(const Term&)>& b) {
  return lam_of(v, s, b(mk_fvar(v, s)));
}

// model with root-level fields a.c, a.d, b.c, b.d (for the two-field wrapper)
FiniteModel make_rootrec_model() {
  FiniteModel m;
  m.name = "rootrec";
  m.unit = v_set({});
  m.perms = {v_rat(1, 1)};
  m.ints = {0, 1};
  std::vector<std::vector<Value>> addrs = {{v_sym("a"), v_sym("c")},
                                           {v_sym("a"), v_sym("d")},
                                           {v_sym("b"), v_sym("c")},
                                           {v_sym("b"), v_sym("d")}};
  std::vector<Value> cur;
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == addrs.size()) {
      m.carrier.push_back(v_set(cur));
      return;
    }
    go(i + 1);
    for (int v = 0; v <= 1; ++v) {
      cur.push_back(v_pair(v_list(addrs[i]), v_pair(v_rat(1, 1), v_int(v))));
      go(i + 1);
      cur.pop_back();
    }
  };
  go(0);
  m.abs_universes["val"] = m.universe(int_sort());
  return m;
}

// two-field record wrapper: x :: Pair2(T) == pi1(x) :: {a:T} ** pi2(x) :: {b:T}
void declare_pair2(Registry& reg) {
  if (reg.find_pred("Pair2")) return;
  PredicateDef d;
  d.sig.name = "Pair2";
  d.sig.n_preds = 1;
  d.sig.rec_space = true;
  d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return pair_sort(a[0], a[0]); };
  d.sig.collapses_empty = true;  // {a: Emp} ** {b: Emp} owns nothing
  d.sig.empty_embed = [](auto&, const Term&) { return mk_pair(mk_unit(), mk_unit()); };
  OpDefinition def;
  def.pred_params = {"@T"};
  def.binder = "@x";
  Sort es = any_sort();
  Term xv = mk_fvar("@x", pair_sort(es, es));
  Pred ta = pred_atom("@T", es);
  def.body = a_star(a_pred(pred_op("Path", {mk_list({mk_sym("a")}, abstract_sort("key"))}, {ta}, es),
                           mk_proj(0, xv)),
                    a_pred(pred_op("Path", {mk_list({mk_sym("b")}, abstract_sort("key"))}, {ta}, es),
                           mk_proj(1, xv)));
  d.def = def;
  reg.add_pred(d);
}
}  // namespace

TEST_CASE("functor composition: list of lists") {
  Registry& reg = R();
  const PropertyInstance* ltf = reg.first_prop("List", PropKind::TF);
  REQUIRE(ltf);
  PropertyInstance comp = compose_functors(reg, *ltf, *ltf);
  CHECK(comp.prov == Provenance::Derived);
  // mapper is map . map; domain is set >>= set
  EvalEnv env;
  Term inc = W1("x", int_sort(), [](const Term& x) { return mk_add(x, mk_int(1)); });
  Term ll = mk_list({mk_list({mk_int(1)}, int_sort()), mk_list({mk_int(2), mk_int(3)}, int_sort())},
                    list_sort(int_sort()));
  Term applied = simplify(mk_app(mk_app(comp.w.at("m"), inc), ll));
  Term expect = mk_list({mk_list({mk_int(2)}, int_sort()), mk_list({mk_int(3), mk_int(4)}, int_sort())},
                        list_sort(int_sort()));
  auto va = eval_term(applied, env), ve = eval_term(expect, env);
  REQUIRE(va);
  REQUIRE(ve);
  CHECK(value_eq(*va, *ve));
  Term dom = simplify(mk_app(comp.w.at("d"), ll));
  auto vd = eval_term(dom, env);
  REQUIRE(vd);
  CHECK(value_eq(*vd, v_set({v_int(1), v_int(2), v_int(3)})));

  // the composed instance oracle-checks clean for a registered wrapper
  PredicateDef d;
  d.sig.name = "ListList";
  d.sig.n_preds = 1;
  d.sig.rec_space = true;
  d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return list_sort(list_sort(a[0])); };
  OpDefinition def;
  def.pred_params = {"@T"};
  def.binder = "@x";
  Sort es = any_sort();
  def.body = a_pred(pred_op("List", {}, {pred_op("List", {}, {pred_atom("@T", es)}, list_sort(es))},
                            list_sort(list_sort(es))),
                    mk_fvar("@x", list_sort(list_sort(es))));
  d.def = def;
  if (!reg.find_pred("ListList")) reg.add_pred(d);
  PropertyInstance inst = comp;
  inst.op = "ListList";
  FiniteModel h = make_heap_model(2, 1);
  auto cex = check_property(h, reg, inst);
  CHECK(!cex.has_value());
}

TEST_CASE("composition with the identity functor is the identity") {
  Registry& reg = R();
  const PropertyInstance* ltf = reg.first_prop("List", PropKind::TF);
  REQUIRE(ltf);
  PropertyInstance idf;
  idf.kind = PropKind::TF;
  idf.op = "IdF";
  idf.w["m"] = W1("f", fun_sort(any_sort(), any_sort()), [](const Term& f) { return f; });
  idf.w["d"] = W1("x", any_sort(), [](const Term& x) { return mk_setlit({x}, any_sort()); });
  PropertyInstance comp = compose_functors(reg, *ltf, idf);
  // same behavior as the original mapper after simplification
  Term inc = W1("x", int_sort(), [](const Term& x) { return mk_add(x, mk_int(1)); });
  Term l = mk_list({mk_int(1), mk_int(2)}, int_sort());
  EvalEnv env;
  auto a = eval_term(simplify(mk_app(mk_app(comp.w.at("m"), inc), l)), env);
  auto b = eval_term(simplify(mk_app(mk_app(ltf->w.at("m"), inc), l)), env);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(value_eq(*a, *b));
}

TEST_CASE("routine 3+4: record wrapper functor and separating homomorphism") {
  Registry& reg = R();
  declare_pair2(reg);
  Sort es = any_sort();

  auto tf = derive_functor(
      reg, "Pair2",
      W1("f", fun_sort(es, es),
         [&](const Term& f) {
           return W1("p", pair_sort(es, es), [&](const Term& p) {
             return mk_pair(mk_app(f, mk_proj(0, p)), mk_app(f, mk_proj(1, p)));
           });
         }),
      W1("p", pair_sort(es, es), [&](const Term& p) {
        return mk_setlit({mk_proj(0, p), mk_proj(1, p)}, es);
      }));
  REQUIRE_MESSAGE(tf.ok, tf.error);
  auto rr = reg.register_property(tf.instance, false);
  CHECK(std::holds_alternative<std::vector<std::string>>(rr));

  // transpose witnesses for the homomorphism
  Sort pp = pair_sort(pair_sort(es, es), pair_sort(es, es));
  Term transpose = W1("y", pp, [&](const Term& y) {
    return mk_pair(mk_pair(mk_proj(0, mk_proj(0, y)), mk_proj(0, mk_proj(1, y))),
                   mk_pair(mk_proj(1, mk_proj(0, y)), mk_proj(1, mk_proj(1, y))));
  });
  auto sh = derive_nonrecursive(reg, "Pair2", PropKind::SH, {{"s", transpose}, {"z", transpose}});
  REQUIRE_MESSAGE(sh.ok, sh.error);
  auto rr2 = reg.register_property(sh.instance, false);
  CHECK(std::holds_alternative<std::vector<std::string>>(rr2));

  // the derived rules drive a split on the root-record model
  FiniteModel m = make_rootrec_model();
  Pred T = reg.make_op("Path", {mk_list({mk_sym("c")}, abstract_sort("key"))},
                       {pred_atom("IntV", int_sort())});
  Pred U = reg.make_op("Path", {mk_list({mk_sym("d")}, abstract_sort("key"))},
                       {pred_atom("IntV", int_sort())});
  Pred whole = reg.make_op("Pair2", {}, {pred_star(T, U)});
  Pred pt = reg.make_op("Pair2", {}, {T});
  Pred pu = reg.make_op("Pair2", {}, {U});
  Term x = mk_fvar("x", whole->abst);
  Term tt = mk_pair(mk_proj(0, mk_proj(0, x)), mk_proj(0, mk_proj(1, x)));
  Term uu = mk_pair(mk_proj(1, mk_proj(0, x)), mk_proj(1, mk_proj(1, x)));
  Assertion h = a_pred(whole, x);
  Assertion g = a_star(a_pred(pt, simplify(tt)), a_pred(pu, simplify(uu)));
  EntailSession ses(reg);
  auto r = ses.prove_entailment(h, g);
  REQUIRE_MESSAGE(r.ok, r.blocking);
  // validate on the oracle for a concrete abstraction
  Value xv = v_pair(v_pair(v_int(0), v_int(1)), v_pair(v_int(1), v_int(0)));
  ThetaVerdict v = eval_theta(m, reg, r.theta, {{"x", xv}});
  CHECK(v == ThetaVerdict::True);
  CHECK(valid(m, reg, a_implies(h, g), {{"x", xv}}));
}

TEST_CASE("routine 3: constant wrapper derives trivially") {
  Registry& reg = R();
  if (!reg.find_pred("KonstE")) {
    PredicateDef d;
    d.sig.name = "KonstE";
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, auto&) { return unit_sort(); };
    OpDefinition def;
    def.pred_params = {"@T"};
    def.binder = "@x";
    def.body = a_emp();
    d.def = def;
    reg.add_pred(d);
  }
  Sort es = any_sort();
  auto tf = derive_functor(
      reg, "KonstE",
      W1("f", fun_sort(es, es), [&](const Term&) { return W1("u", unit_sort(), [](const Term& u) { return u; }); }),
      W1("u", unit_sort(), [&](const Term&) { return mk_setlit({}, es); }));
  REQUIRE_MESSAGE(tf.ok, tf.error);
  CHECK(is_true(simplify(tf.obligation)));
}

TEST_CASE("derivation refuses definitions outside the state fragment") {
  Registry& reg = R();
  if (!reg.find_pred("Stepw")) {
    PredicateDef d;
    d.sig.name = "Stepw";
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, auto&) { return any_sort(); };
    OpDefinition def;
    def.pred_params = {"@T"};
    def.binder = "@x";
    Sort es = any_sort();
    def.body = a_satisfies(mk_fvar("@x", es), a_pred(pred_atom("@T", es), mk_fvar("@x", es)));
    d.def = def;
    reg.add_pred(d);
  }
  auto r = derive_nonrecursive(reg, "Stepw", PropKind::SH,
                               {{"s", mk_int(0)}, {"z", mk_int(0)}});
  CHECK(!r.ok);
  CHECK(r.error.find("manual-proof-required") != std::string::npos);
}

TEST_CASE("claiming a homomorphism for the linked list fails in the engine") {
  Registry& reg = R();
  // plausible zip/unzip witnesses; the list remains non-homomorphic
  Term s_wit = W1("l", list_sort(pair_sort(any_sort(), any_sort())),
                  [](const Term& l) { return mk_unzip(l); });
  Term z_wit = W1("p", pair_sort(list_sort(any_sort()), list_sort(any_sort())),
                  [](const Term& p) { return mk_zip(mk_proj(0, p), mk_proj(1, p)); });
  auto r = derive_nonrecursive(reg, "List", PropKind::SH, {{"s", s_wit}, {"z", z_wit}});
  CHECK(!r.ok);
  CHECK(r.error.find("entailment engine failed") != std::string::npos);
}

TEST_CASE("recursive derivation: linked list functor") {
  Registry reg = make_base_registry();
  stdlib_load(reg, {false, /*derive=*/false});
  Sort es = any_sort();
  // Cell's functor must exist first (component of the recursion spine)
  Term idm = W1("f", fun_sort(es, es), [](const Term& f) { return f; });
  Term dsing = W1("x", es, [&](const Term& x) { return mk_setlit({x}, es); });
  auto cell = derive_functor(reg, "Cell", idm, dsing);
  REQUIRE_MESSAGE(cell.ok, cell.error);
  reg.register_property(cell.instance, false);

  WfOrder ord;
  ord.pre = W1("l", list_sort(es), [](const Term& l) {
    return mk_con("suffixes", {l}, set_sort(l->sort));
  });
  auto lst = derive_recursive(
      reg, "List", PropKind::TF,
      {{"m", W1("f", fun_sort(es, es),
                [](const Term& f) {
                  return W1("l", list_sort(any_sort()),
                            [&](const Term& l) { return mk_map(f, l); });
                })},
       {"d", W1("l", list_sort(es), [](const Term& l) { return mk_setof(l); })}},
      ord);
  REQUIRE_MESSAGE(lst.ok, lst.error);
  CHECK(lst.instance.prov == Provenance::Derived);
  // the induction emits the domain-containment obligation d(f(x)) <= pre(x)
  CHECK(show_term(lst.obligation).find("suffixes") != std::string::npos);

  auto rr = reg.register_property(lst.instance, false);
  REQUIRE(std::holds_alternative<std::vector<std::string>>(rr));

  // oracle check of the derived functor on small heaps with lists <= 3
  FiniteModel h = make_heap_model(2, 1);
  h.max_list_len = 3;
  auto cex = check_property(h, reg, lst.instance);
  CHECK(!cex.has_value());
}

TEST_CASE("non-recursive operator routed through the induction entry point") {
  Registry& reg = R();
  Sort es = any_sort();
  WfOrder ord;
  ord.pre = W1("l", list_sort(es), [](const Term& l) {
    return mk_con("suffixes", {l}, set_sort(l->sort));
  });
  auto arr = derive_recursive(
      reg, "Array", PropKind::TF,
      {{"m", W1("f", fun_sort(es, es),
                [](const Term& f) {
                  return W1("l", list_sort(any_sort()),
                            [&](const Term& l) { return mk_map(f, l); });
                })},
       {"d", W1("l", list_sort(es), [](const Term& l) { return mk_setof(l); })}},
      ord);
  REQUIRE_MESSAGE(arr.ok, arr.error);  // identical to the Routine-3/4 output
}

TEST_CASE("oracle-checked registration refuses corrupted witnesses") {
  Registry reg = make_base_registry();
  stdlib_load(reg, {false, false});
  Sort es = any_sort();
  // Functor(Slice) with a mapper that ignores the element transformation
  PropertyInstance bad;
  bad.kind = PropKind::TF;
  bad.op = "Slice";
  bad.w["m"] = W1("f", fun_sort(es, es), [&](const Term&) {
    return W1("l", list_sort(es), [](const Term& l) { return l; });
  });
  bad.w["d"] = W1("l", list_sort(es), [](const Term& l) { return mk_setof(l); });
  auto r = reg.register_property(bad, true);
  REQUIRE(std::holds_alternative<Counterexample>(r));
  // and the registry did not keep the refused instance
  CHECK(reg.props_of("Slice", PropKind::TF).size() == 1);
}
