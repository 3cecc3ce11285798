#include "doctest.h"
#include "slr/check.hpp"
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

Pred TA() { return pred_atom("TA", int_sort()); }
Pred TB() { return pred_atom("TB", int_sort()); }
}  // namespace

TEST_CASE("reflexive entailment") {
  EntailSession s(R());
  Term x = mk_fvar("x", int_sort());
  Assertion a = a_pred(TA(), x);
  auto r = s.prove_entailment(a, a);
  REQUIRE(r.ok);
  CHECK(is_true(r.theta));
}

TEST_CASE("swap golden: one FB2 closure followed by two ID closures") {
  EntailSession s(R());
  Term x = mk_fvar("x", int_sort()), y = mk_fvar("y", int_sort());
  Assertion h = a_star(a_pred(TA(), x), a_pred(TB(), y));
  Assertion g = a_star(a_pred(TB(), y), a_pred(TA(), x));
  auto r = s.prove_entailment(h, g);
  REQUIRE(r.ok);
  CHECK(is_true(r.theta));
  CHECK(r.tp_root_labels() == std::vector<std::string>{"FB2", "ID", "ID"});

  // soundness on the oracle: theta holds, so the entailment must be valid
  const FiniteModel& m = builtin_models()[0];
  for (int xv = 0; xv <= 1; ++xv)
    for (int yv = 0; yv <= 1; ++yv)
      CHECK(valid(m, R(), a_implies(h, g), {{"x", v_int(xv)}, {"y", v_int(yv)}}));
}

TEST_CASE("list subtyping golden: obligation pins the mapped abstraction") {
  Registry& reg = R();
  EntailSession s(reg);
  Sort li = list_sort(int_sort());
  Term l = mk_fvar("l", li);
  Pred list_i = mk_list_pred(reg, pred_atom("IntV", int_sort()));
  Pred nullable = mk_list_pred(reg, pred_sum(pred_atom("IntV", int_sort()),
                                             pred_atom("Null", unit_sort())));
  Sort li2 = nullable->abst;
  std::string lp = "l2";
  Assertion goal = a_exists(
      lp, li2,
      a_and(a_pred(nullable, mk_fvar(lp, li2)),
            a_pure(mk_eq(mk_fvar(lp, li2),
                         mk_map(lam_of("e", int_sort(),
                                       mk_inj1(mk_fvar("e", int_sort()),
                                               sum_sort(int_sort(), unit_sort()))),
                               l)))));
  auto r = s.prove_entailment(a_pred(list_i, l), goal);
  REQUIRE(r.ok);
  // the goal existential was bound to map(inj1)(l)
  REQUIRE(r.goal_bindings.size() == 1);
  Term bound = r.goal_bindings[0].second;
  CHECK(show_term(bound).find("map(") != std::string::npos);

  // theta conjunction is equivalent to l2 = map(inj1)(l) over lists <= length 3
  FiniteModel m = make_heap_model(2, 1);
  m.max_list_len = 3;
  std::vector<Value> lists = m.universe(li);
  auto inj1s = [&](const Value& xs) {
    std::vector<Value> out;
    for (auto& e : xs.elems) out.push_back(v_inj1(e));
    return v_list(out);
  };
  int agree = 0;
  for (auto& lv : lists) {
    for (auto& l2v : lists) {  // candidate l2 as tagged list
      Value tagged = inj1s(l2v);
      std::map<std::string, Value> env = {{"l", lv}, {"l2", tagged}};
      ThetaVerdict verdict = eval_theta(m, reg, r.theta, env);
      bool expect = value_eq(tagged, inj1s(lv));
      REQUIRE(verdict != ThetaVerdict::Unknown);
      CHECK((verdict == ThetaVerdict::True) == expect);
      ++agree;
    }
  }
  CHECK(agree > 0);
}

TEST_CASE("bucket extraction derives from S1 and SD of the quantifier") {
  Registry& reg = R();
  EntailSession s(reg);
  Sort key = abstract_sort("key");
  Pred inner = mk_ref(reg, mk_list({key_int(mk_fvar("_i", int_sort()))}, key), mk_intv(reg));
  Term I = mk_setlit({mk_int(1), mk_int(2)}, int_sort());
  Pred whole = mk_bigstar(reg, I, inner);
  Pred rest = mk_bigstar(reg, simplify(mk_setminus(I, mk_setlit({mk_int(2)}, int_sort()))), inner);
  Pred elem = mk_ref(reg, mk_list({key_int(mk_int(2))}, key), mk_intv(reg));
  Term xs = mk_fvar("xs", whole->abst);
  Assertion h = a_pred(whole, xs);
  Assertion g = a_exists("r", rest->abst,
                         a_star(a_pred(rest, mk_fvar("r", rest->abst)),
                                a_exists("v", int_sort(),
                                         a_pred(elem, mk_fvar("v", int_sort())))));
  auto r = s.prove_entailment(h, g);
  REQUIRE(r.ok);
  auto labels = r.tp_root_labels();
  REQUIRE(labels.size() == 2);
  CHECK(labels[0] == "SD_R");
  CHECK(labels[1] == "S1_E");

  // oracle validation on a 3-cell heap with cells 1 and 2 owned
  FiniteModel m = make_heap_model(3, 1);
  Value w =
      *m.star(heap_cell({v_int(1)}, v_rat(1, 1), v_int(0)), heap_cell({v_int(2)}, v_rat(1, 1), v_int(1)));
  Value xsv = v_set({v_pair(v_int(1), v_int(0)), v_pair(v_int(2), v_int(1))});
  CHECK(force(m, reg, w, h, {{"xs", xsv}}));
  CHECK(force(m, reg, w, g, {{"xs", xsv}}));
}

TEST_CASE("record chain: nested field access via Path associativity") {
  Registry& reg = R();
  EntailSession s(reg);
  Term x = mk_fvar("x", int_sort());
  Term addr = addr_of({key_int(mk_int(1))});
  Pred nested = mk_ref(reg, addr, mk_field(reg, "a", mk_field(reg, "b", mk_intv(reg))));
  Pred flat = mk_ref(reg, addr,
                     mk_path(reg, mk_list({mk_sym("a"), mk_sym("b")}, abstract_sort("key")),
                             mk_intv(reg)));
  auto r = s.prove_entailment(a_pred(nested, x), a_pred(flat, x));
  REQUIRE(r.ok);
  CHECK(is_true(r.theta));
  // and the split of a two-field record into separate field ownership
  Pred two = mk_ref(reg, addr,
                    pred_star(mk_field(reg, "a", mk_intv(reg)), mk_field(reg, "b", mk_intv(reg))));
  Pred fa = mk_ref(reg, addr, mk_field(reg, "a", mk_intv(reg)));
  Pred fb = mk_ref(reg, addr, mk_field(reg, "b", mk_intv(reg)));
  Term xy = mk_fvar("xy", two->abst);
  Assertion goal = a_star(a_pred(fa, simplify(mk_proj(0, xy))), a_pred(fb, simplify(mk_proj(1, xy))));
  auto r2 = s.prove_entailment(a_pred(two, xy), goal);
  REQUIRE(r2.ok);
  CHECK(is_true(r2.theta));
}

TEST_CASE("emp side-goals: zero slices and missing instances") {
  Registry& reg = R();
  EntailSession s(reg);
  EntailResult out;
  // BOT -> emp
  CHECK(s.solve_to_emp(a_bot(), out, 0).has_value());
  // zero-width slice discharges through SZero with a membership obligation
  Pred z = mk_slice(reg, mk_ivl(mk_int(2), mk_int(2)), mk_intv(reg));
  Term e = mk_list({}, any_sort());
  auto t = s.solve_to_emp(a_pred(z, e), out, 0);
  REQUIRE(t.has_value());
  CHECK(is_true(simplify(*t)));
  // emp -> x :: F_0(T) obligation x in D
  auto t2 = s.solve_from_emp(a_pred(z, mk_fvar("xs", z->abst)), out, 0);
  REQUIRE(t2.has_value());
  // membership obligation xs in {[]}, simplified to an equation on the
  // zero-width abstraction
  CHECK(!is_true(simplify(*t2)));
  CHECK(show_term(simplify(*t2)).find("=") != std::string::npos);
  // ownership is not discardable: Ref -> emp fails
  Pred rp = mk_ref(reg, addr_of({key_int(mk_int(1))}), mk_intv(reg));
  CHECK(!s.solve_to_emp(a_pred(rp, mk_fvar("x", int_sort())), out, 0).has_value());
}

TEST_CASE("disjunction resolution backtracks once") {
  Registry& reg = R();
  Term x = mk_fvar("x", int_sort());
  Assertion ta = a_pred(TA(), x);
  Assertion tb = a_pred(TB(), x);
  {
    EntailSession s(reg);
    auto r = s.prove_entailment(ta, a_or(ta, tb));
    REQUIRE(r.ok);
    CHECK(is_true(r.theta));
    bool left = false;
    for (auto& e : r.events)
      if (e.rule == "GV_L") left = true;
    CHECK(left);
  }
  {
    EntailSession s(reg);
    // only the right branch closes without leftover frame
    auto r = s.prove_entailment(tb, a_or(ta, tb));
    REQUIRE(r.ok);
    bool right = false;
    for (auto& e : r.events)
      if (e.rule == "GV_R") right = true;
    CHECK(right);
  }
}

TEST_CASE("wand and forall goals stay inside the fragment machinery") {
  Registry& reg = R();
  EntailSession s(reg);
  Term x = mk_fvar("x", int_sort());
  // TA(x) |- TB(y) -* (TB(y) ** TA(x))
  Term y = mk_fvar("y", int_sort());
  Assertion g = a_wand(a_pred(TB(), y), a_star(a_pred(TB(), y), a_pred(TA(), x)));
  auto r = s.prove_entailment(a_pred(TA(), x), g);
  REQUIRE(r.ok);
  CHECK(is_true(r.theta));

  EntailSession s2(reg);
  Assertion g2 = a_forall("v", int_sort(),
                          a_implies(a_pure(mk_eq(mk_fvar("v", int_sort()), x)),
                                    a_pred(TA(), mk_fvar("v", int_sort()))));
  auto r2 = s2.prove_entailment(a_pred(TA(), x), g2);
  REQUIRE(r2.ok);
  // obligation closes over the fixed variable
  CHECK(show_term(r2.theta).find("ALL") != std::string::npos);
}

TEST_CASE("existential hypothesis is skolemized before reduction") {
  Registry& reg = R();
  EntailSession s(reg);
  Term x = mk_fvar("x", int_sort());
  Assertion h = a_exists("a", int_sort(), a_pred(TA(), mk_fvar("a", int_sort())));
  Assertion g = a_exists("b", int_sort(), a_pred(TA(), mk_fvar("b", int_sort())));
  auto r = s.prove_entailment(h, g);
  REQUIRE(r.ok);
  (void)x;
}

TEST_CASE("end-to-end soundness on randomized state/goal pairs") {
  Registry& reg = R();
  const FiniteModel& m = builtin_models()[0];
  unsigned seed = 424242;
  auto rnd = [&] { seed = seed * 1664525u + 1013904223u; return seed >> 16; };
  std::vector<Pred> atoms = {TA(), TB()};
  int proved = 0, validated = 0;
  for (int i = 0; i < 500; ++i) {
    // random small star of atoms with int literals as abstractions
    auto mk_state = [&](int n) {
      Assertion acc = a_pred(atoms[rnd() % 2], mk_int(rnd() % 2));
      for (int k = 1; k < n; ++k)
        acc = a_star(acc, a_pred(atoms[rnd() % 2], mk_int(rnd() % 2)));
      return acc;
    };
    Assertion h = mk_state(1 + rnd() % 2);
    Assertion g = rnd() % 2 ? h : mk_state(1 + rnd() % 2);
    EntailSession s(reg);
    auto r = s.prove_entailment(h, g);
    if (!r.ok) continue;
    ++proved;
    ThetaVerdict v = eval_theta(m, reg, r.theta);
    if (v == ThetaVerdict::True) {
      CHECK(valid(m, reg, a_implies(h, g)));
      ++validated;
    }
  }
  CHECK(proved > 100);
  CHECK(validated > 50);
}
