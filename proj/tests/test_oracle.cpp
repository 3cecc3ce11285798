#include "doctest.h"
#include "slr/check.hpp"
#include "slr/force.hpp"
#include "slr/model.hpp"
#include "slr/simplify.hpp"
#include "slr/stdlib.hpp"

using namespace slr;

namespace {
Registry& test_registry() {
  static Registry reg = [] {
    Registry r = make_base_registry();
    stdlib_load(r, {/*oracle_check=*/false, /*derive=*/false});
    return r;
  }();
  return reg;
}

Pred TA() { return pred_atom("TA", int_sort()); }
Pred TB() { return pred_atom("TB", int_sort()); }
}  // namespace

TEST_CASE("builtin models satisfy the PCM laws") {
  for (auto& m : builtin_models()) {
    auto err = validate_pcm(m);
    INFO(m.name, ": ", err ? *err : "");
    CHECK(!err);
  }
}

TEST_CASE("law checker rejects mutated op tables") {
  FiniteModel m = model_load(model_dump(make_heap_model(2, 1)));
  REQUIRE(m.use_table);
  CHECK(!validate_pcm(m));  // round-tripped table is still a PCM
  // corrupt one entry: w * unit = some other world
  int u = m.world_index(m.unit);
  for (auto& [k, v] : m.table) {
    if (k.second == u && v != (int)((k.first + 1) % m.carrier.size())) {
      m.table[k] = (int)((k.first + 1) % m.carrier.size());
      break;
    }
  }
  CHECK(validate_pcm(m).has_value());
}

TEST_CASE("forcing clauses") {
  const FiniteModel& m = builtin_models()[0];  // heap2
  const Registry& reg = test_registry();
  CHECK(force(m, reg, m.unit, a_emp()));
  CHECK(force(m, reg, m.carrier.back(), a_top()));
  CHECK(!force(m, reg, m.unit, a_bot()));

  // star agrees with exhaustive split enumeration on a composed heap
  Value h1 = heap_cell({v_int(0)}, v_rat(1, 1), v_int(0));
  Value h2 = heap_cell({v_int(1)}, v_rat(1, 1), v_int(1));
  Value h12 = *m.star(h1, h2);
  Assertion a = a_star(a_pred(TA(), mk_int(0)), a_pred(TB(), mk_int(1)));
  CHECK(force(m, reg, h12, a));
  CHECK(!force(m, reg, h1, a));
}

TEST_CASE("memoized splits agree with naive enumeration") {
  const FiniteModel& m = builtin_models()[0];
  for (auto& w : m.carrier) {
    auto naive = m.splits_naive(w);
    auto memo = m.splits(w);
    auto norm = [](std::vector<std::pair<Value, Value>> v) {
      std::sort(v.begin(), v.end(), [](auto& a, auto& b) {
        if (int c = value_cmp(a.first, b.first)) return c < 0;
        return value_cmp(a.second, b.second) < 0;
      });
      return v;
    };
    auto a = norm(naive), b = norm(memo);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(value_eq(a[i].first, b[i].first));
      CHECK(value_eq(a[i].second, b[i].second));
    }
  }
}

TEST_CASE("validity") {
  const FiniteModel& m = builtin_models()[0];
  const Registry& reg = test_registry();
  CHECK(valid(m, reg, a_top()));
  Term x = mk_fvar("x", int_sort());
  Assertion ta = a_pred(TA(), x);
  CHECK(valid(m, reg, a_implies(ta, ta), {{"x", v_int(0)}}));
  // swap entailment, checked by enumeration over abstractions
  Term y = mk_fvar("y", int_sort());
  Assertion lhs = a_star(a_pred(TA(), x), a_pred(TB(), y));
  Assertion rhs = a_star(a_pred(TB(), y), a_pred(TA(), x));
  for (int xv = 0; xv <= 1; ++xv)
    for (int yv = 0; yv <= 1; ++yv)
      CHECK(valid(m, reg, a_implies(lhs, rhs), {{"x", v_int(xv)}, {"y", v_int(yv)}}));
}

TEST_CASE("wand and satisfies clauses") {
  const FiniteModel& m = builtin_models()[0];
  const Registry& reg = test_registry();
  Term x = mk_fvar("x", int_sort());
  // TA(x) -* (TA ** TB) under a TB-cell
  Assertion w = a_wand(a_pred(TA(), x), a_star(a_pred(TA(), x), a_pred(TB(), mk_int(1))));
  Value h2 = heap_cell({v_int(1)}, v_rat(1, 1), v_int(1));
  CHECK(force(m, reg, h2, w, {{"x", v_int(0)}}));
  CHECK(!force(m, reg, m.unit, w, {{"x", v_int(0)}}));

  // satisfaction operator jumps to the denoted world
  Assertion sat = a_satisfies(mk_int(1), a_pred(mk_intv(reg), mk_int(1)));
  CHECK(force(m, reg, m.unit, sat));
  Assertion sat2 = a_satisfies(mk_int(1), a_pred(mk_intv(reg), mk_int(0)));
  CHECK(!force(m, reg, m.unit, sat2));
}

TEST_CASE("record-path natives: Ref, Path, Slice, perm") {
  const Registry& reg = test_registry();
  FiniteModel m = make_recmem_model();
  Term addr = addr_of({key_int(mk_int(1)), key_field("a"), key_field("b")});
  Pred r = mk_ref(reg, addr, mk_intv(reg));
  Value w = heap_cell({v_int(1), v_sym("a"), v_sym("b")}, v_rat(1, 1), v_int(1));
  CHECK(force(m, reg, w, a_pred(r, mk_int(1))));
  CHECK(!force(m, reg, w, a_pred(r, mk_int(0))));

  // Ref[1] of the nested record {a: {b: IntV}}
  Pred nested = mk_ref(reg, addr_of({key_int(mk_int(1)), key_field("a")}),
                       mk_field(reg, "b", mk_intv(reg)));
  CHECK(force(m, reg, w, a_pred(nested, mk_int(1))));

  // half permission scales the cell
  Pred half = mk_perm(reg, mk_rat(1, 2), r);
  Value wh = heap_cell({v_int(1), v_sym("a"), v_sym("b")}, v_rat(1, 2), v_int(1));
  CHECK(force(m, reg, wh, a_pred(half, mk_int(1))));
  CHECK(!force(m, reg, w, a_pred(half, mk_int(1))));

  // sharing law: x :: (1/2+1/2)+T <-> split into two halves
  Assertion both = a_star(a_pred(half, mk_int(1)), a_pred(half, mk_int(1)));
  CHECK(force(m, reg, w, both));
}

TEST_CASE("slice native over a grid") {
  const Registry& reg = test_registry();
  FiniteModel g = make_grid_model(2, 1);
  // 2x2 matrix [[0,1],[1,0]]
  Value w = g.unit;
  int vals[2][2] = {{0, 1}, {1, 0}};
  for (int r0 = 0; r0 < 2; ++r0)
    for (int c = 0; c < 2; ++c)
      w = *g.star(w, heap_cell({v_int(r0), v_int(c)}, v_rat(1, 1), v_int(vals[r0][c])));
  Pred mat = mk_slice(reg, mk_ivl(mk_int(0), mk_int(2)),
                      mk_slice(reg, mk_ivl(mk_int(0), mk_int(2)), mk_intv(reg)));
  Term abst = mk_list({mk_list({mk_int(0), mk_int(1)}, int_sort()),
                       mk_list({mk_int(1), mk_int(0)}, int_sort())},
                      list_sort(int_sort()));
  CHECK(force(g, reg, w, a_pred(mat, abst)));
  Term wrong = mk_list({mk_list({mk_int(1), mk_int(1)}, int_sort()),
                        mk_list({mk_int(1), mk_int(0)}, int_sort())},
                       list_sort(int_sort()));
  CHECK(!force(g, reg, w, a_pred(mat, wrong)));
}

TEST_CASE("list and lseg natives") {
  const Registry& reg = test_registry();
  // List over plain heaps: one cell per node
  FiniteModel h = make_heap_model(2, 1);
  Pred lp = mk_list_pred(reg, mk_intv(reg));
  CHECK(force(h, reg, h.unit, a_pred(lp, mk_list({}, int_sort()))));
  Value one = heap_cell({v_int(1)}, v_rat(1, 1), v_int(1));
  CHECK(force(h, reg, one, a_pred(lp, mk_list({mk_int(1)}, int_sort()))));
  CHECK(!force(h, reg, one, a_pred(lp, mk_list({}, int_sort()))));

  FiniteModel lm = make_listmem_model();
  // chain: block1{data=1,next=2} block2{data=0,next=0}
  Value w = *heap_star(*heap_star(heap_cell({v_int(1), v_sym("data")}, v_rat(1, 1), v_int(1)),
                                  heap_cell({v_int(1), v_sym("next")}, v_rat(1, 1), v_int(2)),
                                  v_rat(1, 1)),
                       *heap_star(heap_cell({v_int(2), v_sym("data")}, v_rat(1, 1), v_int(0)),
                                  heap_cell({v_int(2), v_sym("next")}, v_rat(1, 1), v_int(0)),
                                  v_rat(1, 1)),
                       v_rat(1, 1));
  Term ar = mk_con("arrow", {mk_int(1), mk_int(2), mk_int(0)}, scalar_sort("larrow"));
  Pred seg = mk_lseg(reg, ar, mk_intv(reg));
  Term l10 = mk_list({mk_int(1), mk_int(0)}, int_sort());
  CHECK(force(lm, reg, w, a_pred(seg, l10)));
  Term l11 = mk_list({mk_int(1), mk_int(1)}, int_sort());
  CHECK(!force(lm, reg, w, a_pred(seg, l11)));
  // zero law: Lseg_{a ->0 a} at the empty heap
  Term z = mk_con("arrow", {mk_int(1), mk_int(0), mk_int(1)}, scalar_sort("larrow"));
  CHECK(force(lm, reg, lm.unit, a_pred(mk_lseg(reg, z, mk_intv(reg)), mk_list({}, int_sort()))));
}

TEST_CASE("check_tp_solution: identity and fallback solutions hold, corrupted f caught") {
  const Registry& reg = test_registry();
  const FiniteModel& m = builtin_models()[0];
  Sort pi = pair_sort(int_sort(), unit_sort());
  Term dom = mk_setlit({mk_pair(mk_int(0), mk_unit()), mk_pair(mk_int(1), mk_unit())}, pi);
  TpProblem idp{TpKind::BiTP, TA(), TA(), dom};
  TpSolution ids{mk_bool(true), lam_of("p", pi, mk_fvar("p", pi)), pred_emp(), pred_emp()};
  CHECK(!check_tp_solution(m, reg, idp, ids));

  // FB2 on unrelated atoms
  Sort pp = pair_sort(int_sort(), int_sort());
  Term dom2 = mk_setlit({mk_pair(mk_int(0), mk_int(1))}, pp);
  TpProblem fb{TpKind::BiTP, TA(), TB(), dom2};
  Term swap = lam_of("p", pp, mk_pair(mk_proj(1, mk_fvar("p", pp)), mk_proj(0, mk_fvar("p", pp))));
  TpSolution fbs{mk_bool(true), swap, TB(), TA()};
  CHECK(!check_tp_solution(m, reg, fb, fbs));

  // corrupt f on a 2-cell model: claim the abstraction changes to x+1
  Term bad = lam_of("p", pi, mk_pair(mk_add(mk_proj(0, mk_fvar("p", pi)), mk_int(1)), mk_unit()));
  TpSolution bads{mk_bool(true), bad, pred_emp(), pred_emp()};
  auto cex = check_tp_solution(m, reg, idp, bads);
  REQUIRE(cex.has_value());
  CHECK(cex->model == m.name);
}

TEST_CASE("check_property accepts the Ref laws and rejects a non-homomorphic toy") {
  Registry reg = make_base_registry();
  stdlib_load(reg, {false, false});
  const FiniteModel& m = builtin_models()[0];

  Term idt = lam_of("x", any_sort(), mk_fvar("x", any_sort()));
  PropertyInstance sh;
  sh.kind = PropKind::SH;
  sh.op = "Ref";
  sh.w = {{"s", idt}, {"z", idt}};
  CHECK(!check_property(m, reg, sh));

  Term mball = lam_of("f", fun_sort(any_sort(), any_sort()), mk_fvar("f", fun_sort(any_sort(), any_sort())));
  Term dsing = lam_of("x", any_sort(), mk_setlit({mk_fvar("x", any_sort())}, any_sort()));
  PropertyInstance tf;
  tf.kind = PropKind::TF;
  tf.op = "Ref";
  tf.w = {{"m", mball}, {"d", dsing}};
  CHECK(!check_property(m, reg, tf));

  // cell-counting operator: CC(T) relates the number of cells to the world
  PredicateDef cc;
  cc.sig.name = "CC";
  cc.sig.n_preds = 1;
  cc.sig.abst_sort = [](auto&, auto&) { return int_sort(); };
  cc.native = [](ForceCtx&, const std::vector<Value>&, const std::vector<Pred>&, const Value& x,
                 const Value& w) {
    return w.k == VKind::Set && x.k == VKind::Int && (long long)w.elems.size() == x.i;
  };
  reg.add_pred(cc);
  PropertyInstance bad;
  bad.kind = PropKind::SH;
  bad.op = "CC";
  // wrong merge witness: keeps only the first count
  Term wrongz = lam_of("p", pair_sort(int_sort(), int_sort()),
                       mk_proj(0, mk_fvar("p", pair_sort(int_sort(), int_sort()))));
  Term splt = lam_of("x", int_sort(), mk_pair(mk_fvar("x", int_sort()), mk_int(0)));
  bad.w = {{"s", splt}, {"z", wrongz}};
  auto cex = check_property(m, reg, bad);
  CHECK(cex.has_value());
}

TEST_CASE("model dump/load round trip preserves forcing") {
  const Registry& reg = test_registry();
  FiniteModel m0 = make_heap_model(2, 1);
  FiniteModel m1 = model_load(model_dump(m0));
  REQUIRE(m1.carrier.size() == m0.carrier.size());
  Term x = mk_fvar("x", int_sort());
  Assertion a = a_star(a_pred(TA(), x), a_pred(TB(), mk_int(0)));
  for (auto& w : m0.carrier) {
    bool f0 = force(m0, reg, w, a, {{"x", v_int(1)}});
    bool f1 = force(m1, reg, w, a, {{"x", v_int(1)}});
    CHECK(f0 == f1);
  }
}

TEST_CASE("substitution lemma against the evaluator") {
  // denotation of t[u/a] equals denotation of t under a binding a -> u
  FiniteModel m = make_heap_model(2, 1);
  Term a = mk_fvar("a", int_sort());
  std::vector<Term> ts = {
      mk_add(a, mk_int(2)),
      mk_mul(a, a),
      mk_lslice(mk_list({mk_int(0), mk_int(1), mk_int(2)}, int_sort()), a, mk_int(3)),
      mk_mem(a, mk_setlit({mk_int(1), mk_int(2)}, int_sort())),
      mk_if(mk_le(a, mk_int(1)), a, mk_int(9)),
  };
  for (auto& t : ts)
    for (long long v = 0; v <= 2; ++v) {
      Term tsub = subst_fvar(t, "a", mk_int(v));
      EvalEnv e1;
      e1.universes = &m;
      std::map<std::string, Value> env = {{"a", v_int(v)}};
      EvalEnv e2;
      e2.universes = &m;
      e2.fvars = &env;
      auto r1 = eval_term(tsub, e1);
      auto r2 = eval_term(t, e2);
      REQUIRE(r1.has_value() == r2.has_value());
      if (r1) CHECK(value_eq(*r1, *r2));
    }
}

TEST_CASE("simplify preserves denotation on randomized terms") {
  // small seeded generator over int/list/set terms
  FiniteModel m = make_heap_model(2, 1);
  unsigned seed = 12345;
  auto rnd = [&] { seed = seed * 1664525u + 1013904223u; return seed >> 16; };
  std::function<Term(int, const Sort&)> gen = [&](int depth, const Sort& s) -> Term {
    if (depth <= 0 || rnd() % 4 == 0) {
      if (s->kind == SortKind::Int) return mk_int((long long)(rnd() % 3));
      if (s->kind == SortKind::Bool) return mk_bool(rnd() % 2 == 0);
      if (s->kind == SortKind::List) return mk_list({mk_int(rnd() % 2), mk_int(rnd() % 2)}, int_sort());
      return mk_int(0);
    }
    if (s->kind == SortKind::Int) {
      switch (rnd() % 4) {
        case 0: return mk_add(gen(depth - 1, s), gen(depth - 1, s));
        case 1: return mk_sub(gen(depth - 1, s), gen(depth - 1, s));
        case 2: return mk_mul(gen(depth - 1, s), gen(depth - 1, s));
        default: return mk_len(gen(depth - 1, list_sort(int_sort())));
      }
    }
    if (s->kind == SortKind::Bool) {
      switch (rnd() % 4) {
        case 0: return mk_and(gen(depth - 1, s), gen(depth - 1, s));
        case 1: return mk_not(gen(depth - 1, s));
        case 2: return mk_eq(gen(depth - 1, int_sort()), gen(depth - 1, int_sort()));
        default: return mk_le(gen(depth - 1, int_sort()), gen(depth - 1, int_sort()));
      }
    }
    if (s->kind == SortKind::List) {
      switch (rnd() % 3) {
        case 0: return mk_append(gen(depth - 1, s), gen(depth - 1, s));
        case 1:
          return mk_lslice(gen(depth - 1, s), gen(depth - 1, int_sort()), gen(depth - 1, int_sort()));
        default: {
          Term f = lam_of("x", int_sort(), mk_add(mk_fvar("x", int_sort()), mk_int(1)));
          return mk_map(f, gen(depth - 1, s));
        }
      }
    }
    return mk_int(0);
  };
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Sort s = i % 3 == 0 ? int_sort() : i % 3 == 1 ? bool_sort() : list_sort(int_sort());
    Term t = gen(3, s);
    Term st = simplify(t);
    CHECK(term_eq(simplify(st), st));  // idempotent
    EvalEnv e;
    e.universes = &m;
    auto r1 = eval_term(t, e);
    auto r2 = eval_term(st, e);
    REQUIRE(r1.has_value() == r2.has_value());
    if (r1) {
      CHECK(value_eq(*r1, *r2));
      ++checked;
    }
  }
  CHECK(checked > 500);
}
