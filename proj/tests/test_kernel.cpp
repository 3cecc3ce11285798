#include "doctest.h"
#include "slr/assertion.hpp"
#include "slr/simplify.hpp"
#include "slr/term.hpp"

using namespace slr;

namespace {
Sort elem() { return abstract_sort("elem"); }
Pred TP_() { return pred_atom("T", elem()); }
Pred UP_() { return pred_atom("U", elem()); }
}  // namespace

TEST_CASE("substitute: direct replacement") {
  Term a = mk_fvar("a", int_sort());
  Term t = mk_add(a, mk_int(1));
  Term r = subst_fvar(t, "a", mk_int(2));
  CHECK(term_eq(r, mk_add(mk_int(2), mk_int(1))));
  CHECK(term_eq(simplify(r), mk_int(3)));
}

TEST_CASE("substitute: shadowed binder untouched") {
  Term id = lam_of("a", int_sort(), mk_fvar("a", int_sort()));
  Term r = subst_fvar(id, "a", mk_int(5));
  CHECK(term_eq(r, id));
}

TEST_CASE("substitute: subterm replacement under application") {
  Sort li = list_sort(int_sort());
  Term f = mk_fvar("f", fun_sort(int_sort(), int_sort()));
  Term l = mk_fvar("l", li);
  Term t = mk_map(f, l);
  Term two = mk_list({mk_int(1), mk_int(2)}, int_sort());
  Term r = subst_fvar(t, "l", two);
  CHECK(term_eq(r, mk_map(f, two)));
}

TEST_CASE("substitute: sort mismatch is an error") {
  Term t = mk_add(mk_fvar("a", int_sort()), mk_int(1));
  CHECK_THROWS_AS(subst_fvar(t, "a", mk_bool(true)), SortError);
}

TEST_CASE("alpha-equivalence is structural equality") {
  Term l1 = lam_of("x", int_sort(), mk_add(mk_fvar("x", int_sort()), mk_int(1)));
  Term l2 = lam_of("y", int_sort(), mk_add(mk_fvar("y", int_sort()), mk_int(1)));
  CHECK(term_eq(l1, l2));
}

TEST_CASE("simplify: projections, beta, lets") {
  Term a = mk_fvar("a", int_sort());
  Term b = mk_fvar("b", bool_sort());
  CHECK(term_eq(simplify(mk_proj(0, mk_pair(a, b))), a));
  Term idy = mk_app(lam_of("x", int_sort(), mk_fvar("x", int_sort())), a);
  CHECK(term_eq(simplify(idy), a));
  Term lt = mk_let("x", a, mk_add(mk_bvar(0, int_sort()), mk_bvar(0, int_sort())));
  CHECK(term_eq(simplify(lt), simplify(mk_add(a, a))));
}

TEST_CASE("simplify: map fusion and zip with unit replication") {
  Sort li = list_sort(int_sort());
  Term l = mk_fvar("l", li);
  Term f = lam_of("x", int_sort(), mk_add(mk_fvar("x", int_sort()), mk_int(1)));
  Term mm = mk_map(f, mk_map(f, l));
  Term fused = simplify(mm);
  CHECK(fused->kind == TermKind::Con);
  CHECK(fused->name == "map");
  CHECK(term_eq(fused->args[1], l));

  Term z = mk_zip(l, mk_replicate(mk_unit(), mk_len(l)));
  Term zs = simplify(z);
  REQUIRE(zs->name == "map");
  Term probe = simplify(mk_map(zs->args[0], mk_list({mk_int(7)}, int_sort())));
  CHECK(term_eq(probe, mk_list({mk_pair(mk_int(7), mk_unit())}, pair_sort(int_sort(), unit_sort()))));
}

TEST_CASE("simplify: linear arithmetic canonicalization") {
  Term n = mk_fvar("N", int_sort());
  Term lhs = mk_add(n, n);
  Term rhs = mk_mul(mk_int(2), n);
  CHECK(term_eq(simplify(lhs), simplify(rhs)));
  CHECK(is_true(simplify(mk_eq(lhs, rhs))));
  CHECK(is_false(simplify(mk_eq(mk_add(n, mk_int(1)), n))));
}

TEST_CASE("simplify is idempotent on assorted terms") {
  Sort li = list_sort(int_sort());
  std::vector<Term> ts = {
      mk_add(mk_fvar("a", int_sort()), mk_mul(mk_int(3), mk_fvar("b", int_sort()))),
      mk_map(lam_of("x", int_sort(), mk_fvar("x", int_sort())), mk_fvar("l", li)),
      mk_unzip(mk_zip(mk_fvar("l", li), mk_fvar("r", li))),
      mk_subset(mk_setlit({mk_int(1)}, int_sort()), mk_fvar("S", set_sort(int_sort()))),
      mk_sumcase(mk_inj1(mk_int(1), sum_sort(int_sort(), unit_sort())),
                 lam_of("x", int_sort(), mk_fvar("x", int_sort())),
                 lam_of("u", unit_sort(), mk_int(0))),
  };
  for (auto& t : ts) {
    Term s1 = simplify(t);
    Term s2 = simplify(s1);
    CHECK(term_eq(s1, s2));
  }
}

TEST_CASE("classify: tightest class per the state/goal/entail grammars") {
  Term x = mk_fvar("x", elem());
  Assertion sp = a_and(a_pred(TP_(), x), a_pure(mk_eq(x, x)));
  CHECK(classify(sp) == FragmentClass::StateS);

  Assertion s = a_pred(TP_(), x);
  Assertion g = a_wand(s, a_pred(UP_(), x));
  CHECK(classify(g) == FragmentClass::GoalG);

  Assertion sat = a_satisfies(mk_fvar("t", elem()), s);
  CHECK(classify(sat) == FragmentClass::Outside);

  Assertion ent = a_implies(s, g);
  CHECK(classify(ent) == FragmentClass::EntailE);

  // PredApp is S regardless of how the predicate is defined
  Pred def = pred_defined("W", "v", elem(), a_satisfies(mk_fvar("v", elem()), s));
  CHECK(classify(a_pred(def, x)) == FragmentClass::StateS);
}

TEST_CASE("classify agrees with the reference on grammar samples") {
  Term x = mk_fvar("x", elem());
  Assertion s = a_pred(TP_(), x);
  Assertion u = a_pred(UP_(), x);
  std::vector<Assertion> samples = {
      s,
      a_top(),
      a_bot(),
      a_emp(),
      a_star(s, u),
      a_and(s, a_pure(mk_bool(true))),
      a_exists("a", elem(), a_pred(TP_(), mk_fvar("a", elem()))),
      a_star(s, a_wand(u, s)),
      a_implies(a_pure(mk_bool(true)), s),
      a_and(a_star(s, u), a_wand(s, u)),
      a_forall("a", elem(), a_pred(TP_(), mk_fvar("a", elem()))),
      a_implies(s, a_star(u, s)),
      a_not(s),
      a_satisfies(x, s),
      a_or(s, u),
      a_wand(a_wand(s, u), s),
  };
  for (auto& a : samples) CHECK(classify(a) == classify_reference(a));
}

TEST_CASE("hoist_exists") {
  Sort e = elem();
  Pred Ta = pred_atom("Ta", e);
  Term x = mk_fvar("x", e), y = mk_fvar("y", e);
  Assertion inner = a_exists("a", e, a_pred(Ta, mk_fvar("a", e)));
  Assertion star = a_star(inner, a_pred(UP_(), y));
  Assertion h = hoist_exists(star);
  REQUIRE(h->kind == AKind::Exists);
  CHECK(h->kids[0]->kind == AKind::Star);

  CHECK(hoist_exists(a_pred(TP_(), x))->kind == AKind::PredApp);

  Assertion conj = a_and(inner, a_pure(mk_eq(y, y)));
  Assertion h2 = hoist_exists(conj);
  REQUIRE(h2->kind == AKind::Exists);
  CHECK(h2->kids[0]->kind == AKind::And);
}

TEST_CASE("hoist_exists avoids capture") {
  Sort e = elem();
  Assertion left = a_exists("a", e, a_pred(TP_(), mk_fvar("a", e)));
  Assertion right = a_pred(UP_(), mk_fvar("a", e));  // free `a` on the right
  Assertion h = hoist_exists(a_star(left, right));
  REQUIRE(h->kind == AKind::Exists);
  CHECK(h->binder != "a");
  // the free right-hand `a` must survive
  std::set<std::string> fv;
  a_collect_fvars(h, fv);
  CHECK(fv.count("a"));
}

TEST_CASE("as_pred_app") {
  Term x = mk_fvar("x", elem()), y = mk_fvar("y", elem());
  auto [t1, p1] = as_pred_app(a_pred(TP_(), x));
  CHECK(term_eq(t1, x));
  CHECK(pred_eq(p1, TP_()));

  auto [t2, p2] = as_pred_app(a_star(a_pred(TP_(), x), a_pred(UP_(), y)));
  CHECK(term_eq(t2, mk_pair(x, y)));
  CHECK(p2->kind == PredKind::Star);

  auto [t3, p3] = as_pred_app(a_emp());
  CHECK(term_eq(t3, mk_unit()));
  CHECK(p3->kind == PredKind::Emp);
}

TEST_CASE("assertion_simplify drops unit clutter") {
  Term x = mk_fvar("x", elem());
  Assertion a = a_star(a_emp(), a_pred(TP_(), x));
  CHECK(aeq(assertion_simplify(a), a_pred(TP_(), x)));
  Assertion b = a_star(a_pred(pred_emp(), mk_unit()), a_pred(TP_(), x));
  CHECK(aeq(assertion_simplify(b), a_pred(TP_(), x)));
  Assertion c = a_and(a_pred(TP_(), x), a_pure(mk_bool(true)));
  CHECK(aeq(assertion_simplify(c), a_pred(TP_(), x)));
}
