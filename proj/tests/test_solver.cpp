#include "doctest.h"
#include "slr/check.hpp"
#include "slr/model.hpp"
#include "slr/session.hpp"
#include "slr/simplify.hpp"
#include "slr/stdlib.hpp"
#include "slr/tpsolver.hpp"

using namespace slr;

namespace {
Registry& R() {
  static Registry reg = [] {
    Registry r = make_base_registry();
    stdlib_load(r, {/*oracle_check=*/false, /*derive=*/false});
    return r;
  }();
  return reg;
}

Pred TA() { return pred_atom("TA", int_sort()); }
Pred TB() { return pred_atom("TB", int_sort()); }

Term free_dom(const Sort& xs) {
  return mk_fvar("D0", set_sort(pair_sort(xs, any_sort())));
}

struct Run {
  TpSolution sol;
  DerivationNode node;
  std::vector<std::string> rules;
};

std::optional<Run> solve(const TpProblem& p, std::vector<Term> ctx = {}) {
  EvarStore ev;
  TpSolver s(R(), ev);
  s.prover.context = std::move(ctx);
  auto r = s.solve(p);
  if (!r) return std::nullopt;
  Run run{r->first, r->second, {}};
  derivation_rules(r->second, run.rules);
  return run;
}
}  // namespace

TEST_CASE("ID solves identical refinements") {
  auto r = solve({TpKind::BiTP, TA(), TA(), free_dom(int_sort())});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"ID"});
  CHECK(is_true(r->sol.theta));
  CHECK(r->sol.Z->kind == PredKind::Emp);
  CHECK(r->sol.R->kind == PredKind::Emp);
}

TEST_CASE("FB2 closes unrelated atoms with full demand and remainder") {
  auto r = solve({TpKind::BiTP, TA(), TB(), free_dom(int_sort())});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"FB2"});
  CHECK(pred_eq(r->sol.Z, TB()));
  CHECK(pred_eq(r->sol.R, TA()));
  // f swaps the pair
  Term probe = simplify(mk_app(r->sol.f, mk_pair(mk_int(1), mk_int(2))));
  CHECK(term_eq(probe, mk_pair(mk_int(2), mk_int(1))));
}

TEST_CASE("TP has no fallback") {
  EvarStore ev;
  TpSolver s(R(), ev);
  auto r = s.solve({TpKind::TP, TA(), TB(), mk_fvar("D", set_sort(int_sort()))});
  CHECK(!r.has_value());
}

TEST_CASE("prenormalization collapses nested permissions") {
  const Registry& reg = R();
  Pred src = mk_perm(reg, mk_rat(1, 2), mk_perm(reg, mk_rat(1, 3), TA()));
  Pred tgt = mk_perm(reg, mk_rat(1, 6), TA());
  auto r = solve({TpKind::BiTP, src, tgt, free_dom(int_sort())});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"ID"});
}

TEST_CASE("S1_E unwraps unit permission") {
  const Registry& reg = R();
  auto r = solve({TpKind::BiTP, mk_perm(reg, mk_rat(1, 1), TA()), TA(), free_dom(int_sort())});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"S1_E", "ID"});
}

TEST_CASE("permission split via SD_L demands the missing share") {
  const Registry& reg = R();
  // (1/2)+T to 1+T: the other half is the antiframe
  auto r = solve({TpKind::BiTP, mk_perm(reg, mk_rat(1, 2), TA()), mk_perm(reg, mk_rat(1, 1), TA()),
                  free_dom(int_sort())});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"SD_L", "ID"});
  CHECK(show_pred(r->sol.Z).find("perm[1/2]") != std::string::npos);
}

TEST_CASE("path concatenation via SA_R") {
  const Registry& reg = R();
  Pred nested = mk_field(reg, "a", mk_field(reg, "b", TA()));
  Pred flat = mk_path(reg, mk_list({mk_sym("a"), mk_sym("b")}, abstract_sort("key")), TA());
  auto r = solve({TpKind::BiTP, nested, flat, free_dom(int_sort())});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"SA_R", "ID"});
  auto r2 = solve({TpKind::BiTP, flat, nested, free_dom(int_sort())});
  REQUIRE(r2.has_value());
  CHECK(r2->rules == std::vector<std::string>{"SA_L", "ID"});
}

TEST_CASE("interval split shapes") {
  const Registry& reg = R();
  Pred iv = mk_intv(reg);
  auto slice = [&](long long i, long long j) {
    return mk_slice(reg, mk_ivl(mk_int(i), mk_int(j)), iv);
  };
  SUBCASE("SD_R splits a larger source") {
    auto r = solve({TpKind::BiTP, slice(0, 4), slice(0, 2), free_dom(list_sort(int_sort()))});
    REQUIRE(r.has_value());
    CHECK(r->rules == std::vector<std::string>{"SD_R", "ID"});
    CHECK(show_pred(r->sol.R).find("[2, 4)") != std::string::npos);
  }
  SUBCASE("SD_L demands the continuation") {
    auto r = solve({TpKind::BiTP, slice(0, 2), slice(0, 4), free_dom(list_sort(int_sort()))});
    REQUIRE(r.has_value());
    CHECK(r->rules == std::vector<std::string>{"SD_L", "ID"});
    CHECK(show_pred(r->sol.Z).find("[2, 4)") != std::string::npos);
  }
  SUBCASE("two-sided demand uses the noncommutative template") {
    // [1,3) inside a larger target: both flanks are demanded
    auto r = solve({TpKind::BiTP, slice(1, 3), slice(0, 4), free_dom(list_sort(int_sort()))});
    REQUIRE(r.has_value());
    CHECK(r->rules == std::vector<std::string>{"SD_OUT", "ID"});
    CHECK(show_pred(r->sol.Z).find("[0, 1)") != std::string::npos);
    CHECK(show_pred(r->sol.Z).find("[3, 4)") != std::string::npos);
  }
  SUBCASE("inner extraction leaves both flanks") {
    auto r = solve({TpKind::BiTP, slice(0, 4), slice(1, 3), free_dom(list_sort(int_sort()))});
    REQUIRE(r.has_value());
    CHECK(r->rules == std::vector<std::string>{"SD_IN", "ID"});
    CHECK(show_pred(r->sol.R).find("[0, 1)") != std::string::npos);
    CHECK(show_pred(r->sol.R).find("[3, 4)") != std::string::npos);
  }
  SUBCASE("shifted overlap uses the swap templates") {
    auto r = solve({TpKind::BiTP, slice(0, 3), slice(2, 5), free_dom(list_sort(int_sort()))});
    REQUIRE(r.has_value());
    CHECK(r->rules == std::vector<std::string>{"SD_WR", "ID"});
    auto r2 = solve({TpKind::BiTP, slice(2, 5), slice(0, 3), free_dom(list_sort(int_sort()))});
    REQUIRE(r2.has_value());
    CHECK(r2->rules == std::vector<std::string>{"SD_WL", "ID"});
  }
}

TEST_CASE("matrix partitioning golden: SD_R, SH, SD_R, ID") {
  const Registry& reg = R();
  Pred iv = mk_intv(reg);
  Term N = mk_fvar("N", int_sort());
  Term two_n = mk_mul(mk_int(2), N);
  Term i0 = mk_int(0);
  Pred src = mk_slice(reg, mk_ivl(i0, two_n), mk_slice(reg, mk_ivl(i0, two_n), iv));
  Pred tgt = mk_slice(reg, mk_ivl(i0, N), mk_slice(reg, mk_ivl(i0, N), iv));
  auto r = solve({TpKind::BiTP, src, tgt, free_dom(src->abst)},
                 {mk_le(mk_int(1), N)});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"SD_R", "SH", "SD_R", "ID"});
  CHECK(is_true(r->sol.theta));
  CHECK(r->sol.Z->kind == PredKind::Emp);
  // frame: Slice[N,2N)(Slice[0,2N) Z) ** Slice[0,N)(Slice[N,2N) Z)
  REQUIRE(r->sol.R->kind == PredKind::Star);
  Pred fr1 = r->sol.R->preds[0];
  Pred fr2 = r->sol.R->preds[1];
  CHECK(pred_eq(fr1, mk_slice(reg, mk_ivl(N, two_n), mk_slice(reg, mk_ivl(i0, two_n), iv))));
  CHECK(pred_eq(fr2, mk_slice(reg, mk_ivl(i0, N), mk_slice(reg, mk_ivl(N, two_n), iv))));
  // f simplifies to the unzip . map(cut_N) . pi1 inner form
  Term f = simplify(r->sol.f);
  std::string fs = show_term(f);
  CHECK(fs.find("unzip(map(") != std::string::npos);
  // structural check: some subterm unzip(map(cut, lslice(x, 0, N)))
  bool found = false;
  std::function<void(const Term&)> scan = [&](const Term& t) {
    if (t->kind == TermKind::Con && t->name == "unzip" && t->args[0]->kind == TermKind::Con &&
        t->args[0]->name == "map") {
      const Term& cut = t->args[0]->args[0];
      if (cut->kind == TermKind::Lam && cut->args[0]->kind == TermKind::TupleT) found = true;
    }
    for (auto& a : t->args) scan(a);
  };
  scan(f);
  CHECK(found);
}

TEST_CASE("matrix golden at a concrete size validates on the grid oracle") {
  const Registry& reg = R();
  Pred iv = mk_intv(reg);
  Pred src = mk_slice(reg, mk_ivl(mk_int(0), mk_int(2)), mk_slice(reg, mk_ivl(mk_int(0), mk_int(2)), iv));
  Pred tgt = mk_slice(reg, mk_ivl(mk_int(0), mk_int(1)), mk_slice(reg, mk_ivl(mk_int(0), mk_int(1)), iv));
  Term mat = mk_list({mk_list({mk_int(0), mk_int(1)}, int_sort()),
                      mk_list({mk_int(1), mk_int(0)}, int_sort())},
                     list_sort(int_sort()));
  Term dom = mk_setlit({mk_pair(mat, mk_unit())}, pair_sort(mat->sort, unit_sort()));
  auto r = solve({TpKind::BiTP, src, tgt, dom});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"SD_R", "SH", "SD_R", "ID"});
  FiniteModel g = make_grid_model(2, 1);
  TpProblem prob{TpKind::BiTP, src, tgt, dom};
  auto cex = check_tp_solution(g, reg, prob, r->sol);
  INFO((cex ? cex->detail + " at " + show_value(cex->world) : std::string("ok")));
  CHECK(!cex.has_value());
  // the typo'd frame shape (inner interval [0,1) on the first component) is
  // rejected by the oracle
  TpSolution wrong = r->sol;
  wrong.R = pred_star(
      mk_slice(reg, mk_ivl(mk_int(1), mk_int(2)), mk_slice(reg, mk_ivl(mk_int(0), mk_int(1)), iv)),
      r->sol.R->preds[1]);
  CHECK(check_tp_solution(g, reg, prob, wrong).has_value());
}

TEST_CASE("star elimination rules thread the deferred transformation") {
  const Registry& reg = R();
  // (TA ** TB) to TB: the first source defers to FB2, the second solves it
  Pred src = pred_star(TA(), TB());
  auto r = solve({TpKind::BiTP, src, TB(), free_dom(src->abst)});
  REQUIRE(r.has_value());
  CHECK(r->rules.front() == "TP*_L");
  // remainder contains TA
  CHECK(show_pred(r->sol.R).find("TA") != std::string::npos);
}

TEST_CASE("bigstar: disjoint split plus singleton extraction") {
  const Registry& reg = R();
  Term I = mk_setlit({mk_int(1), mk_int(2)}, int_sort());
  Term I1 = mk_setlit({mk_int(1)}, int_sort());
  Pred inner = mk_ref(reg, mk_list({key_int(mk_fvar("_i", int_sort()))}, abstract_sort("key")),
                      mk_intv(reg));
  Pred whole = mk_bigstar(reg, I, inner);
  Pred rest = mk_bigstar(reg, I1, inner);
  auto r = solve({TpKind::BiTP, whole, rest, free_dom(whole->abst)});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"SD_R", "ID"});
  CHECK(show_pred(r->sol.R).find("bigstar[{2}]") != std::string::npos);

  // singleton unwrap reaches the addressed reference
  Pred single = mk_bigstar(reg, mk_setlit({mk_int(2)}, int_sort()), inner);
  Pred ref2 = mk_ref(reg, mk_list({key_int(mk_int(2))}, abstract_sort("key")), mk_intv(reg));
  auto r2 = solve({TpKind::BiTP, single, ref2, free_dom(single->abst)});
  REQUIRE(r2.has_value());
  CHECK(r2->rules == std::vector<std::string>{"S1_E", "ID"});
}

TEST_CASE("slice to ref via the extended unit property") {
  const Registry& reg = R();
  Pred sl = mk_slice(reg, mk_ivl(mk_int(3), mk_int(4)), mk_intv(reg));
  Pred ref = mk_ref(reg, mk_list({key_int(mk_int(3))}, abstract_sort("key")), mk_intv(reg));
  auto r = solve({TpKind::BiTP, sl, ref, free_dom(sl->abst)});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"S1'_E", "ID"});
  auto r2 = solve({TpKind::BiTP, ref, sl, free_dom(ref->abst)});
  REQUIRE(r2.has_value());
  CHECK(r2->rules == std::vector<std::string>{"S1'_I", "ID"});
}

TEST_CASE("lseg concatenation and cut") {
  const Registry& reg = R();
  auto arrow = [](long long a, long long n, long long b) {
    return mk_con("arrow", {mk_int(a), mk_int(n), mk_int(b)}, scalar_sort("larrow"));
  };
  Pred iv = mk_intv(reg);
  SUBCASE("cat: shorter source demands the continuation") {
    auto r = solve({TpKind::BiTP, mk_lseg(reg, arrow(1, 1, 2), iv), mk_lseg(reg, arrow(1, 2, 0), iv),
                    free_dom(list_sort(int_sort()))});
    REQUIRE(r.has_value());
    CHECK(r->rules == std::vector<std::string>{"SD_L", "ID"});
    CHECK(show_pred(r->sol.Z).find("arrow(2, 1, 0)") != std::string::npos);
  }
  SUBCASE("cut: longer source leaves a segment from the cut point") {
    EvarStore ev;
    TpSolver s(R(), ev);
    Term mid = ev.fresh(int_sort());
    Pred tgt = reg.make_op("Lseg", {mk_con("arrow", {mk_int(1), mk_int(1), mid}, scalar_sort("larrow"))}, {iv});
    auto r = s.solve({TpKind::BiTP, mk_lseg(reg, arrow(1, 2, 0), iv), tgt,
                      mk_fvar("D0", set_sort(pair_sort(list_sort(int_sort()), any_sort())))});
    REQUIRE(r.has_value());
    std::vector<std::string> rules;
    derivation_rules(r->second, rules);
    CHECK(rules == std::vector<std::string>{"LsegCut", "ID"});
    CHECK(show_pred(r->first.R).find("Lseg") != std::string::npos);
  }
}

TEST_CASE("solver determinism and stable priority order") {
  const Registry& reg = R();
  Pred iv = mk_intv(reg);
  Pred src = mk_slice(reg, mk_ivl(mk_int(0), mk_int(4)), iv);
  Pred tgt = mk_slice(reg, mk_ivl(mk_int(0), mk_int(2)), iv);
  auto r1 = solve({TpKind::BiTP, src, tgt, free_dom(src->abst)});
  auto r2 = solve({TpKind::BiTP, src, tgt, free_dom(src->abst)});
  REQUIRE(r1.has_value());
  REQUIRE(r2.has_value());
  // structurally identical trees (binder display names are generated)
  std::function<bool(const DerivationNode&, const DerivationNode&)> same =
      [&](const DerivationNode& a, const DerivationNode& b) {
        if (a.rule != b.rule) return false;
        if (!pred_eq(a.problem.source, b.problem.source)) return false;
        if (!pred_eq(a.problem.target, b.problem.target)) return false;
        if (!term_eq(a.problem.domain, b.problem.domain)) return false;
        if (!term_eq(a.solution.theta, b.solution.theta)) return false;
        if (!term_eq(a.solution.f, b.solution.f)) return false;
        if (!pred_eq(a.solution.Z, b.solution.Z)) return false;
        if (!pred_eq(a.solution.R, b.solution.R)) return false;
        if (a.children.size() != b.children.size()) return false;
        for (size_t i = 0; i < a.children.size(); ++i)
          if (!same(a.children[i], b.children[i])) return false;
        return true;
      };
  CHECK(same(r1->node, r2->node));

  // re-loading the catalog leaves the instantiated band order unchanged
  std::vector<std::string> order1;
  for (auto& t : reg.instantiated) order1.push_back(t.name + "/" + t.op + "/" + t.detail);
  Registry reg2 = make_base_registry();
  stdlib_load(reg2, {false, false});
  stdlib_load(reg2, {false, false});
  std::vector<std::string> order2;
  for (auto& t : reg2.instantiated) order2.push_back(t.name + "/" + t.op + "/" + t.detail);
  CHECK(order1 == order2);
}

TEST_CASE("instantiated rule census for the slice operator") {
  int n = 0;
  for (auto& t : R().instantiated)
    if (t.op == "Slice") ++n;
  // S0 x2, TF, SH, SD x6, S1' x2
  CHECK(n == 12);
}

TEST_CASE("degenerate empty domain still solves") {
  const Registry& reg = R();
  Pred iv = mk_intv(reg);
  Sort ps = pair_sort(list_sort(int_sort()), any_sort());
  Term dom = mk_setlit({}, ps);
  auto r = solve({TpKind::BiTP, mk_slice(reg, mk_ivl(mk_int(0), mk_int(2)), iv),
                  mk_slice(reg, mk_ivl(mk_int(0), mk_int(2)), iv), dom});
  REQUIRE(r.has_value());
  CHECK(r->rules == std::vector<std::string>{"ID"});
}
