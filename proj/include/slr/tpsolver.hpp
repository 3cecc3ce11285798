#pragma once

#include "slr/registry.hpp"
#include "slr/session.hpp"

namespace slr {

// Routine-1 backward solver: deterministic, prioritized, no backtracking
// among rules. The first rule whose pattern and side conditions match is
// committed; only FB1 falls through to FB2 on child failure.
class TpSolver {
 public:
  const Registry& reg;
  EvarStore& evars;
  SideProver prover;
  std::vector<TpRule> session_rules;  // Routine-4 prepended axioms
  int step_budget = 200000;
  int steps = 0;
  int rule_apps = 0;
  bool budget_hit = false;

  TpSolver(const Registry& r, EvarStore& e) : reg(r), evars(e) {}

  std::optional<std::pair<TpSolution, DerivationNode>> solve(const TpProblem& p);

  Pred prenormalize(const Pred& p) const;
  TpSolution normalize_solution(const TpProblem& p, TpSolution s) const;

  // one-sided-evar unification; falls back to provable equality
  bool unify_terms(const Term& a, const Term& b);
  bool unify_preds(const Pred& a, const Pred& b);
};

// helper for building lambda terms without hand-counting de Bruijn indices
Term klam(const Sort& s, const std::function<Term(const Term&)>& body);
Term klam2(const Sort& a, const Sort& b, const std::function<Term(const Term&, const Term&)>& body);

}  // namespace slr
