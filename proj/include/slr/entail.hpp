#pragma once

#include "slr/tpsolver.hpp"

namespace slr {

struct BiEpSolution {
  Term theta;
  Assertion Z;  // antiframe, in S
  Assertion R;  // frame, in S
};

struct EntailEvent {
  std::string rule;    // Fig. 5/6/7 label or TP-tree root label
  std::string detail;
  int depth = 0;
};

struct EntailResult {
  bool ok = false;
  Term theta;  // final obligation: residual theta /\ goal-evar bindings, closed
               // over the fixed variables it mentions
  std::vector<EntailEvent> events;
  std::vector<DerivationNode> tp_trees;            // bi-TP derivations in order
  std::vector<std::pair<std::string, Term>> goal_bindings;
  std::string blocking;  // first unsolved subgoal on failure
  int rule_apps = 0;
  int connectives = 0;

  std::vector<std::string> tp_root_labels() const;
};

// One entailment session: owns the evar store, the pure context and the
// TP-solver. Sessions are single-threaded; distinct sessions are independent.
class EntailSession {
 public:
  explicit EntailSession(const Registry& r) : reg(r), tps(r, evars) {}

  const Registry& reg;
  EvarStore evars;
  TpSolver tps;
  std::vector<Term> pure_context;

  // reduces an S |- G entailment to bi-EPs and bi-TPs; returns the proof
  // obligation when every spawned subproblem is solved
  EntailResult prove_entailment(const Assertion& hyp, const Assertion& goal);

  std::optional<BiEpSolution> solve_biep(const Assertion& h, const Assertion& g,
                                         EntailResult& out, int depth);
  std::optional<Term> solve_from_emp(const Assertion& a, EntailResult& out, int depth);
  std::optional<Term> solve_to_emp(const Assertion& a, EntailResult& out, int depth);

  enum class Policy { Unified, Deferred };
  // one-sided-evar unification on a simplified side condition; returns the
  // residual formula (true when unified)
  Policy evar_policy(const Term& cond, Term& residual);

 private:
  std::optional<Term> goal(const Assertion& h, const Assertion& g, EntailResult& out, int depth);
  Assertion skolemize(const Assertion& h, EntailResult& out, std::vector<std::pair<std::string, Sort>>& fixed);
  std::vector<std::pair<std::string, Sort>> fixed_vars_;
  int fresh_ctr_ = 0;
};

}  // namespace slr
