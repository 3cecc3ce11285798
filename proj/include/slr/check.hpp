#pragma once

#include "slr/force.hpp"
#include "slr/rules.hpp"

namespace slr {

// Replays a claimed TP/bi-TP solution against a finite model; returns the
// first violating (domain element, world) as a counterexample. A theta that
// cannot be evaluated over the model's theory fragment makes the check
// inconclusive (reported via `unverifiable`), never a counterexample.
struct TpCheckOutcome {
  std::optional<Counterexample> cex;
  bool unverifiable = false;
  std::string reason;
};

TpCheckOutcome check_tp_solution_ex(const FiniteModel& m, const Registry& reg, const TpProblem& p,
                                    const TpSolution& s,
                                    const std::map<std::string, Value>& env = {});

std::optional<Counterexample> check_tp_solution(const FiniteModel& m, const Registry& reg,
                                                const TpProblem& p, const TpSolution& s,
                                                const std::map<std::string, Value>& env = {});

// Enumerates the definitional entailment of a property instance over the
// model: all interpreted atoms, scalars from the per-sort universes, and a
// bounded function space for TF.
std::optional<Counterexample> check_property(const FiniteModel& m, const Registry& reg,
                                             const PropertyInstance& inst);

enum class ThetaVerdict { True, False, Unknown };

// finite-universe evaluation of a proof obligation; unbound evars are read
// existentially over small universes
ThetaVerdict eval_theta(const FiniteModel& m, const Registry& reg, const Term& theta,
                        const std::map<std::string, Value>& env = {});

}  // namespace slr
