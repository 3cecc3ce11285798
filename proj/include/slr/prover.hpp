#pragma once

#include <chrono>
#include <vector>

#include "slr/term.hpp"

namespace slr {

// Budgeted prover for rule side conditions: simplification, pure-context
// lookup, and Fourier-Motzkin elimination over the linear fragment. prove()
// returning false means "not proved within budget", never "disproved".
class SideProver {
public:
  std::vector<Term> context;
  int budget_ms = 10;

  bool prove(const Term& goal) const;
  bool prove_eq(const Term& a, const Term& b) const;
  bool prove_ne(const Term& a, const Term& b) const;

private:
  bool prove_in(const Term& goal, std::chrono::steady_clock::time_point deadline) const;
  bool linear_entails(const Term& goal, std::chrono::steady_clock::time_point deadline) const;
};

}  // namespace slr
