#pragma once

#include "slr/model.hpp"
#include "slr/registry.hpp"

namespace slr {

// Forcing semantics: w |= phi over a finite model. Quantifiers range over the
// model's finite per-sort universes; the model carrier serves as the world
// universe. Adequate for refutation, an explicit under-approximation for
// unbounded domains.
struct ForceCtx {
  const FiniteModel& m;
  const Registry& reg;
  std::map<std::string, Value> fvars;  // starts from m.term_env
  std::map<int, Value> evars;
  int depth = 0;

  EvalEnv eenv() const;
  Value eval(const Term& t);  // throws EvalError on undefined
  bool force(const Value& w, const Assertion& a);
  bool force_pred(const Value& w, const Pred& p, const Value& x);
};

bool force(const FiniteModel& m, const Registry& reg, const Value& w, const Assertion& a,
           const std::map<std::string, Value>& extra_env = {});
bool valid(const FiniteModel& m, const Registry& reg, const Assertion& a,
           const std::map<std::string, Value>& extra_env = {});

struct ForceError : std::runtime_error {
  explicit ForceError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace slr
