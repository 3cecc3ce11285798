#pragma once

#include <optional>
#include <stdexcept>

#include "slr/value.hpp"

namespace slr {

// Supplies the finite per-sort domains that quantifiers range over.
struct UniverseProvider {
  virtual ~UniverseProvider() = default;
  virtual std::vector<Value> universe(const Sort& s) const = 0;
};

// Thrown when a term cannot be evaluated at all (unbound variable, unknown
// symbol, fuel exhaustion, quantifier without a universe). Distinct from a
// *defined* undefined result (nullopt), which models partial operations.
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& m) : std::runtime_error(m) {}
};

struct EvalEnv {
  const UniverseProvider* universes = nullptr;
  const std::map<std::string, Value>* fvars = nullptr;
  const std::map<int, Value>* evars = nullptr;
};

std::optional<Value> eval_term(const Term& t, const EvalEnv& env);

// evaluates a bool term; nullopt-as-undefined is an EvalError here
bool eval_bool(const Term& t, const EvalEnv& env);

// applies a Closure/Fun/Lam value
std::optional<Value> apply_value(const Value& f, const Value& arg, const EvalEnv& env);

// closure over a closed lambda term
Value closure_of(const Term& lam);

}  // namespace slr
