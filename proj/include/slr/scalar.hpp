#pragma once

#include <functional>
#include <map>
#include <optional>

#include "slr/prover.hpp"
#include "slr/value.hpp"

namespace slr {

// equation shapes the distributivity/associativity templates need solved
enum class AddShape { Right, Left, TwoSided, Inner, SwapL, SwapR };
// Right:    n + d = m            Left:  n = m + d
// TwoSided: d2 + n + d = m       Inner: n = d + m + d2
// SwapL:    a = g + c  /\  b = d + g
// SwapR:    a = c + g  /\  b = g + d
enum class MulShape { Right, Left };  // n * d = m   |   n = m * d

struct AddSolution {
  std::map<std::string, Term> w;  // keys: "delta", "delta2", "gamma", "c", "d"
};

// Ring-like partial scalar algebra with closed-form witness solvers. The
// solvers prove their own applicability side conditions through the provided
// SideProver (pure context + linear arithmetic, budgeted).
struct ScalarAlgebra {
  std::string name;
  Sort sort;
  bool has_add = false;
  bool has_mul = false;
  bool add_commutative = false;
  bool add_cancellative = false;
  bool both_sa_sd = false;  // triggers mandatory prenormalization

  std::function<std::optional<AddSolution>(const Term& n, const Term& m, AddShape,
                                           const SideProver&)>
      solve_add;
  std::function<std::optional<Term>(const Term& n, const Term& m, MulShape, const SideProver&)>
      solve_mul;
  std::function<bool(const Term&, const SideProver&)> is_zero;
  std::function<bool(const Term&, const SideProver&)> is_identity;
  // identity element suitable for wrapping a bare predicate against scalar m
  std::function<std::optional<Term>(const Term& m, const SideProver&)> pick_identity;

  // literal operations used by models and randomized tests
  std::function<std::optional<Value>(const Value&, const Value&)> vadd;
  std::function<std::optional<Value>(const Value&, const Value&)> vmul;
  std::function<bool(const Value&)> v_is_zero;
  std::function<bool(const Value&)> v_is_identity;

  Term mul_term(const Term& a, const Term& b) const;  // symbolic product (SA rules)
  Term add_term(const Term& a, const Term& b) const;  // symbolic sum
};

// built-in algebras: "interval", "nnrat", "path", "finset", "larrow"
const ScalarAlgebra& builtin_algebra(const std::string& name);
const std::vector<std::string>& builtin_algebra_names();

}  // namespace slr
