#pragma once

#include "slr/registry.hpp"

namespace slr {

struct DeriveResult {
  bool ok = false;
  PropertyInstance instance;
  Term obligation;          // residual FOL obligation
  std::string error;        // set when !ok; "manual-proof-required" when out of S
  std::string trace;
};

// Functor composition: Functor(G1 o G2, m1 o m2, d1 >>= d2)
PropertyInstance compose_functors(const Registry& reg, const PropertyInstance& p1,
                                  const PropertyInstance& p2);

// Proves a property of a non-recursively defined operator by unfolding its
// definition once and running the entailment engine on the definitional
// entailment.
DeriveResult derive_nonrecursive(Registry& reg, const std::string& op, PropKind kind,
                                 const std::map<std::string, Term>& witnesses);

// Same pipeline with the element-transformation axiom TP(T,U,D') <- (D' <= D, f)
// prepended for the session.
DeriveResult derive_functor(Registry& reg, const std::string& op, const Term& mapper,
                            const Term& dom);

struct WfOrder {
  // set of strict predecessors of an abstraction (default: structural)
  Term pre;  // lambda: abst -> set<abst>
};

// Induction-based derivation for operators defined as x::T == f(x)::F(T)
// where the recursive occurrence sits under a functor spine. Sound but
// incomplete.
DeriveResult derive_recursive(Registry& reg, const std::string& op, PropKind kind,
                              const std::map<std::string, Term>& witnesses, const WfOrder& order);

}  // namespace slr
