#pragma once

#include "slr/term.hpp"

namespace slr {

// Denotation-preserving normalization: beta/let reduction, tuple projection,
// literal folding, map/zip fusion, set algebra, linear arithmetic canonical
// forms. Idempotent. Partial applications and symbolic residue are left
// intact.
Term simplify(const Term& t);

bool is_true(const Term& t);
bool is_false(const Term& t);

// conjunction that folds units eagerly
Term and_simp(const Term& a, const Term& b);

// builds f(x) where f may be a lambda; beta-reduces on the spot
Term apply_simp(const Term& f, const Term& x);

}  // namespace slr
