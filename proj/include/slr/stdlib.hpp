#pragma once

#include "slr/registry.hpp"

namespace slr {

struct StdlibOptions {
  bool oracle_check = false;  // run check_property on every registration
  bool derive = true;         // run the derivation routines for List/Cell/Array
  bool perm_relaxed = false;  // permissions may locally exceed 1
};

// registry preloaded with the core ad-hoc rules and fallbacks, but no catalog
Registry make_base_registry();

// loads the built-in predicate catalog and its algebraic properties in
// canonical order; idempotent; throws on any failed oracle check
void stdlib_load(Registry& reg, const StdlibOptions& opts = {});

// sort shorthands used across the catalog
Sort world_sort();
Sort val_sort();
Sort key_sort();
Sort path_sorts();  // list<key>

// catalog constructors
Pred mk_ref(const Registry& reg, const Term& addr, const Pred& t);
Pred mk_path(const Registry& reg, const Term& path, const Pred& t);
Pred mk_field(const Registry& reg, const std::string& field, const Pred& t);
Pred mk_slice(const Registry& reg, const Term& ivl, const Pred& t);
Pred mk_perm(const Registry& reg, const Term& q, const Pred& t);
Pred mk_val(const Registry& reg, const Term& v, const Pred& t);
Pred mk_bigstar(const Registry& reg, const Term& idxset, const Pred& t);
Pred mk_list_pred(const Registry& reg, const Pred& t);
Pred mk_lseg(const Registry& reg, const Term& arrow, const Pred& t);
Pred mk_intv(const Registry& reg);

Term addr_of(std::initializer_list<Term> keys);
Term key_int(const Term& i);
Term key_field(const std::string& name);

// per-predicate report for --list-predicates
struct CatalogRow {
  std::string name;
  std::string abst;
  std::vector<std::string> properties;
  int rules = 0;
};
std::vector<CatalogRow> catalog_report(const Registry& reg);

}  // namespace slr
