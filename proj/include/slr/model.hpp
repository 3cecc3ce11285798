#pragma once

#include <optional>

#include "slr/eval.hpp"

namespace slr {

// Finite partial commutative monoid with predicate interpretations: the
// soundness oracle's model. Worlds are Values; heap-like worlds are Sets of
// (path, (permission, value)) cells and compose by disjoint union with
// permission addition up to the cap. A table model (from dump/load or law
// tests) overrides the structural star.
struct FiniteModel : UniverseProvider {
  std::string name;
  Value unit;                  // empty heap
  std::vector<Value> carrier;  // includes unit
  Value perm_cap = v_rat(1, 1);
  std::vector<Value> perms = {v_rat(1, 2), v_rat(1, 1)};

  std::map<std::string, std::vector<std::pair<Value, Value>>> atom_interp;
  std::map<std::string, Sort> atom_sorts;  // abstraction sorts of interpreted atoms
  std::map<std::string, Value> term_env;

  // universe parameters
  std::vector<long long> ints = {0, 1, 2, 3};
  std::vector<std::string> syms = {"a", "b"};
  int max_list_len = 2;
  int max_set_card = 3;
  int fun_space_cap = 256;
  int universe_cap = 240;
  std::map<std::string, std::vector<Value>> abs_universes;  // named abstract sorts

  // explicit op table (optional); keys are carrier indices
  bool use_table = false;
  std::map<std::pair<int, int>, int> table;

  std::optional<Value> star(const Value& a, const Value& b) const;
  const std::vector<std::pair<Value, Value>>& splits(const Value& w) const;
  std::vector<Value> universe(const Sort& s) const override;
  int world_index(const Value& w) const;

  mutable std::map<Value, std::vector<std::pair<Value, Value>>, ValueLess> split_memo;
  // naive recomputation, used to cross-check the memoized path
  std::vector<std::pair<Value, Value>> splits_naive(const Value& w) const;
};

// structural star over path-map heaps (shared by models and the executable
// program semantics)
std::optional<Value> heap_star(const Value& a, const Value& b, const Value& cap);
Value heap_cell(const std::vector<Value>& path, const Value& perm, const Value& val);
Value heap_prefix(const Value& key, const Value& h);            // prepend key to every path
std::optional<Value> heap_strip(const Value& key, const Value& h);  // inverse of prefix
std::optional<Value> heap_scale(const Value& factor, const Value& h);

// built-in model family
FiniteModel make_heap_model(int ncells, int maxval, const std::string& name = "",
                            bool half_perms = true);
FiniteModel make_recmem_model();
FiniteModel make_listmem_model();
FiniteModel make_grid_model(int n, int maxval);  // n x n integer matrix heaps
const std::vector<FiniteModel>& builtin_models();        // compact set for registration checks
const std::vector<FiniteModel>& sweep_models();          // includes the 4-cell/value-3 heap

// PCM law validation by enumeration (associativity only on small carriers)
std::optional<std::string> validate_pcm(const FiniteModel& m);

// line-oriented dump/load for golden counterexamples
std::string model_dump(const FiniteModel& m);
FiniteModel model_load(const std::string& text);

std::string value_repr(const Value& v);              // parseable s-expression form
Value value_parse(const std::string& s);

}  // namespace slr
