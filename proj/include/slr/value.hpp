#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "slr/term.hpp"

namespace slr {

// Runtime values for the executable semantics. Worlds of finite models are
// Values too (heaps are Sets of (path, (perm, value)) tuples).
enum class VKind { Unit, Bool, Int, Rat, Sym, Tuple, List, Set, Fun, Closure };

struct Value;
struct FunGraph;
struct ClosureData;

struct Value {
  VKind k = VKind::Unit;
  bool b = false;
  long long i = 0;
  long long num = 0, den = 1;
  std::string sym;
  std::vector<Value> elems;  // Tuple / List / Set(canonically sorted+deduped)
  std::shared_ptr<const FunGraph> graph;
  std::shared_ptr<const ClosureData> clo;
};

struct FunGraph {
  std::vector<std::pair<Value, Value>> entries;
};

struct ClosureData {
  std::vector<Value> env;  // de Bruijn stack snapshot
  Term lam;
};

Value v_unit();
Value v_bool(bool b);
Value v_int(long long i);
Value v_rat(long long num, long long den);
Value v_sym(const std::string& s);
Value v_tuple(std::vector<Value> elems);
Value v_pair(const Value& a, const Value& b);
Value v_list(std::vector<Value> elems);
Value v_set(std::vector<Value> elems);  // canonicalizes
Value v_fun(std::vector<std::pair<Value, Value>> graph);
Value v_inj1(const Value& v);
Value v_inj2(const Value& v);

int value_cmp(const Value& a, const Value& b);
bool value_eq(const Value& a, const Value& b);
struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return value_cmp(a, b) < 0; }
};

std::string show_value(const Value& v);

// literal term for a (first-order) value; throws on Fun/Closure
Term value_term(const Value& v, const Sort& s);

// rational helpers for permissions
Value rat_add(const Value& a, const Value& b);
Value rat_mul(const Value& a, const Value& b);
bool rat_le(const Value& a, const Value& b);

}  // namespace slr
