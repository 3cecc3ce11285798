#pragma once

#include <memory>
#include <string>
#include <vector>

namespace slr {

// Many-sorted term language. Sorts are immutable shared trees; equality is
// structural, abstract sorts compare by name.
enum class SortKind {
  Bool,
  Int,
  Rat,
  Unit,
  Tuple,
  List,
  Set,
  Fun,
  Sum,
  Scalar,   // scalar of a named algebra (intervals, paths, ...)
  Abstract  // named opaque sort (world sorts, element sorts for tests)
};

class SortNode;
using Sort = std::shared_ptr<const SortNode>;

class SortNode {
public:
  SortKind kind;
  std::vector<Sort> args;  // Tuple: components; List/Set: element; Fun: dom,cod; Sum: lhs,rhs
  std::string name;        // Scalar: algebra name; Abstract: sort name

  SortNode(SortKind k, std::vector<Sort> a, std::string n)
      : kind(k), args(std::move(a)), name(std::move(n)) {}
};

Sort bool_sort();
Sort int_sort();
Sort rat_sort();
Sort unit_sort();
Sort tuple_sort(std::vector<Sort> comps);
Sort pair_sort(const Sort& a, const Sort& b);
Sort list_sort(const Sort& elem);
Sort set_sort(const Sort& elem);
Sort fun_sort(const Sort& dom, const Sort& cod);
Sort sum_sort(const Sort& l, const Sort& r);
Sort scalar_sort(const std::string& algebra);
Sort abstract_sort(const std::string& name);

// wildcard used for solver-internal holes whose sort is not yet known;
// compares equal to anything in sort checks
Sort any_sort();
bool is_any(const Sort& s);

bool sort_eq(const Sort& a, const Sort& b);
std::string show_sort(const Sort& s);

// deterministic total order (used for canonical printing and containers)
int sort_cmp(const Sort& a, const Sort& b);

}  // namespace slr
