#include "slr/sort.hpp"

#include <sstream>

namespace slr {

namespace {
Sort mk(SortKind k, std::vector<Sort> args = {}, std::string name = {}) {
  return std::make_shared<SortNode>(k, std::move(args), std::move(name));
}
}  // namespace

Sort bool_sort() { static Sort s = mk(SortKind::Bool); return s; }
Sort int_sort() { static Sort s = mk(SortKind::Int); return s; }
Sort rat_sort() { static Sort s = mk(SortKind::Rat); return s; }
Sort unit_sort() { static Sort s = mk(SortKind::Unit); return s; }

Sort tuple_sort(std::vector<Sort> comps) { return mk(SortKind::Tuple, std::move(comps)); }
Sort pair_sort(const Sort& a, const Sort& b) { return tuple_sort({a, b}); }
Sort list_sort(const Sort& elem) { return mk(SortKind::List, {elem}); }
Sort set_sort(const Sort& elem) { return mk(SortKind::Set, {elem}); }
Sort fun_sort(const Sort& dom, const Sort& cod) { return mk(SortKind::Fun, {dom, cod}); }
Sort sum_sort(const Sort& l, const Sort& r) { return mk(SortKind::Sum, {l, r}); }
Sort scalar_sort(const std::string& algebra) { return mk(SortKind::Scalar, {}, algebra); }
Sort abstract_sort(const std::string& name) { return mk(SortKind::Abstract, {}, name); }

Sort any_sort() { static Sort s = mk(SortKind::Abstract, {}, "_any"); return s; }
bool is_any(const Sort& s) { return s->kind == SortKind::Abstract && s->name == "_any"; }

bool sort_eq(const Sort& a, const Sort& b) {
  if (a.get() == b.get()) return true;
  if (is_any(a) || is_any(b)) return true;
  if (a->kind != b->kind) return false;
  if (a->name != b->name) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!sort_eq(a->args[i], b->args[i])) return false;
  return true;
}

int sort_cmp(const Sort& a, const Sort& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (int c = sort_cmp(a->args[i], b->args[i])) return c;
  return 0;
}

std::string show_sort(const Sort& s) {
  std::ostringstream os;
  switch (s->kind) {
    case SortKind::Bool: os << "bool"; break;
    case SortKind::Int: os << "int"; break;
    case SortKind::Rat: os << "rat"; break;
    case SortKind::Unit: os << "unit"; break;
    case SortKind::Tuple: {
      os << "(";
      for (size_t i = 0; i < s->args.size(); ++i) {
        if (i) os << ", ";
        os << show_sort(s->args[i]);
      }
      os << ")";
      break;
    }
    case SortKind::List: os << "list<" << show_sort(s->args[0]) << ">"; break;
    case SortKind::Set: os << "set<" << show_sort(s->args[0]) << ">"; break;
    case SortKind::Fun:
      os << "(" << show_sort(s->args[0]) << " -> " << show_sort(s->args[1]) << ")";
      break;
    case SortKind::Sum:
      os << "(" << show_sort(s->args[0]) << " + " << show_sort(s->args[1]) << ")";
      break;
    case SortKind::Scalar: os << "scalar:" << s->name; break;
    case SortKind::Abstract: os << s->name; break;
  }
  return os.str();
}

}  // namespace slr
