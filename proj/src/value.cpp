#include "slr/value.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace slr {

Value v_unit() { return Value{}; }

Value v_bool(bool b) {
  Value v;
  v.k = VKind::Bool;
  v.b = b;
  return v;
}

Value v_int(long long i) {
  Value v;
  v.k = VKind::Int;
  v.i = i;
  return v;
}

Value v_rat(long long num, long long den) {
  if (den == 0) throw std::runtime_error("rational with zero denominator");
  if (den < 0) { num = -num; den = -den; }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) { num /= g; den /= g; }
  Value v;
  v.k = VKind::Rat;
  v.num = num;
  v.den = den;
  return v;
}

Value v_sym(const std::string& s) {
  Value v;
  v.k = VKind::Sym;
  v.sym = s;
  return v;
}

Value v_tuple(std::vector<Value> elems) {
  Value v;
  v.k = VKind::Tuple;
  v.elems = std::move(elems);
  return v;
}

Value v_pair(const Value& a, const Value& b) { return v_tuple({a, b}); }

Value v_list(std::vector<Value> elems) {
  Value v;
  v.k = VKind::List;
  v.elems = std::move(elems);
  return v;
}

Value v_set(std::vector<Value> elems) {
  std::sort(elems.begin(), elems.end(), ValueLess{});
  elems.erase(std::unique(elems.begin(), elems.end(),
                          [](const Value& a, const Value& b) { return value_eq(a, b); }),
              elems.end());
  Value v;
  v.k = VKind::Set;
  v.elems = std::move(elems);
  return v;
}

Value v_fun(std::vector<std::pair<Value, Value>> graph) {
  Value v;
  v.k = VKind::Fun;
  v.graph = std::make_shared<FunGraph>(FunGraph{std::move(graph)});
  return v;
}

Value v_inj1(const Value& v) { return v_pair(v_sym("inj1"), v); }
Value v_inj2(const Value& v) { return v_pair(v_sym("inj2"), v); }

int value_cmp(const Value& a, const Value& b) {
  if (a.k != b.k) return a.k < b.k ? -1 : 1;
  switch (a.k) {
    case VKind::Unit: return 0;
    case VKind::Bool: return a.b == b.b ? 0 : (a.b < b.b ? -1 : 1);
    case VKind::Int: return a.i == b.i ? 0 : (a.i < b.i ? -1 : 1);
    case VKind::Rat: {
      long long l = a.num * b.den, r = b.num * a.den;
      return l == r ? 0 : (l < r ? -1 : 1);
    }
    case VKind::Sym: {
      int c = a.sym.compare(b.sym);
      return c == 0 ? 0 : (c < 0 ? -1 : 1);
    }
    case VKind::Tuple:
    case VKind::List:
    case VKind::Set: {
      if (a.elems.size() != b.elems.size()) return a.elems.size() < b.elems.size() ? -1 : 1;
      for (size_t i = 0; i < a.elems.size(); ++i)
        if (int c = value_cmp(a.elems[i], b.elems[i])) return c;
      return 0;
    }
    case VKind::Fun: {
      if (a.graph.get() == b.graph.get()) return 0;
      const auto& x = a.graph->entries;
      const auto& y = b.graph->entries;
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      for (size_t i = 0; i < x.size(); ++i) {
        if (int c = value_cmp(x[i].first, y[i].first)) return c;
        if (int c = value_cmp(x[i].second, y[i].second)) return c;
      }
      return 0;
    }
    case VKind::Closure:
      // identity only; closures never live inside sets the oracle builds
      return a.clo.get() == b.clo.get() ? 0 : (a.clo.get() < b.clo.get() ? -1 : 1);
  }
  return 0;
}

bool value_eq(const Value& a, const Value& b) { return value_cmp(a, b) == 0; }

std::string show_value(const Value& v) {
  std::ostringstream os;
  switch (v.k) {
    case VKind::Unit: os << "()"; break;
    case VKind::Bool: os << (v.b ? "true" : "false"); break;
    case VKind::Int: os << v.i; break;
    case VKind::Rat:
      os << v.num;
      if (v.den != 1) os << "/" << v.den;
      break;
    case VKind::Sym: os << "'" << v.sym; break;
    case VKind::Tuple:
    case VKind::List:
    case VKind::Set: {
      const char* open = v.k == VKind::Tuple ? "(" : v.k == VKind::List ? "[" : "{";
      const char* close = v.k == VKind::Tuple ? ")" : v.k == VKind::List ? "]" : "}";
      os << open;
      for (size_t i = 0; i < v.elems.size(); ++i) {
        if (i) os << ", ";
        os << show_value(v.elems[i]);
      }
      os << close;
      break;
    }
    case VKind::Fun: {
      os << "<fun";
      for (auto& [x, y] : v.graph->entries)
        os << " " << show_value(x) << "->" << show_value(y);
      os << ">";
      break;
    }
    case VKind::Closure: os << "<closure>"; break;
  }
  return os.str();
}

Term value_term(const Value& v, const Sort& s) {
  switch (v.k) {
    case VKind::Unit: return mk_unit();
    case VKind::Bool: return mk_bool(v.b);
    case VKind::Int:
      if (s->kind == SortKind::Rat) return mk_rat(v.i, 1);
      if (s->kind == SortKind::Abstract && s->name == "key")
        return mk_con("ik", {mk_int(v.i)}, s);
      return mk_int(v.i);
    case VKind::Rat: return mk_rat(v.num, v.den);
    case VKind::Sym: return mk_sym(v.sym);
    case VKind::Tuple: {
      // sum values are tagged tuples
      if (s->kind == SortKind::Sum && v.elems.size() == 2 && v.elems[0].k == VKind::Sym) {
        if (v.elems[0].sym == "inj1") return mk_inj1(value_term(v.elems[1], s->args[0]), s);
        if (v.elems[0].sym == "inj2") return mk_inj2(value_term(v.elems[1], s->args[1]), s);
      }
      if (s->kind == SortKind::Scalar && s->name == "interval" && v.elems.size() == 2)
        return mk_ivl(value_term(v.elems[0], int_sort()), value_term(v.elems[1], int_sort()));
      if (s->kind == SortKind::Scalar && s->name == "larrow" && v.elems.size() == 3)
        return mk_con("arrow",
                      {value_term(v.elems[0], int_sort()), value_term(v.elems[1], int_sort()),
                       value_term(v.elems[2], int_sort())},
                      s);
      std::vector<Term> ts;
      for (size_t i = 0; i < v.elems.size(); ++i) {
        Sort cs = (s->kind == SortKind::Tuple && i < s->args.size()) ? s->args[i] : any_sort();
        ts.push_back(value_term(v.elems[i], cs));
      }
      return mk_tuple(std::move(ts));
    }
    case VKind::List: {
      Sort es = s->kind == SortKind::List ? s->args[0] : any_sort();
      std::vector<Term> ts;
      for (auto& e : v.elems) ts.push_back(value_term(e, es));
      return mk_list(std::move(ts), es);
    }
    case VKind::Set: {
      Sort es = s->kind == SortKind::Set ? s->args[0] : any_sort();
      std::vector<Term> ts;
      for (auto& e : v.elems) ts.push_back(value_term(e, es));
      return mk_setlit(std::move(ts), es);
    }
    default:
      throw std::runtime_error("value_term: function values have no literal form");
  }
}

Value rat_add(const Value& a, const Value& b) {
  auto n = [](const Value& v) { return v.k == VKind::Int ? v.i : v.num; };
  auto d = [](const Value& v) { return v.k == VKind::Int ? 1LL : v.den; };
  return v_rat(n(a) * d(b) + n(b) * d(a), d(a) * d(b));
}

Value rat_mul(const Value& a, const Value& b) {
  auto n = [](const Value& v) { return v.k == VKind::Int ? v.i : v.num; };
  auto d = [](const Value& v) { return v.k == VKind::Int ? 1LL : v.den; };
  return v_rat(n(a) * n(b), d(a) * d(b));
}

bool rat_le(const Value& a, const Value& b) {
  auto n = [](const Value& v) { return v.k == VKind::Int ? v.i : v.num; };
  auto d = [](const Value& v) { return v.k == VKind::Int ? 1LL : v.den; };
  return n(a) * d(b) <= n(b) * d(a);
}

}  // namespace slr
