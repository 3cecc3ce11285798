#include "slr/simplify.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <optional>

namespace slr {

namespace {

struct Rational {
  long long num = 0, den = 1;
  static Rational of(long long n, long long d = 1) {
    Rational r{n, d};
    r.norm();
    return r;
  }
  void norm() {
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }
  Rational operator+(const Rational& o) const { return of(num * o.den + o.num * den, den * o.den); }
  Rational operator-(const Rational& o) const { return of(num * o.den - o.num * den, den * o.den); }
  Rational operator*(const Rational& o) const { return of(num * o.num, den * o.den); }
  bool zero() const { return num == 0; }
  bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

// linear form: constant + sum of coeff * monomial (monomial = sorted factor list)
using Mono = std::vector<Term>;

struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i)
      if (int c = term_cmp(a[i], b[i])) return c < 0;
    return false;
  }
};

struct LinForm {
  Rational c;
  std::map<Mono, Rational, MonoLess> ms;
  bool ok = true;  // false: blew the size budget, caller keeps original term

  void add_mono(Mono m, Rational r) {
    std::sort(m.begin(), m.end(), TermLess{});
    auto it = ms.find(m);
    if (it == ms.end()) {
      if (!r.zero()) ms.emplace(std::move(m), r);
    } else {
      it->second = it->second + r;
      if (it->second.zero()) ms.erase(it);
    }
  }
};

Term fresh_lam(const Sort& s, const std::function<Term(const Term&)>& body) {
  static std::atomic<long> ctr{0};
  std::string n = "$s" + std::to_string(ctr++);
  return lam_of(n, s, body(mk_fvar(n, s)));
}

bool is_arith_con(const Term& t) {
  return t->kind == TermKind::Con && (t->name == "add" || t->name == "sub" || t->name == "mul");
}

bool is_num_sort(const Sort& s) { return s->kind == SortKind::Int || s->kind == SortKind::Rat; }

LinForm lin_of(const Term& t);

LinForm lin_mul(const LinForm& a, const LinForm& b) {
  LinForm r;
  if (!a.ok || !b.ok) { r.ok = false; return r; }
  r.c = a.c * b.c;
  for (auto& [m, cm] : b.ms) r.add_mono(m, a.c * cm);
  for (auto& [m, cm] : a.ms) r.add_mono(m, b.c * cm);
  for (auto& [m1, c1] : a.ms)
    for (auto& [m2, c2] : b.ms) {
      Mono m = m1;
      m.insert(m.end(), m2.begin(), m2.end());
      r.add_mono(std::move(m), c1 * c2);
      if (r.ms.size() > 64) { r.ok = false; return r; }
    }
  return r;
}

LinForm lin_of(const Term& t) {
  LinForm r;
  if (t->kind == TermKind::LitInt) { r.c = Rational::of(t->ival); return r; }
  if (t->kind == TermKind::LitRat) { r.c = Rational{t->num, t->den}; return r; }
  if (is_arith_con(t)) {
    LinForm a = lin_of(t->args[0]), b = lin_of(t->args[1]);
    if (!a.ok || !b.ok) { r.ok = false; return r; }
    if (t->name == "mul") return lin_mul(a, b);
    r = a;
    for (auto& [m, cm] : b.ms) r.add_mono(m, t->name == "add" ? cm : Rational::of(0) - cm);
    r.c = t->name == "add" ? r.c + b.c : r.c - b.c;
    return r;
  }
  r.add_mono({t}, Rational::of(1));
  return r;
}

Term lin_rebuild(const LinForm& f, const Sort& s) {
  auto lit = [&](const Rational& r) -> Term {
    if (s->kind == SortKind::Int) return mk_int(r.num / (r.den == 0 ? 1 : r.den));
    return mk_rat(r.num, r.den);
  };
  std::optional<Term> acc;
  auto push = [&](Term t, bool neg) {
    if (!acc) {
      acc = neg ? mk_sub(lit(Rational::of(0)), t) : t;
      if (neg && s->kind == SortKind::Int) acc = mk_sub(mk_int(0), t);
    } else {
      acc = neg ? mk_sub(*acc, t) : mk_add(*acc, t);
    }
  };
  for (auto& [m, cm] : f.ms) {
    Term prod = m[0];
    for (size_t i = 1; i < m.size(); ++i) prod = mk_mul(prod, m[i]);
    Rational c = cm;
    bool neg = c < Rational::of(0);
    if (neg) c = Rational::of(0) - c;
    if (!(c == Rational::of(1))) prod = mk_mul(lit(c), prod);
    push(prod, neg);
  }
  if (!f.c.zero() || !acc) {
    Rational c = f.c;
    bool neg = c < Rational::of(0);
    if (neg && acc) {
      push(lit(Rational::of(0) - c), true);
    } else if (acc) {
      push(lit(c), false);
    } else {
      acc = lit(c);
    }
  }
  return *acc;
}

// integer coefficients only when sort is int (division never introduced here)
Term lin_normalize(const Term& t) {
  if (!is_num_sort(t->sort)) return t;
  LinForm f = lin_of(t);
  if (!f.ok) return t;
  if (t->sort->kind == SortKind::Int) {
    if (f.c.den != 1) return t;
    for (auto& [m, cm] : f.ms)
      if (cm.den != 1) return t;
  }
  Term r = lin_rebuild(f, t->sort);
  return r;
}

std::optional<Rational> lin_const(const Term& t) {
  if (!is_num_sort(t->sort)) return std::nullopt;
  LinForm f = lin_of(t);
  if (!f.ok || !f.ms.empty()) return std::nullopt;
  return f.c;
}

bool literal_value(const Term& t);  // fully-literal term (foldable comparisons)

bool literal_value(const Term& t) {
  switch (t->kind) {
    case TermKind::LitBool:
    case TermKind::LitInt:
    case TermKind::LitRat:
    case TermKind::LitUnit:
    case TermKind::LitSym:
      return true;
    case TermKind::TupleT:
    case TermKind::ListLit:
    case TermKind::SetLit: {
      for (auto& a : t->args)
        if (!literal_value(a)) return false;
      return true;
    }
    case TermKind::Con:
      if (t->name == "inj1" || t->name == "inj2" || t->name == "ivl" || t->name == "arrow" ||
          t->name == "ik") {
        for (auto& a : t->args)
          if (!literal_value(a)) return false;
        return true;
      }
      return false;
    default:
      return false;
  }
}

const std::set<std::string>& partial_builtins() {
  static std::set<std::string> s = {"undef", "idx", "the_elem", "mapget", "sadd", "smul"};
  return s;
}

// conservatively "evaluates to a defined value for any environment"
bool definitely_defined(const Term& t) {
  switch (t->kind) {
    case TermKind::BVar:
    case TermKind::FVar:
    case TermKind::Evar:
    case TermKind::LitBool:
    case TermKind::LitInt:
    case TermKind::LitRat:
    case TermKind::LitUnit:
    case TermKind::LitSym:
    case TermKind::Lam:
      return true;
    case TermKind::App:
      return false;  // unknown function
    case TermKind::Con: {
      if (partial_builtins().count(t->name)) return false;
      if (t->name == "forall" || t->name == "exists") return false;  // may need models
      for (auto& a : t->args)
        if (!definitely_defined(a)) return false;
      return true;
    }
    default:
      for (auto& a : t->args)
        if (!definitely_defined(a)) return false;
      return true;
  }
}

bool uses_bvar(const Term& t, int depth) {
  if (t->kind == TermKind::BVar) return t->idx == depth;
  for (size_t i = 0; i < t->args.size(); ++i) {
    int d = depth;
    if (t->kind == TermKind::Lam) d = depth + 1;
    if (t->kind == TermKind::Let && i == 1) d = depth + 1;
    if (uses_bvar(t->args[i], d)) return true;
  }
  return false;
}

Term shift_down(const Term& t, int depth) {
  if (t->kind == TermKind::BVar) {
    if (t->idx > depth) return mk_bvar(t->idx - 1, t->sort);
    return t;
  }
  if (t->args.empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t->args.size());
  for (size_t i = 0; i < t->args.size(); ++i) {
    int d = depth;
    if (t->kind == TermKind::Lam) d = depth + 1;
    if (t->kind == TermKind::Let && i == 1) d = depth + 1;
    kids.push_back(shift_down(t->args[i], d));
  }
  auto n = std::make_shared<TermNode>(*t);
  n->args = kids;
  return n;
}

struct Simplifier {
  int fuel = 100000;

  Term run(const Term& t) {
    Term cur = t;
    for (int round = 0; round < 16; ++round) {
      Term next = simp(cur);
      if (term_eq(next, cur)) return next;
      cur = next;
    }
    return cur;
  }

  Term simp(const Term& t) {
    if (fuel-- <= 0) return t;
    // children first
    Term base = t;
    if (!t->args.empty()) {
      std::vector<Term> kids;
      kids.reserve(t->args.size());
      bool changed = false;
      for (auto& a : t->args) {
        Term s = simp(a);
        changed |= s.get() != a.get();
        kids.push_back(std::move(s));
      }
      if (changed) {
        auto n = std::make_shared<TermNode>(*t);
        n->args = std::move(kids);
        base = n;
      }
    }
    Term h = head(base);
    if (h.get() != base.get() && !term_eq(h, base)) return simp(h);
    return h;
  }

  Term head(const Term& t) {
    switch (t->kind) {
      case TermKind::App:
        if (t->args[0]->kind == TermKind::Lam) return open_term(t->args[0]->args[0], t->args[1]);
        return t;
      case TermKind::Let:
        return open_term(t->args[1], t->args[0]);
      case TermKind::Proj: {
        const Term& u = t->args[0];
        if (u->kind == TermKind::TupleT && t->idx < (int)u->args.size()) return u->args[t->idx];
        return t;
      }
      case TermKind::TupleT: {
        // eta: (pi1 x, ..., pin x) -> x
        if (!t->args.empty() && t->args[0]->kind == TermKind::Proj && t->args[0]->idx == 0) {
          const Term& x = t->args[0]->args[0];
          if (x->sort->kind == SortKind::Tuple && x->sort->args.size() == t->args.size()) {
            bool all = true;
            for (size_t i = 0; i < t->args.size(); ++i) {
              if (t->args[i]->kind != TermKind::Proj || t->args[i]->idx != (int)i ||
                  !term_eq(t->args[i]->args[0], x)) {
                all = false;
                break;
              }
            }
            if (all) return x;
          }
        }
        return t;
      }
      case TermKind::Lam: {
        const Term& b = t->args[0];
        if (b->kind == TermKind::App && b->args[1]->kind == TermKind::BVar &&
            b->args[1]->idx == 0 && !uses_bvar(b->args[0], 0))
          return shift_down(b->args[0], 0);
        return t;
      }
      case TermKind::If: {
        if (is_true(t->args[0])) return t->args[1];
        if (is_false(t->args[0])) return t->args[2];
        if (term_eq(t->args[1], t->args[2])) return t->args[1];
        return t;
      }
      case TermKind::Con:
        return con(t);
      default:
        return t;
    }
  }

  Term con(const Term& t) {
    const std::string& op = t->name;
    const auto& a = t->args;
    auto T = mk_bool(true);
    auto F = mk_bool(false);
    if (op == "and") {
      if (is_true(a[0])) return a[1];
      if (is_true(a[1])) return a[0];
      if (is_false(a[0]) || is_false(a[1])) return F;
      if (term_eq(a[0], a[1])) return a[0];
      return t;
    }
    if (op == "or") {
      if (is_false(a[0])) return a[1];
      if (is_false(a[1])) return a[0];
      if (is_true(a[0]) || is_true(a[1])) return T;
      if (term_eq(a[0], a[1])) return a[0];
      return t;
    }
    if (op == "not") {
      if (is_true(a[0])) return F;
      if (is_false(a[0])) return T;
      if (a[0]->kind == TermKind::Con && a[0]->name == "not") return a[0]->args[0];
      return t;
    }
    if (op == "imp") {
      if (is_true(a[0])) return a[1];
      if (is_false(a[0]) || is_true(a[1])) return T;
      if (is_false(a[1])) return mk_not(a[0]);
      if (term_eq(a[0], a[1])) return T;
      return t;
    }
    if (op == "eq") {
      if (term_eq(a[0], a[1])) return T;
      if (literal_value(a[0]) && literal_value(a[1])) return mk_bool(term_eq(a[0], a[1]));
      if (is_num_sort(a[0]->sort)) {
        LinForm d = lin_of(mk_sub(a[0], a[1]));
        if (d.ok && d.ms.empty()) return mk_bool(d.c.zero());
      }
      if (a[0]->kind == TermKind::TupleT && a[1]->kind == TermKind::TupleT &&
          a[0]->args.size() == a[1]->args.size()) {
        Term acc = T;
        for (size_t i = 0; i < a[0]->args.size(); ++i)
          acc = and_simp(acc, mk_eq(a[0]->args[i], a[1]->args[i]));
        return acc;
      }
      if (a[0]->kind == TermKind::Con && a[1]->kind == TermKind::Con) {
        bool i1 = a[0]->name == "inj1", i2 = a[0]->name == "inj2";
        bool j1 = a[1]->name == "inj1", j2 = a[1]->name == "inj2";
        if ((i1 || i2) && (j1 || j2)) {
          if (i1 != j1) return F;
          return mk_eq(a[0]->args[0], a[1]->args[0]);
        }
        if (a[0]->name == "ivl" && a[1]->name == "ivl")
          return and_simp(mk_eq(a[0]->args[0], a[1]->args[0]), mk_eq(a[0]->args[1], a[1]->args[1]));
      }
      return t;
    }
    if (op == "le" || op == "lt") {
      LinForm d = lin_of(mk_sub(a[0], a[1]));
      if (d.ok && d.ms.empty())
        return mk_bool(op == "le" ? !(Rational::of(0) < d.c) : d.c < Rational::of(0));
      return t;
    }
    if (op == "add" || op == "sub" || op == "mul") {
      if (is_num_sort(t->sort)) return lin_normalize(t);
      // non-numeric "add": paths/sets use their own symbols
      return t;
    }
    if (op == "len") {
      const Term& l = a[0];
      if (l->kind == TermKind::ListLit) return mk_int((long long)l->args.size());
      if (l->kind == TermKind::Con && l->name == "append")
        return mk_add(mk_len(l->args[0]), mk_len(l->args[1]));
      if (l->kind == TermKind::Con && l->name == "map") return mk_len(l->args[1]);
      return t;
    }
    if (op == "map") {
      const Term& f = a[0];
      const Term& l = a[1];
      if (l->kind == TermKind::ListLit) {
        std::vector<Term> es;
        for (auto& e : l->args) es.push_back(apply_simp(f, e));
        Sort es_sort = f->sort->kind == SortKind::Fun ? f->sort->args[1] : any_sort();
        return mk_list(std::move(es), es_sort);
      }
      if (l->kind == TermKind::Con && l->name == "map") {
        // map f (map g xs) = map (f . g) xs
        const Term& g = l->args[0];
        Sort dom = g->sort->kind == SortKind::Fun ? g->sort->args[0] : any_sort();
        Term comp = fresh_lam(dom, [&](const Term& x) { return mk_app(f, mk_app(g, x)); });
        return mk_map(comp, l->args[1]);
      }
      if (l->kind == TermKind::Con && l->name == "replicate")
        return mk_replicate(apply_simp(f, l->args[0]), l->args[1]);
      if (l->kind == TermKind::Con && l->name == "cons")
        return mk_cons(apply_simp(f, l->args[0]), mk_map(f, l->args[1]));
      if (f->kind == TermKind::Lam && f->args[0]->kind == TermKind::BVar &&
          f->args[0]->idx == 0)
        return l;  // map id
      return t;
    }
    if (op == "zip") {
      const Term &x = a[0], &y = a[1];
      if (x->kind == TermKind::ListLit && y->kind == TermKind::ListLit) {
        size_t n = std::min(x->args.size(), y->args.size());
        std::vector<Term> es;
        for (size_t i = 0; i < n; ++i) es.push_back(mk_pair(x->args[i], y->args[i]));
        Sort es_sort = n ? es[0]->sort
                         : pair_sort(x->sort->args[0], y->sort->args[0]);
        return mk_list(std::move(es), es_sort);
      }
      auto rep_of_len = [&](const Term& r, const Term& other) {
        return r->kind == TermKind::Con && r->name == "replicate" &&
               r->args[1]->kind == TermKind::Con && r->args[1]->name == "len" &&
               term_eq(r->args[1]->args[0], other);
      };
      if (rep_of_len(y, x)) {
        Sort ex = x->sort->kind == SortKind::List ? x->sort->args[0] : any_sort();
        return mk_map(fresh_lam(ex, [&](const Term& v) { return mk_pair(v, y->args[0]); }), x);
      }
      if (rep_of_len(x, y)) {
        Sort ey = y->sort->kind == SortKind::List ? y->sort->args[0] : any_sort();
        return mk_map(fresh_lam(ey, [&](const Term& v) { return mk_pair(x->args[0], v); }), y);
      }
      return t;
    }
    if (op == "unzip") {
      const Term& l = a[0];
      if (l->kind == TermKind::ListLit) {
        bool all = true;
        for (auto& e : l->args)
          if (e->kind != TermKind::TupleT || e->args.size() != 2) { all = false; break; }
        if (all) {
          std::vector<Term> xs, ys;
          for (auto& e : l->args) { xs.push_back(e->args[0]); ys.push_back(e->args[1]); }
          Sort px = l->sort->args[0]->args[0], py = l->sort->args[0]->args[1];
          return mk_pair(mk_list(std::move(xs), px), mk_list(std::move(ys), py));
        }
      }
      return t;
    }
    if (op == "append") {
      if (a[0]->kind == TermKind::ListLit && a[0]->args.empty()) return a[1];
      if (a[1]->kind == TermKind::ListLit && a[1]->args.empty()) return a[0];
      if (a[0]->kind == TermKind::ListLit && a[1]->kind == TermKind::ListLit) {
        std::vector<Term> es = a[0]->args;
        es.insert(es.end(), a[1]->args.begin(), a[1]->args.end());
        return mk_list(std::move(es), a[0]->sort->args[0]);
      }
      return t;
    }
    if (op == "lslice") {
      auto i = lin_const(a[1]);
      auto j = lin_const(a[2]);
      if (a[0]->kind == TermKind::ListLit && i && j && i->den == 1 && j->den == 1) {
        long long n = (long long)a[0]->args.size();
        long long lo = std::clamp(i->num, 0LL, n), hi = std::clamp(j->num, 0LL, n);
        std::vector<Term> es;
        for (long long k = lo; k < hi; ++k) es.push_back(a[0]->args[k]);
        return mk_list(std::move(es), a[0]->sort->args[0]);
      }
      if (i && i->zero() && a[2]->kind == TermKind::Con && a[2]->name == "len" &&
          term_eq(a[2]->args[0], a[0]))
        return a[0];
      return t;
    }
    if (op == "idx") {
      auto i = lin_const(a[1]);
      if (a[0]->kind == TermKind::ListLit && i && i->den == 1) {
        if (i->num >= 0 && i->num < (long long)a[0]->args.size()) return a[0]->args[i->num];
        return mk_undef(t->sort);
      }
      return t;
    }
    if (op == "replicate") {
      auto n = lin_const(a[1]);
      if (n && n->den == 1 && n->num <= 8) {
        std::vector<Term> es((size_t)std::max(0LL, n->num), a[0]);
        return mk_list(std::move(es), a[0]->sort);
      }
      return t;
    }
    if (op == "cons") {
      if (a[1]->kind == TermKind::ListLit) {
        std::vector<Term> es = {a[0]};
        es.insert(es.end(), a[1]->args.begin(), a[1]->args.end());
        return mk_list(std::move(es), a[1]->sort->args[0]);
      }
      return t;
    }
    if (op == "setof") {
      if (a[0]->kind == TermKind::ListLit && literal_value(a[0]))
        return mk_setlit(a[0]->args, a[0]->sort->args[0]);
      return t;
    }
    if (op == "singleton") return mk_setlit({a[0]}, a[0]->sort);
    if (op == "the_elem") {
      if (a[0]->kind == TermKind::SetLit && a[0]->args.size() == 1) return a[0]->args[0];
      return t;
    }
    if (op == "union" || op == "inter" || op == "setminus") {
      const Term &x = a[0], &y = a[1];
      bool xe = x->kind == TermKind::SetLit && x->args.empty();
      bool ye = y->kind == TermKind::SetLit && y->args.empty();
      if (op == "union") {
        if (xe) return y;
        if (ye) return x;
        if (term_eq(x, y)) return x;
      }
      if (op == "inter") {
        if (xe || ye) return mk_setlit({}, t->sort->args[0]);
        if (term_eq(x, y)) return x;
      }
      if (op == "setminus") {
        if (xe) return x;
        if (ye) return x;
        if (term_eq(x, y)) return mk_setlit({}, t->sort->args[0]);
        if (y->kind == TermKind::Con && y->name == "setminus" && term_eq(y->args[0], x))
          return mk_inter(x, y->args[1]);
      }
      if (x->kind == TermKind::SetLit && y->kind == TermKind::SetLit && literal_value(x) &&
          literal_value(y)) {
        std::vector<Term> es;
        if (op == "union") {
          es = x->args;
          es.insert(es.end(), y->args.begin(), y->args.end());
        } else if (op == "inter") {
          for (auto& e : x->args)
            for (auto& f : y->args)
              if (term_eq(e, f)) es.push_back(e);
        } else {
          for (auto& e : x->args) {
            bool in = false;
            for (auto& f : y->args)
              if (term_eq(e, f)) { in = true; break; }
            if (!in) es.push_back(e);
          }
        }
        return mk_setlit(std::move(es), t->sort->args[0]);
      }
      return t;
    }
    if (op == "mem") {
      if (a[1]->kind == TermKind::SetLit) {
        for (auto& e : a[1]->args)
          if (term_eq(e, a[0])) return T;
        if (literal_value(a[0]) && literal_value(a[1])) return F;
        if (a[1]->args.size() == 1) return mk_eq(a[0], a[1]->args[0]);
      }
      if (a[1]->kind == TermKind::Con && a[1]->name == "univ_set") return T;
      return t;
    }
    if (op == "subset") {
      if (a[0]->kind == TermKind::SetLit && a[0]->args.empty()) return T;
      if (term_eq(a[0], a[1])) return T;
      if (a[1]->kind == TermKind::Con && a[1]->name == "univ_set") return T;
      if (a[0]->kind == TermKind::Con && a[0]->name == "setminus" && term_eq(a[0]->args[0], a[1]))
        return T;
      if (a[0]->kind == TermKind::Con && a[0]->name == "inter" &&
          (term_eq(a[0]->args[0], a[1]) || term_eq(a[0]->args[1], a[1])))
        return T;
      if (a[0]->kind == TermKind::SetLit && a[0]->args.size() <= 8) {
        Term acc = T;
        for (auto& e : a[0]->args) acc = and_simp(acc, mk_mem(e, a[1]));
        return acc;
      }
      return t;
    }
    if (op == "image") {
      const Term &f = a[0], &d = a[1];
      if (d->kind == TermKind::SetLit) {
        std::vector<Term> es;
        for (auto& e : d->args) es.push_back(apply_simp(f, e));
        Sort out = f->sort->kind == SortKind::Fun ? f->sort->args[1] : any_sort();
        return mk_setlit(std::move(es), out);
      }
      if (f->kind == TermKind::Lam && f->args[0]->kind == TermKind::BVar && f->args[0]->idx == 0)
        return d;  // image id
      if (d->kind == TermKind::Con && d->name == "image") {
        const Term& g = d->args[0];
        Sort dom = g->sort->kind == SortKind::Fun ? g->sort->args[0] : any_sort();
        return mk_image(fresh_lam(dom, [&](const Term& x) { return mk_app(f, mk_app(g, x)); }),
                        d->args[1]);
      }
      return t;
    }
    if (op == "bindset") {
      const Term &d = a[0], &f = a[1];
      // bind with singleton body is an image
      if (f->kind == TermKind::Lam && f->args[0]->kind == TermKind::SetLit &&
          f->args[0]->args.size() == 1) {
        const Term& body = f->args[0]->args[0];
        if (body->kind == TermKind::BVar && body->idx == 0) return d;
        return mk_image(mk_lam(f->binder_name, f->binder_sort, body), d);
      }
      if (d->kind == TermKind::SetLit) {
        Sort out = f->sort->kind == SortKind::Fun ? f->sort->args[1] : t->sort;
        if (d->args.empty())
          return mk_setlit({}, out->kind == SortKind::Set ? out->args[0] : any_sort());
        Term acc = apply_simp(f, d->args[0]);
        for (size_t i = 1; i < d->args.size(); ++i)
          acc = mk_union(acc, apply_simp(f, d->args[i]));
        return acc;
      }
      return t;
    }
    if (op == "sumcase") {
      if (a[0]->kind == TermKind::Con && a[0]->name == "inj1") return apply_simp(a[1], a[0]->args[0]);
      if (a[0]->kind == TermKind::Con && a[0]->name == "inj2") return apply_simp(a[2], a[0]->args[0]);
      return t;
    }
    if (op == "preimage_inj1" || op == "preimage_inj2") {
      if (a[0]->kind == TermKind::SetLit) {
        const char* want = op == "preimage_inj1" ? "inj1" : "inj2";
        bool all_inj = true;
        std::vector<Term> es;
        for (auto& e : a[0]->args) {
          if (e->kind == TermKind::Con && (e->name == "inj1" || e->name == "inj2")) {
            if (e->name == want) es.push_back(e->args[0]);
          } else {
            all_inj = false;
            break;
          }
        }
        if (all_inj) {
          Sort out = t->sort->kind == SortKind::Set ? t->sort->args[0] : any_sort();
          return mk_setlit(std::move(es), out);
        }
      }
      return t;
    }
    if (op == "mapget") {
      if (a[0]->kind == TermKind::SetLit && literal_value(a[1])) {
        for (auto& e : a[0]->args)
          if (e->kind == TermKind::TupleT && e->args.size() == 2 && term_eq(e->args[0], a[1]))
            return e->args[1];
        if (literal_value(a[0])) return mk_undef(t->sort);
      }
      return t;
    }
    if (op == "maprestrict") {
      if (a[0]->kind == TermKind::SetLit && a[1]->kind == TermKind::SetLit &&
          literal_value(a[1])) {
        std::vector<Term> es;
        bool all_pairs = true;
        for (auto& e : a[0]->args) {
          if (e->kind != TermKind::TupleT || e->args.size() != 2 || !literal_value(e->args[0])) {
            all_pairs = false;
            break;
          }
          for (auto& k : a[1]->args)
            if (term_eq(e->args[0], k)) { es.push_back(e); break; }
        }
        if (all_pairs) return mk_setlit(std::move(es), a[0]->sort->args[0]);
      }
      return t;
    }
    if (op == "in_dom") {
      Term app = apply_simp(a[1], a[0]);
      Term s = run(app);
      if (definitely_defined(s)) return T;
      return t;
    }
    if (op == "subset_dom") {
      if (a[0]->kind == TermKind::SetLit) {
        Term acc = T;
        for (auto& e : a[0]->args) acc = and_simp(acc, mk_in_dom(e, a[1]));
        return acc;
      }
      if (definitely_defined(a[1]) && a[1]->kind == TermKind::Lam &&
          definitely_defined(a[1]->args[0]))
        return T;
      return t;
    }
    if (op == "forall" || op == "exists") {
      if (a[0]->kind == TermKind::Lam) {
        if (is_true(a[0]->args[0])) return op == "forall" ? T : t;
        if (is_false(a[0]->args[0])) return op == "exists" ? F : t;
        if (op == "forall" && is_true(a[0]->args[0])) return T;
      }
      return t;
    }
    if (op == "l2s" && a[0]->kind == TermKind::ListLit) {
      const Sort& sum = t->sort;
      if (a[0]->args.empty()) {
        if (sum->kind == SortKind::Sum) return mk_inj1(mk_unit(), sum);
        return t;
      }
      if (sum->kind == SortKind::Sum) {
        std::vector<Term> rest(a[0]->args.begin() + 1, a[0]->args.end());
        return mk_inj2(mk_pair(a[0]->args[0], mk_list(std::move(rest), a[0]->sort->args[0])), sum);
      }
      return t;
    }
    if (op == "truthy") {
      if (a[0]->sort->kind == SortKind::Bool) return a[0];
      if (a[0]->kind == TermKind::LitInt) return mk_bool(a[0]->ival != 0);
      if (a[0]->sort->kind == SortKind::Int)
        return mk_not(mk_con("eq", {a[0], mk_int(0)}, bool_sort()));
      return t;
    }
    if (op == "ki" && a[0]->kind == TermKind::Con && a[0]->name == "ik") return a[0]->args[0];
    if (op == "ki" && a[0]->kind == TermKind::LitInt) return a[0];
    if (op == "ivl_lo" && a[0]->kind == TermKind::Con && a[0]->name == "ivl") return a[0]->args[0];
    if (op == "ivl_hi" && a[0]->kind == TermKind::Con && a[0]->name == "ivl") return a[0]->args[1];
    if ((op == "arrow_src" || op == "arrow_len" || op == "arrow_dst") &&
        a[0]->kind == TermKind::Con && a[0]->name == "arrow") {
      int i = op == "arrow_src" ? 0 : op == "arrow_len" ? 1 : 2;
      return a[0]->args[i];
    }
    return t;
  }
};

}  // namespace

bool is_true(const Term& t) { return t->kind == TermKind::LitBool && t->bval; }
bool is_false(const Term& t) { return t->kind == TermKind::LitBool && !t->bval; }

Term and_simp(const Term& a, const Term& b) {
  if (is_true(a)) return b;
  if (is_true(b)) return a;
  if (is_false(a)) return a;
  if (is_false(b)) return b;
  if (term_eq(a, b)) return a;
  return mk_and(a, b);
}

Term apply_simp(const Term& f, const Term& x) {
  if (f->kind == TermKind::Lam) return open_term(f->args[0], x);
  return mk_app(f, x);
}

Term simplify(const Term& t) {
  Simplifier s;
  return s.run(t);
}

}  // namespace slr
