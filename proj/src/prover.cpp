#include "slr/prover.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "slr/simplify.hpp"

namespace slr {

namespace {

using Clock = std::chrono::steady_clock;

struct Frac {
  long long n = 0, d = 1;
  static Frac of(long long a, long long b = 1) {
    Frac f{a, b};
    f.norm();
    return f;
  }
  void norm() {
    if (d < 0) { n = -n; d = -d; }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
  }
  Frac operator+(const Frac& o) const { return of(n * o.d + o.n * d, d * o.d); }
  Frac operator-(const Frac& o) const { return of(n * o.d - o.n * d, d * o.d); }
  Frac operator*(const Frac& o) const { return of(n * o.n, d * o.d); }
  bool neg() const { return n < 0; }
  bool zero() const { return n == 0; }
  bool pos() const { return n > 0; }
};

// linear inequality sum(coeff*var) + c (<= | <) 0; vars are opaque monomials
struct Ineq {
  std::map<Term, Frac, TermLess> coef;
  Frac c;
  bool strict = false;
};

// decompose a numeric term into linear form over opaque atoms
bool linear_of(const Term& t, std::map<Term, Frac, TermLess>& coef, Frac& c, Frac mult) {
  switch (t->kind) {
    case TermKind::LitInt: c = c + mult * Frac::of(t->ival); return true;
    case TermKind::LitRat: c = c + mult * Frac::of(t->num, t->den); return true;
    case TermKind::Con:
      if (t->name == "add" || t->name == "sub") {
        if (!linear_of(t->args[0], coef, c, mult)) return false;
        Frac m2 = t->name == "sub" ? Frac::of(0) - mult : mult;
        return linear_of(t->args[1], coef, c, m2);
      }
      if (t->name == "mul") {
        // one side must be a constant for linearity; otherwise opaque atom
        auto cst = [](const Term& x) -> std::optional<Frac> {
          if (x->kind == TermKind::LitInt) return Frac::of(x->ival);
          if (x->kind == TermKind::LitRat) return Frac::of(x->num, x->den);
          return std::nullopt;
        };
        if (auto k = cst(t->args[0])) return linear_of(t->args[1], coef, c, mult * *k);
        if (auto k = cst(t->args[1])) return linear_of(t->args[0], coef, c, mult * *k);
      }
      [[fallthrough]];
    default: {
      if (has_evar(t)) return false;  // unsolved holes cannot support entailment
      auto it = coef.find(t);
      if (it == coef.end()) coef.emplace(t, mult);
      else it->second = it->second + mult;
      return true;
    }
  }
}

std::optional<Ineq> ineq_of(const Term& lhs, const Term& rhs, bool strict) {
  Ineq q;
  q.strict = strict;
  if (!linear_of(lhs, q.coef, q.c, Frac::of(1))) return std::nullopt;
  if (!linear_of(rhs, q.coef, q.c, Frac::of(-1))) return std::nullopt;
  for (auto it = q.coef.begin(); it != q.coef.end();)
    it = it->second.zero() ? q.coef.erase(it) : std::next(it);
  return q;
}

// collect linear constraints implied by a boolean term (conjunctive skeleton)
void constraints_of(const Term& t, std::vector<Ineq>& out) {
  if (t->kind != TermKind::Con) return;
  if (t->name == "and") {
    constraints_of(t->args[0], out);
    constraints_of(t->args[1], out);
    return;
  }
  auto push = [&](const Term& a, const Term& b, bool strict) {
    if (auto q = ineq_of(a, b, strict)) out.push_back(*q);
  };
  if (t->name == "le") push(t->args[0], t->args[1], false);
  if (t->name == "lt") push(t->args[0], t->args[1], true);
  if (t->name == "eq" &&
      (t->args[0]->sort->kind == SortKind::Int || t->args[0]->sort->kind == SortKind::Rat)) {
    push(t->args[0], t->args[1], false);
    push(t->args[1], t->args[0], false);
  }
}

// Fourier-Motzkin unsatisfiability check
bool fm_unsat(std::vector<Ineq> sys, Clock::time_point deadline) {
  for (int round = 0; round < 12; ++round) {
    if (Clock::now() > deadline) return false;
    if (sys.size() > 400) return false;
    // constant contradictions: c <= 0 fails when c > 0; c < 0 fails when c >= 0
    for (auto& q : sys)
      if (q.coef.empty() && (q.strict ? (q.c.pos() || q.c.zero()) : q.c.pos())) return true;
    // pick a variable to eliminate
    Term var;
    for (auto& q : sys)
      if (!q.coef.empty()) { var = q.coef.begin()->first; break; }
    if (!var) return false;
    std::vector<Ineq> pos, neg, rest;
    for (auto& q : sys) {
      auto it = q.coef.find(var);
      if (it == q.coef.end()) { rest.push_back(q); continue; }
      (it->second.pos() ? pos : neg).push_back(q);
    }
    for (auto& p : pos)
      for (auto& n : neg) {
        // p: a*x + P <= 0 (a>0), n: -b*x + N <= 0 (b>0)  =>  b*P + a*N <= 0
        Frac a = p.coef.at(var);
        Frac b = Frac::of(0) - n.coef.at(var);
        Ineq q;
        q.strict = p.strict || n.strict;
        q.c = b * p.c + a * n.c;
        for (auto& [v, cv] : p.coef)
          if (!term_eq(v, var)) q.coef[v] = b * cv;
        for (auto& [v, cv] : n.coef)
          if (!term_eq(v, var)) {
            auto it = q.coef.find(v);
            if (it == q.coef.end()) q.coef[v] = a * cv;
            else it->second = it->second + a * cv;
          }
        for (auto it = q.coef.begin(); it != q.coef.end();)
          it = it->second.zero() ? q.coef.erase(it) : std::next(it);
        rest.push_back(std::move(q));
      }
    sys = std::move(rest);
  }
  return false;
}

}  // namespace

bool SideProver::prove(const Term& goal) const {
  auto deadline = Clock::now() + std::chrono::milliseconds(budget_ms);
  return prove_in(goal, deadline);
}

bool SideProver::prove_in(const Term& goal, Clock::time_point deadline) const {
  Term g = simplify(goal);
  if (is_true(g)) return true;
  if (is_false(g)) return false;
  if (Clock::now() > deadline) return false;
  for (auto& c : context)
    if (term_eq(simplify(c), g)) return true;
  if (g->kind == TermKind::Con && g->name == "and")
    return prove_in(g->args[0], deadline) && prove_in(g->args[1], deadline);
  if (g->kind == TermKind::Con && g->name == "not" && g->args[0]->kind == TermKind::Con &&
      g->args[0]->name == "eq") {
    const Term& e = g->args[0];
    if (e->args[0]->sort->kind == SortKind::Int || e->args[0]->sort->kind == SortKind::Rat)
      return prove_in(mk_lt(e->args[0], e->args[1]), deadline) ||
             prove_in(mk_lt(e->args[1], e->args[0]), deadline);
  }
  return linear_entails(g, deadline);
}

bool SideProver::linear_entails(const Term& goal, Clock::time_point deadline) const {
  // negate the goal, conjoin context constraints, refute
  std::optional<Ineq> neg;
  if (goal->kind != TermKind::Con) return false;
  if (goal->name == "le")
    neg = ineq_of(goal->args[1], goal->args[0], true);  // !(a<=b) == b<a
  else if (goal->name == "lt")
    neg = ineq_of(goal->args[1], goal->args[0], false);
  else if (goal->name == "eq" &&
           (goal->args[0]->sort->kind == SortKind::Int ||
            goal->args[0]->sort->kind == SortKind::Rat)) {
    // prove both directions
    return prove_in(mk_le(goal->args[0], goal->args[1]), deadline) &&
           prove_in(mk_le(goal->args[1], goal->args[0]), deadline);
  }
  if (!neg) return false;
  std::vector<Ineq> sys = {*neg};
  for (auto& c : context) constraints_of(simplify(c), sys);
  return fm_unsat(std::move(sys), deadline);
}

bool SideProver::prove_eq(const Term& a, const Term& b) const {
  if (term_eq(simplify(a), simplify(b))) return true;
  if (!sort_eq(a->sort, b->sort)) return false;
  return prove(mk_eq(a, b));
}

bool SideProver::prove_ne(const Term& a, const Term& b) const {
  Term e = simplify(mk_eq(a, b));
  if (is_false(e)) return true;
  if (is_true(e)) return false;
  if (a->sort->kind == SortKind::Int || a->sort->kind == SortKind::Rat)
    return prove(mk_lt(a, b)) || prove(mk_lt(b, a));
  // componentwise scalar disequality (intervals, arrows)
  if (a->kind == TermKind::Con && b->kind == TermKind::Con && a->name == b->name &&
      a->args.size() == b->args.size()) {
    for (size_t i = 0; i < a->args.size(); ++i)
      if (prove_ne(a->args[i], b->args[i])) return true;
  }
  return false;
}

}  // namespace slr
