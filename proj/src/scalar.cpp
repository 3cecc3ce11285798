#include "slr/scalar.hpp"

#include <stdexcept>

#include "slr/simplify.hpp"

namespace slr {

Term ScalarAlgebra::mul_term(const Term& a, const Term& b) const {
  if (name == "path") return simplify(mk_append(a, b));
  if (name == "nnrat") return simplify(mk_mul(a, b));
  throw std::runtime_error("algebra " + name + " has no symbolic product");
}

Term ScalarAlgebra::add_term(const Term& a, const Term& b) const {
  if (name == "nnrat") return simplify(mk_add(a, b));
  if (name == "finset") return simplify(mk_union(a, b));
  if (name == "interval") return mk_ivl(ivl_lo(a), ivl_hi(b));  // adjacency proven by caller
  if (name == "larrow")
    return mk_con("arrow",
                  {mk_con("arrow_src", {a}, int_sort()),
                   simplify(mk_add(mk_con("arrow_len", {a}, int_sort()),
                                   mk_con("arrow_len", {b}, int_sort()))),
                   mk_con("arrow_dst", {b}, int_sort())},
                  a->sort);
  throw std::runtime_error("algebra " + name + " has no symbolic sum");
}

namespace {

ScalarAlgebra make_interval() {
  ScalarAlgebra a;
  a.name = "interval";
  a.sort = scalar_sort("interval");
  a.has_add = true;
  a.add_commutative = false;
  a.add_cancellative = true;
  a.solve_add = [](const Term& n, const Term& m, AddShape sh,
                   const SideProver& pr) -> std::optional<AddSolution> {
    Term ln = ivl_lo(n), hn = ivl_hi(n), lm = ivl_lo(m), hm = ivl_hi(m);
    AddSolution s;
    switch (sh) {
      case AddShape::Right:  // n + d = m
        if (!pr.prove_eq(ln, lm) || !pr.prove(mk_le(hn, hm))) return std::nullopt;
        s.w["delta"] = mk_ivl(hn, hm);
        return s;
      case AddShape::Left:  // n = m + d
        if (!pr.prove_eq(ln, lm) || !pr.prove(mk_le(hm, hn))) return std::nullopt;
        s.w["delta"] = mk_ivl(hm, hn);
        return s;
      case AddShape::TwoSided:  // d2 + n + d = m, all witnesses non-zero
        if (!pr.prove(mk_lt(lm, ln)) || !pr.prove(mk_lt(hn, hm))) return std::nullopt;
        s.w["delta2"] = mk_ivl(lm, ln);
        s.w["delta"] = mk_ivl(hn, hm);
        return s;
      case AddShape::Inner:  // n = d + m + d2
        if (!pr.prove(mk_lt(ln, lm)) || !pr.prove(mk_lt(hm, hn))) return std::nullopt;
        s.w["delta"] = mk_ivl(ln, lm);
        s.w["delta2"] = mk_ivl(hm, hn);
        return s;
      case AddShape::SwapL:  // a = g + c, b = d + g
        if (!pr.prove(mk_lt(lm, ln)) || !pr.prove(mk_lt(hm, hn)) || !pr.prove(mk_lt(ln, hm)))
          return std::nullopt;
        s.w["gamma"] = mk_ivl(ln, hm);
        s.w["c"] = mk_ivl(hm, hn);
        s.w["d"] = mk_ivl(lm, ln);
        return s;
      case AddShape::SwapR:  // a = c + g, b = g + d
        if (!pr.prove(mk_lt(ln, lm)) || !pr.prove(mk_lt(lm, hn)) || !pr.prove(mk_lt(hn, hm)))
          return std::nullopt;
        s.w["c"] = mk_ivl(ln, lm);
        s.w["gamma"] = mk_ivl(lm, hn);
        s.w["d"] = mk_ivl(hn, hm);
        return s;
    }
    return std::nullopt;
  };
  a.is_zero = [](const Term& t, const SideProver& pr) {
    return pr.prove_eq(ivl_lo(t), ivl_hi(t));
  };
  a.is_identity = [](const Term& t, const SideProver& pr) {
    return pr.prove_eq(simplify(mk_add(ivl_lo(t), mk_int(1))), ivl_hi(t));
  };
  a.pick_identity = [](const Term&, const SideProver&) -> std::optional<Term> {
    return std::nullopt;
  };
  a.vadd = [](const Value& x, const Value& y) -> std::optional<Value> {
    if (!value_eq(x.elems[1], y.elems[0])) return std::nullopt;
    return v_pair(x.elems[0], y.elems[1]);
  };
  a.v_is_zero = [](const Value& v) { return value_eq(v.elems[0], v.elems[1]); };
  a.v_is_identity = [](const Value& v) { return v.elems[1].i == v.elems[0].i + 1; };
  return a;
}

ScalarAlgebra make_nnrat() {
  ScalarAlgebra a;
  a.name = "nnrat";
  a.sort = rat_sort();
  a.has_add = true;
  a.has_mul = true;
  a.add_commutative = true;
  a.add_cancellative = true;
  a.both_sa_sd = true;
  a.solve_add = [](const Term& n, const Term& m, AddShape sh,
                   const SideProver& pr) -> std::optional<AddSolution> {
    AddSolution s;
    switch (sh) {
      case AddShape::Right:
        if (!pr.prove(mk_le(n, m))) return std::nullopt;
        s.w["delta"] = simplify(mk_sub(m, n));
        return s;
      case AddShape::Left:
        if (!pr.prove(mk_le(m, n))) return std::nullopt;
        s.w["delta"] = simplify(mk_sub(n, m));
        return s;
      default:
        return std::nullopt;  // commutative: the two-sided shapes are redundant
    }
  };
  a.solve_mul = [](const Term& n, const Term& m, MulShape sh,
                   const SideProver&) -> std::optional<Term> {
    // exact division for literals only
    auto lit = [](const Term& t) -> std::optional<std::pair<long long, long long>> {
      Term s = simplify(t);
      if (s->kind == TermKind::LitRat) return std::make_pair(s->num, s->den);
      if (s->kind == TermKind::LitInt) return std::make_pair(s->ival, 1LL);
      return std::nullopt;
    };
    auto nv = lit(n), mv = lit(m);
    if (!nv || !mv) return std::nullopt;
    auto [nn, nd] = *nv;
    auto [mn, md] = *mv;
    if (sh == MulShape::Right) {  // n * d = m
      if (nn == 0) return std::nullopt;
      return mk_rat(mn * nd, md * nn);
    }
    if (mn == 0) return std::nullopt;  // n = m * d
    return mk_rat(nn * md, nd * mn);
  };
  a.is_zero = [](const Term& t, const SideProver& pr) { return pr.prove_eq(t, mk_rat(0, 1)); };
  a.is_identity = [](const Term& t, const SideProver& pr) { return pr.prove_eq(t, mk_rat(1, 1)); };
  a.pick_identity = [](const Term&, const SideProver&) -> std::optional<Term> {
    return mk_rat(1, 1);
  };
  a.vadd = [](const Value& x, const Value& y) -> std::optional<Value> { return rat_add(x, y); };
  a.vmul = [](const Value& x, const Value& y) -> std::optional<Value> { return rat_mul(x, y); };
  a.v_is_zero = [](const Value& v) { return v.num == 0; };
  a.v_is_identity = [](const Value& v) { return v.num == 1 && v.den == 1; };
  return a;
}

ScalarAlgebra make_path() {
  ScalarAlgebra a;
  a.name = "path";
  a.sort = list_sort(abstract_sort("key"));
  a.has_mul = true;
  a.solve_mul = [](const Term& n, const Term& m, MulShape sh,
                   const SideProver&) -> std::optional<Term> {
    Term x = simplify(n), y = simplify(m);
    if (term_eq(x, y)) return mk_list({}, abstract_sort("key"));
    const Term& pre = sh == MulShape::Right ? x : y;   // prefix
    const Term& whole = sh == MulShape::Right ? y : x;
    if (pre->kind != TermKind::ListLit || whole->kind != TermKind::ListLit) return std::nullopt;
    if (pre->args.size() > whole->args.size()) return std::nullopt;
    for (size_t i = 0; i < pre->args.size(); ++i)
      if (!term_eq(pre->args[i], whole->args[i])) return std::nullopt;
    std::vector<Term> rest(whole->args.begin() + pre->args.size(), whole->args.end());
    return mk_list(std::move(rest), abstract_sort("key"));
  };
  a.is_zero = [](const Term&, const SideProver&) { return false; };
  a.is_identity = [](const Term& t, const SideProver&) {
    Term s = simplify(t);
    return s->kind == TermKind::ListLit && s->args.empty();
  };
  a.pick_identity = [](const Term&, const SideProver&) -> std::optional<Term> {
    return mk_list({}, abstract_sort("key"));
  };
  a.vmul = [](const Value& x, const Value& y) -> std::optional<Value> {
    std::vector<Value> es = x.elems;
    es.insert(es.end(), y.elems.begin(), y.elems.end());
    return v_list(std::move(es));
  };
  a.v_is_zero = [](const Value&) { return false; };
  a.v_is_identity = [](const Value& v) { return v.elems.empty(); };
  return a;
}

ScalarAlgebra make_finset() {
  ScalarAlgebra a;
  a.name = "finset";
  a.sort = set_sort(int_sort());
  a.has_add = true;
  a.add_commutative = true;
  a.add_cancellative = true;
  a.solve_add = [](const Term& n, const Term& m, AddShape sh,
                   const SideProver& pr) -> std::optional<AddSolution> {
    AddSolution s;
    if (sh == AddShape::Right) {  // n ⊔ d = m
      if (!pr.prove(mk_subset(n, m))) return std::nullopt;
      s.w["delta"] = simplify(mk_setminus(m, n));
      return s;
    }
    if (sh == AddShape::Left) {  // n = m ⊔ d
      if (!pr.prove(mk_subset(m, n))) return std::nullopt;
      s.w["delta"] = simplify(mk_setminus(n, m));
      return s;
    }
    return std::nullopt;
  };
  a.is_zero = [](const Term& t, const SideProver& pr) {
    Term s = simplify(t);
    if (s->kind == TermKind::SetLit && s->args.empty()) return true;
    return pr.prove_eq(s, mk_setlit({}, int_sort()));
  };
  a.is_identity = [](const Term& t, const SideProver&) {
    Term s = simplify(t);
    return s->kind == TermKind::SetLit && s->args.size() == 1;
  };
  a.pick_identity = [](const Term& m, const SideProver&) -> std::optional<Term> {
    Term s = simplify(m);
    if (s->kind == TermKind::SetLit && s->args.size() == 1) return s;
    return std::nullopt;
  };
  a.vadd = [](const Value& x, const Value& y) -> std::optional<Value> {
    for (auto& e : x.elems)
      for (auto& f : y.elems)
        if (value_eq(e, f)) return std::nullopt;  // must be disjoint
    std::vector<Value> es = x.elems;
    es.insert(es.end(), y.elems.begin(), y.elems.end());
    return v_set(std::move(es));
  };
  a.v_is_zero = [](const Value& v) { return v.elems.empty(); };
  a.v_is_identity = [](const Value& v) { return v.elems.size() == 1; };
  return a;
}

ScalarAlgebra make_larrow() {
  ScalarAlgebra a;
  a.name = "larrow";
  a.sort = scalar_sort("larrow");
  a.has_add = true;
  a.add_commutative = false;
  a.add_cancellative = false;
  auto src = [](const Term& t) { return simplify(mk_con("arrow_src", {t}, int_sort())); };
  auto len = [](const Term& t) { return simplify(mk_con("arrow_len", {t}, int_sort())); };
  auto dst = [](const Term& t) { return simplify(mk_con("arrow_dst", {t}, int_sort())); };
  a.solve_add = [src, len, dst](const Term& n, const Term& m, AddShape sh,
                                const SideProver& pr) -> std::optional<AddSolution> {
    // only the concatenation direction; the cut direction needs a fresh
    // midpoint and is served by an ad-hoc rule
    if (sh != AddShape::Right) return std::nullopt;
    if (!pr.prove_eq(src(n), src(m)) || !pr.prove(mk_le(len(n), len(m)))) return std::nullopt;
    AddSolution s;
    s.w["delta"] = mk_con("arrow", {dst(n), simplify(mk_sub(len(m), len(n))), dst(m)},
                          scalar_sort("larrow"));
    return s;
  };
  a.is_zero = [src, len, dst](const Term& t, const SideProver& pr) {
    return pr.prove_eq(len(t), mk_int(0)) && pr.prove_eq(src(t), dst(t));
  };
  a.is_identity = [len](const Term& t, const SideProver& pr) {
    return pr.prove_eq(len(t), mk_int(1));
  };
  a.pick_identity = [](const Term&, const SideProver&) -> std::optional<Term> {
    return std::nullopt;
  };
  a.vadd = [](const Value& x, const Value& y) -> std::optional<Value> {
    if (!value_eq(x.elems[2], y.elems[0])) return std::nullopt;
    return v_tuple({x.elems[0], v_int(x.elems[1].i + y.elems[1].i), y.elems[2]});
  };
  a.v_is_zero = [](const Value& v) { return v.elems[1].i == 0 && value_eq(v.elems[0], v.elems[2]); };
  a.v_is_identity = [](const Value& v) { return v.elems[1].i == 1; };
  return a;
}

}  // namespace

const ScalarAlgebra& builtin_algebra(const std::string& name) {
  static const std::map<std::string, ScalarAlgebra> all = [] {
    std::map<std::string, ScalarAlgebra> m;
    m["interval"] = make_interval();
    m["nnrat"] = make_nnrat();
    m["path"] = make_path();
    m["finset"] = make_finset();
    m["larrow"] = make_larrow();
    return m;
  }();
  auto it = all.find(name);
  if (it == all.end()) throw std::runtime_error("unknown scalar algebra " + name);
  return it->second;
}

const std::vector<std::string>& builtin_algebra_names() {
  static std::vector<std::string> names = {"interval", "nnrat", "path", "finset", "larrow"};
  return names;
}

}  // namespace slr
