#include "slr/term.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace slr {

namespace {

using NodeP = std::shared_ptr<TermNode>;

NodeP node(TermKind k, const Sort& s) { return std::make_shared<TermNode>(k, s); }

[[noreturn]] void sort_fail(const std::string& what) { throw SortError("sort error: " + what); }

void want(bool ok, const std::string& what) {
  if (!ok) sort_fail(what);
}

Sort key_sort() { return abstract_sort("key"); }

}  // namespace

Term mk_bvar(int idx, const Sort& s) {
  auto n = node(TermKind::BVar, s);
  n->idx = idx;
  return n;
}

Term mk_fvar(const std::string& name, const Sort& s, bool rigid) {
  auto n = node(TermKind::FVar, s);
  n->name = name;
  n->rigid = rigid;
  return n;
}

Term mk_evar(int id, const Sort& s) {
  auto n = node(TermKind::Evar, s);
  n->idx = id;
  return n;
}

Term mk_bool(bool b) {
  auto n = node(TermKind::LitBool, bool_sort());
  n->bval = b;
  return n;
}

Term mk_int(long long v) {
  auto n = node(TermKind::LitInt, int_sort());
  n->ival = v;
  return n;
}

Term mk_rat(long long num, long long den) {
  want(den != 0, "rational with zero denominator");
  if (den < 0) { num = -num; den = -den; }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) { num /= g; den /= g; }
  auto n = node(TermKind::LitRat, rat_sort());
  n->num = num;
  n->den = den;
  return n;
}

Term mk_unit() {
  static Term u = node(TermKind::LitUnit, unit_sort());
  return u;
}

Term mk_sym(const std::string& s) {
  auto n = node(TermKind::LitSym, key_sort());
  n->name = s;
  return n;
}

Term mk_con(const std::string& symbol, std::vector<Term> args, const Sort& result) {
  auto n = node(TermKind::Con, result);
  n->name = symbol;
  n->args = std::move(args);
  return n;
}

Term mk_lam(const std::string& hint, const Sort& binder, const Term& body) {
  auto n = node(TermKind::Lam, fun_sort(binder, body->sort));
  n->binder_sort = binder;
  n->binder_name = hint;
  n->args = {body};
  return n;
}

Term mk_app(const Term& f, const Term& arg) {
  want(f->sort->kind == SortKind::Fun || is_any(f->sort), "application head not a function: " + show_term(f));
  Sort cod = any_sort();
  if (f->sort->kind == SortKind::Fun) {
    want(sort_eq(f->sort->args[0], arg->sort),
         "application argument sort mismatch: " + show_sort(f->sort->args[0]) + " vs " + show_sort(arg->sort));
    cod = f->sort->args[1];
  }
  auto n = node(TermKind::App, cod);
  n->args = {f, arg};
  return n;
}

Term mk_app2(const Term& f, const Term& a, const Term& b) {
  if (f->sort->kind == SortKind::Fun && f->sort->args[0]->kind == SortKind::Tuple &&
      f->sort->args[0]->args.size() == 2)
    return mk_app(f, mk_pair(a, b));
  return mk_app(mk_app(f, a), b);
}

Term mk_tuple(std::vector<Term> comps) {
  std::vector<Sort> ss;
  ss.reserve(comps.size());
  for (auto& c : comps) ss.push_back(c->sort);
  auto n = node(TermKind::TupleT, tuple_sort(std::move(ss)));
  n->args = std::move(comps);
  return n;
}

Term mk_pair(const Term& a, const Term& b) { return mk_tuple({a, b}); }

Term mk_proj(int i, const Term& t) {
  Sort s = any_sort();
  if (t->sort->kind == SortKind::Tuple) {
    want(i >= 0 && i < (int)t->sort->args.size(), "projection out of range");
    s = t->sort->args[i];
  } else {
    want(is_any(t->sort), "projection of non-tuple");
  }
  auto n = node(TermKind::Proj, s);
  n->idx = i;
  n->args = {t};
  return n;
}

Term mk_list(std::vector<Term> elems, const Sort& elem_sort) {
  for (auto& e : elems) want(sort_eq(e->sort, elem_sort), "list element sort mismatch");
  auto n = node(TermKind::ListLit, list_sort(elem_sort));
  n->args = std::move(elems);
  return n;
}

Term mk_setlit(std::vector<Term> elems, const Sort& elem_sort) {
  for (auto& e : elems) want(sort_eq(e->sort, elem_sort), "set element sort mismatch");
  std::sort(elems.begin(), elems.end(), TermLess{});
  elems.erase(std::unique(elems.begin(), elems.end(),
                          [](const Term& a, const Term& b) { return term_eq(a, b); }),
              elems.end());
  auto n = node(TermKind::SetLit, set_sort(elem_sort));
  n->args = std::move(elems);
  return n;
}

Term mk_let(const std::string& hint, const Term& bound, const Term& body) {
  auto n = node(TermKind::Let, body->sort);
  n->binder_sort = bound->sort;
  n->binder_name = hint;
  n->args = {bound, body};
  return n;
}

Term mk_if(const Term& c, const Term& t, const Term& e) {
  want(sort_eq(c->sort, bool_sort()), "if condition not bool");
  want(sort_eq(t->sort, e->sort), "if branch sorts differ");
  auto n = node(TermKind::If, t->sort);
  n->args = {c, t, e};
  return n;
}

Term mk_undef(const Sort& s) { return mk_con("undef", {}, s); }

// --- bool / arithmetic -------------------------------------------------------

namespace {
Term bool2(const std::string& op, const Term& a, const Term& b) {
  want(sort_eq(a->sort, bool_sort()) && sort_eq(b->sort, bool_sort()), op + " expects bools");
  return mk_con(op, {a, b}, bool_sort());
}
}  // namespace

Term mk_and(const Term& a, const Term& b) { return bool2("and", a, b); }
Term mk_or(const Term& a, const Term& b) { return bool2("or", a, b); }
Term mk_imp(const Term& a, const Term& b) { return bool2("imp", a, b); }

Term mk_not(const Term& a) {
  want(sort_eq(a->sort, bool_sort()), "not expects bool");
  return mk_con("not", {a}, bool_sort());
}

Term mk_eq(const Term& a, const Term& b) {
  want(sort_eq(a->sort, b->sort),
       "eq operand sorts differ: " + show_sort(a->sort) + " vs " + show_sort(b->sort));
  return mk_con("eq", {a, b}, bool_sort());
}

namespace {
Term cmp2(const std::string& op, const Term& a, const Term& b) {
  want(sort_eq(a->sort, b->sort), op + " operand sorts differ");
  want(a->sort->kind == SortKind::Int || a->sort->kind == SortKind::Rat || is_any(a->sort),
       op + " expects numbers");
  return mk_con(op, {a, b}, bool_sort());
}
}  // namespace

Term mk_le(const Term& a, const Term& b) { return cmp2("le", a, b); }
Term mk_lt(const Term& a, const Term& b) { return cmp2("lt", a, b); }

Term mk_forall(const std::string& hint, const Sort& s, const Term& body) {
  return mk_con("forall", {mk_lam(hint, s, body)}, bool_sort());
}
Term mk_exists(const std::string& hint, const Sort& s, const Term& body) {
  return mk_con("exists", {mk_lam(hint, s, body)}, bool_sort());
}

namespace {
Term arith2(const std::string& op, const Term& a, const Term& b) {
  want(sort_eq(a->sort, b->sort), op + " operand sorts differ");
  return mk_con(op, {a, b}, a->sort);
}
}  // namespace

Term mk_add(const Term& a, const Term& b) { return arith2("add", a, b); }
Term mk_sub(const Term& a, const Term& b) { return arith2("sub", a, b); }
Term mk_mul(const Term& a, const Term& b) { return arith2("mul", a, b); }

// --- containers --------------------------------------------------------------

Term mk_mem(const Term& x, const Term& s) {
  want(s->sort->kind == SortKind::Set || is_any(s->sort), "mem expects a set");
  if (s->sort->kind == SortKind::Set) want(sort_eq(x->sort, s->sort->args[0]), "mem element sort");
  return mk_con("mem", {x, s}, bool_sort());
}

Term mk_subset(const Term& a, const Term& b) {
  want(sort_eq(a->sort, b->sort), "subset operand sorts differ");
  return mk_con("subset", {a, b}, bool_sort());
}

namespace {
Term set2(const std::string& op, const Term& a, const Term& b) {
  want(sort_eq(a->sort, b->sort) && (a->sort->kind == SortKind::Set || is_any(a->sort)),
       op + " expects sets of one sort");
  return mk_con(op, {a, b}, a->sort);
}
}  // namespace

Term mk_union(const Term& a, const Term& b) { return set2("union", a, b); }
Term mk_setminus(const Term& a, const Term& b) { return set2("setminus", a, b); }
Term mk_inter(const Term& a, const Term& b) { return set2("inter", a, b); }

Term mk_map(const Term& f, const Term& l) {
  want(f->sort->kind == SortKind::Fun || is_any(f->sort), "map expects function");
  want(l->sort->kind == SortKind::List || is_any(l->sort), "map expects list");
  Sort out = any_sort();
  if (f->sort->kind == SortKind::Fun) {
    if (l->sort->kind == SortKind::List)
      want(sort_eq(f->sort->args[0], l->sort->args[0]), "map function domain mismatch");
    out = list_sort(f->sort->args[1]);
  }
  return mk_con("map", {f, l}, out);
}

Term mk_setof(const Term& l) {
  want(l->sort->kind == SortKind::List || is_any(l->sort), "setof expects list");
  Sort out = l->sort->kind == SortKind::List ? set_sort(l->sort->args[0]) : any_sort();
  return mk_con("setof", {l}, out);
}

Term mk_zip(const Term& a, const Term& b) {
  want((a->sort->kind == SortKind::List && b->sort->kind == SortKind::List) ||
           is_any(a->sort) || is_any(b->sort),
       "zip expects lists");
  Sort out = any_sort();
  if (a->sort->kind == SortKind::List && b->sort->kind == SortKind::List)
    out = list_sort(pair_sort(a->sort->args[0], b->sort->args[0]));
  return mk_con("zip", {a, b}, out);
}

Term mk_unzip(const Term& l) {
  Sort out = any_sort();
  if (l->sort->kind == SortKind::List && l->sort->args[0]->kind == SortKind::Tuple &&
      l->sort->args[0]->args.size() == 2) {
    out = pair_sort(list_sort(l->sort->args[0]->args[0]), list_sort(l->sort->args[0]->args[1]));
  } else {
    want(is_any(l->sort) || l->sort->kind == SortKind::List, "unzip expects list of pairs");
  }
  return mk_con("unzip", {l}, out);
}

Term mk_append(const Term& a, const Term& b) {
  want(sort_eq(a->sort, b->sort), "append operand sorts differ");
  return mk_con("append", {a, b}, a->sort);
}

Term mk_len(const Term& l) { return mk_con("len", {l}, int_sort()); }

Term mk_lslice(const Term& l, const Term& i, const Term& j) {
  return mk_con("lslice", {l, i, j}, l->sort);
}

Term mk_idx(const Term& l, const Term& i) {
  Sort out = l->sort->kind == SortKind::List ? l->sort->args[0] : any_sort();
  return mk_con("idx", {l, i}, out);
}

Term mk_replicate(const Term& x, const Term& n) {
  return mk_con("replicate", {x, n}, list_sort(x->sort));
}

Term mk_cons(const Term& x, const Term& l) {
  if (l->sort->kind == SortKind::List) want(sort_eq(x->sort, l->sort->args[0]), "cons sort");
  return mk_con("cons", {x, l}, l->sort);
}

Term mk_image(const Term& f, const Term& d) {
  Sort out = f->sort->kind == SortKind::Fun ? set_sort(f->sort->args[1]) : any_sort();
  return mk_con("image", {f, d}, out);
}

Term mk_bindset(const Term& d, const Term& f) {
  Sort out = f->sort->kind == SortKind::Fun ? f->sort->args[1] : any_sort();
  return mk_con("bindset", {d, f}, out);
}

Term mk_singleton(const Term& x) { return mk_con("singleton", {x}, set_sort(x->sort)); }

Term mk_the_elem(const Term& s) {
  Sort out = s->sort->kind == SortKind::Set ? s->sort->args[0] : any_sort();
  return mk_con("the_elem", {s}, out);
}

Term mk_mapget(const Term& m, const Term& k) {
  Sort out = any_sort();
  if (m->sort->kind == SortKind::Set && m->sort->args[0]->kind == SortKind::Tuple &&
      m->sort->args[0]->args.size() == 2)
    out = m->sort->args[0]->args[1];
  return mk_con("mapget", {m, k}, out);
}

Term mk_maprestrict(const Term& m, const Term& ks) {
  return mk_con("maprestrict", {m, ks}, m->sort);
}

// --- sums ---------------------------------------------------------------------

Term mk_inj1(const Term& a, const Sort& sum) {
  want(sum->kind == SortKind::Sum && sort_eq(sum->args[0], a->sort), "inj1 sort");
  return mk_con("inj1", {a}, sum);
}

Term mk_inj2(const Term& b, const Sort& sum) {
  want(sum->kind == SortKind::Sum && sort_eq(sum->args[1], b->sort), "inj2 sort");
  return mk_con("inj2", {b}, sum);
}

Term mk_sumcase(const Term& s, const Term& f1, const Term& f2) {
  Sort out = f1->sort->kind == SortKind::Fun ? f1->sort->args[1] : any_sort();
  return mk_con("sumcase", {s, f1, f2}, out);
}

Term mk_preimage_inj1(const Term& d) {
  Sort out = any_sort();
  if (d->sort->kind == SortKind::Set && d->sort->args[0]->kind == SortKind::Sum)
    out = set_sort(d->sort->args[0]->args[0]);
  return mk_con("preimage_inj1", {d}, out);
}

Term mk_preimage_inj2(const Term& d) {
  Sort out = any_sort();
  if (d->sort->kind == SortKind::Set && d->sort->args[0]->kind == SortKind::Sum)
    out = set_sort(d->sort->args[0]->args[1]);
  return mk_con("preimage_inj2", {d}, out);
}

Term mk_in_dom(const Term& x, const Term& f) { return mk_con("in_dom", {x, f}, bool_sort()); }
Term mk_subset_dom(const Term& d, const Term& f) {
  return mk_con("subset_dom", {d, f}, bool_sort());
}

Term mk_ivl(const Term& lo, const Term& hi) {
  return mk_con("ivl", {lo, hi}, scalar_sort("interval"));
}
Term ivl_lo(const Term& ivl) {
  if (ivl->kind == TermKind::Con && ivl->name == "ivl") return ivl->args[0];
  return mk_con("ivl_lo", {ivl}, int_sort());
}
Term ivl_hi(const Term& ivl) {
  if (ivl->kind == TermKind::Con && ivl->name == "ivl") return ivl->args[1];
  return mk_con("ivl_hi", {ivl}, int_sort());
}

// --- structural operations ----------------------------------------------------

int term_cmp(const Term& a, const Term& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case TermKind::BVar:
    case TermKind::Evar:
    case TermKind::Proj:
      if (a->idx != b->idx) return a->idx < b->idx ? -1 : 1;
      break;
    case TermKind::FVar:
    case TermKind::LitSym:
    case TermKind::Con:
      if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
      break;
    case TermKind::LitBool:
      if (a->bval != b->bval) return a->bval < b->bval ? -1 : 1;
      break;
    case TermKind::LitInt:
      if (a->ival != b->ival) return a->ival < b->ival ? -1 : 1;
      break;
    case TermKind::LitRat: {
      // compare as exact rationals
      long long l = a->num * b->den, r = b->num * a->den;
      if (l != r) return l < r ? -1 : 1;
      break;
    }
    default:
      break;
  }
  if ((a->kind == TermKind::Lam || a->kind == TermKind::Let))
    if (int c = sort_cmp(a->binder_sort, b->binder_sort)) return c;
  if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (int c = term_cmp(a->args[i], b->args[i])) return c;
  return 0;
}

bool term_eq(const Term& a, const Term& b) { return term_cmp(a, b) == 0; }

namespace {

Term map_children(const Term& t, const std::vector<Term>& kids) {
  bool same = kids.size() == t->args.size();
  if (same)
    for (size_t i = 0; i < kids.size(); ++i)
      if (kids[i].get() != t->args[i].get()) { same = false; break; }
  if (same) return t;
  auto n = std::make_shared<TermNode>(*t);
  n->args = kids;
  return n;
}

// generic traversal with binder depth
template <typename F>
Term transform(const Term& t, int depth, F&& f) {
  if (Term r = f(t, depth)) return r;
  if (t->args.empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t->args.size());
  int inc = (t->kind == TermKind::Lam) ? 1 : 0;
  for (size_t i = 0; i < t->args.size(); ++i) {
    int d = depth;
    if (t->kind == TermKind::Lam) d = depth + 1;
    if (t->kind == TermKind::Let && i == 1) d = depth + 1;
    (void)inc;
    kids.push_back(transform(t->args[i], d, f));
  }
  return map_children(t, kids);
}

}  // namespace

namespace {
// raise loose indices at or above `cutoff` by `by` (for substituting open
// terms under binders)
Term shift_up(const Term& t, int by, int cutoff) {
  if (by == 0) return t;
  return transform(t, cutoff, [&](const Term& n, int depth) -> Term {
    if (n->kind == TermKind::BVar && n->idx >= depth) return mk_bvar(n->idx + by, n->sort);
    return Term{};
  });
}
}  // namespace

Term open_term(const Term& body, const Term& u) {
  return transform(body, 0, [&](const Term& t, int depth) -> Term {
    if (t->kind == TermKind::BVar) {
      if (t->idx == depth) return shift_up(u, depth, 0);
      if (t->idx > depth) return mk_bvar(t->idx - 1, t->sort);
      return t;
    }
    return Term{};
  });
}

Term close_term(const Term& t, const std::string& name) {
  return transform(t, 0, [&](const Term& n, int depth) -> Term {
    if (n->kind == TermKind::FVar && n->name == name) return mk_bvar(depth, n->sort);
    if (n->kind == TermKind::BVar && n->idx >= depth) return mk_bvar(n->idx + 1, n->sort);
    return Term{};
  });
}

Term lam_of(const std::string& name, const Sort& s, const Term& body) {
  return mk_lam(name, s, close_term(body, name));
}
Term forall_of(const std::string& name, const Sort& s, const Term& body) {
  return mk_con("forall", {lam_of(name, s, body)}, bool_sort());
}
Term exists_of(const std::string& name, const Sort& s, const Term& body) {
  return mk_con("exists", {lam_of(name, s, body)}, bool_sort());
}

Term subst_fvar(const Term& t, const std::string& name, const Term& replacement) {
  return transform(t, 0, [&](const Term& n, int depth) -> Term {
    if (n->kind == TermKind::FVar && n->name == name) {
      if (!sort_eq(n->sort, replacement->sort))
        sort_fail("substitute: replacement sort differs for " + name);
      return shift_up(replacement, depth, 0);
    }
    return Term{};
  });
}

Term subst_evar(const Term& t, int id, const Term& replacement) {
  return transform(t, 0, [&](const Term& n, int) -> Term {
    if (n->kind == TermKind::Evar && n->idx == id) return replacement;
    return Term{};
  });
}

Term subst_evars(const Term& t, const std::map<int, Term>& env) {
  if (env.empty()) return t;
  return transform(t, 0, [&](const Term& n, int) -> Term {
    if (n->kind == TermKind::Evar) {
      auto it = env.find(n->idx);
      if (it != env.end()) return subst_evars(it->second, env);
    }
    return Term{};
  });
}

namespace {
template <typename F>
void visit(const Term& t, F&& f) {
  f(t);
  for (auto& a : t->args) visit(a, f);
}
}  // namespace

void collect_fvars(const Term& t, std::set<std::string>& out) {
  visit(t, [&](const Term& n) { if (n->kind == TermKind::FVar) out.insert(n->name); });
}

void collect_evars(const Term& t, std::set<int>& out) {
  visit(t, [&](const Term& n) { if (n->kind == TermKind::Evar) out.insert(n->idx); });
}

bool has_evar(const Term& t) {
  if (t->kind == TermKind::Evar) return true;
  for (auto& a : t->args)
    if (has_evar(a)) return true;
  return false;
}

namespace {
bool lc(const Term& t, int depth) {
  if (t->kind == TermKind::BVar) return t->idx < depth;
  for (size_t i = 0; i < t->args.size(); ++i) {
    int d = depth;
    if (t->kind == TermKind::Lam) d = depth + 1;
    if (t->kind == TermKind::Let && i == 1) d = depth + 1;
    if (!lc(t->args[i], d)) return false;
  }
  return true;
}
}  // namespace

bool locally_closed(const Term& t) { return lc(t, 0); }

bool contains_subterm(const Term& t, const Term& needle) {
  if (term_eq(t, needle)) return true;
  for (auto& a : t->args)
    if (contains_subterm(a, needle)) return true;
  return false;
}

// --- printing -------------------------------------------------------------

namespace {

void show(const Term& t, std::vector<std::string>& binders, std::ostringstream& os) {
  auto bname = [&](int idx) -> std::string {
    int i = (int)binders.size() - 1 - idx;
    if (i >= 0 && i < (int)binders.size()) return binders[i];
    return "#" + std::to_string(idx);
  };
  auto args_list = [&](const char* name, size_t from = 0) {
    os << name << "(";
    for (size_t i = from; i < t->args.size(); ++i) {
      if (i > from) os << ", ";
      show(t->args[i], binders, os);
    }
    os << ")";
  };
  switch (t->kind) {
    case TermKind::BVar: os << bname(t->idx); break;
    case TermKind::FVar: os << t->name; break;
    case TermKind::Evar: os << "?e" << t->idx; break;
    case TermKind::LitBool: os << (t->bval ? "true" : "false"); break;
    case TermKind::LitInt: os << t->ival; break;
    case TermKind::LitRat:
      os << t->num;
      if (t->den != 1) os << "/" << t->den;
      break;
    case TermKind::LitUnit: os << "()"; break;
    case TermKind::LitSym: os << "'" << t->name; break;
    case TermKind::Lam: {
      std::string nm = t->binder_name.empty() ? "v" + std::to_string(binders.size()) : t->binder_name;
      // disambiguate shadowed hints
      for (auto& b : binders)
        if (b == nm) { nm += "'"; }
      os << "(\\" << nm << ". ";
      binders.push_back(nm);
      show(t->args[0], binders, os);
      binders.pop_back();
      os << ")";
      break;
    }
    case TermKind::App: {
      show(t->args[0], binders, os);
      os << "(";
      show(t->args[1], binders, os);
      os << ")";
      break;
    }
    case TermKind::TupleT: {
      os << "(";
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        show(t->args[i], binders, os);
      }
      os << ")";
      break;
    }
    case TermKind::Proj:
      os << "pi" << (t->idx + 1) << "(";
      show(t->args[0], binders, os);
      os << ")";
      break;
    case TermKind::ListLit: {
      os << "[";
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        show(t->args[i], binders, os);
      }
      os << "]";
      break;
    }
    case TermKind::SetLit: {
      os << "{";
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ", ";
        show(t->args[i], binders, os);
      }
      os << "}";
      break;
    }
    case TermKind::Let: {
      std::string nm = t->binder_name.empty() ? "v" + std::to_string(binders.size()) : t->binder_name;
      os << "(let " << nm << " = ";
      show(t->args[0], binders, os);
      os << " in ";
      binders.push_back(nm);
      show(t->args[1], binders, os);
      binders.pop_back();
      os << ")";
      break;
    }
    case TermKind::If: {
      os << "(if ";
      show(t->args[0], binders, os);
      os << " then ";
      show(t->args[1], binders, os);
      os << " else ";
      show(t->args[2], binders, os);
      os << ")";
      break;
    }
    case TermKind::Con: {
      static const std::map<std::string, std::string> infix = {
          {"and", " && "}, {"or", " || "},  {"imp", " ==> "}, {"eq", " = "},
          {"le", " <= "},  {"lt", " < "},   {"add", " + "},   {"sub", " - "},
          {"mul", " * "},  {"mem", " in "}, {"subset", " <= "}, {"append", " ++ "}};
      auto it = infix.find(t->name);
      if (it != infix.end() && t->args.size() == 2) {
        os << "(";
        show(t->args[0], binders, os);
        os << it->second;
        show(t->args[1], binders, os);
        os << ")";
      } else if ((t->name == "forall" || t->name == "exists") && t->args.size() == 1 &&
                 t->args[0]->kind == TermKind::Lam) {
        const Term& l = t->args[0];
        std::string nm = l->binder_name.empty() ? "v" + std::to_string(binders.size()) : l->binder_name;
        os << "(" << (t->name == "forall" ? "ALL " : "EX ") << nm << ":" << show_sort(l->binder_sort)
           << ". ";
        binders.push_back(nm);
        show(l->args[0], binders, os);
        binders.pop_back();
        os << ")";
      } else if (t->name == "ivl" && t->args.size() == 2) {
        os << "[";
        show(t->args[0], binders, os);
        os << ", ";
        show(t->args[1], binders, os);
        os << ")";
      } else if (t->args.empty()) {
        os << t->name;
      } else {
        args_list(t->name.c_str());
      }
      break;
    }
  }
}

}  // namespace

std::string show_term(const Term& t) {
  std::ostringstream os;
  std::vector<std::string> binders;
  show(t, binders, os);
  return os.str();
}

}  // namespace slr
