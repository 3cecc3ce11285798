#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slr/sort.hpp"

namespace slr {

// Sorted symbolic terms. Bound variables are de Bruijn indices, free
// variables are named, so alpha-equivalent terms are structurally equal and
// substitution cannot capture. Every node carries its sort; constructors
// check sorts eagerly so malformed terms are unrepresentable.
enum class TermKind {
  BVar,     // de Bruijn index into enclosing binders (Lam/Let/quantifier)
  FVar,     // named free variable; `rigid` marks fixed (skolem) constants
  Evar,     // numbered unification hole
  LitBool,
  LitInt,
  LitRat,
  LitUnit,
  LitSym,   // symbolic constant (field names, block tags)
  Con,      // builtin/constructor symbol applied to args
  Lam,
  App,
  TupleT,
  Proj,     // 0-based projection out of a tuple
  ListLit,
  SetLit,   // canonically sorted, deduplicated
  Let,
  If
};

class TermNode;
using Term = std::shared_ptr<const TermNode>;

struct SortError : std::runtime_error {
  explicit SortError(const std::string& m) : std::runtime_error(m) {}
};

class TermNode {
public:
  TermKind kind;
  Sort sort;
  int idx = 0;                 // BVar index / Proj index / Evar id
  std::string name;            // FVar name / Con symbol / LitSym
  bool rigid = false;          // FVar: fixed constant (cannot be unified away)
  bool bval = false;           // LitBool
  long long ival = 0;          // LitInt
  long long num = 0, den = 1;  // LitRat (normalized, den > 0)
  std::vector<Term> args;      // children; Lam/Let bodies are args.back()
  Sort binder_sort;            // Lam/Let
  std::string binder_name;     // printing hint only

  TermNode(TermKind k, Sort s) : kind(k), sort(std::move(s)) {}
};

// --- constructors -----------------------------------------------------------

Term mk_bvar(int idx, const Sort& s);
Term mk_fvar(const std::string& name, const Sort& s, bool rigid = false);
Term mk_evar(int id, const Sort& s);
Term mk_bool(bool b);
Term mk_int(long long v);
Term mk_rat(long long num, long long den);
Term mk_unit();
Term mk_sym(const std::string& s);
Term mk_con(const std::string& symbol, std::vector<Term> args, const Sort& result);
Term mk_lam(const std::string& hint, const Sort& binder, const Term& body);
Term mk_app(const Term& f, const Term& arg);
Term mk_app2(const Term& f, const Term& a, const Term& b);  // f(a)(b) or f((a,b)) per f's sort
Term mk_tuple(std::vector<Term> comps);
Term mk_pair(const Term& a, const Term& b);
Term mk_proj(int i, const Term& t);
Term mk_list(std::vector<Term> elems, const Sort& elem_sort);
Term mk_setlit(std::vector<Term> elems, const Sort& elem_sort);
Term mk_let(const std::string& hint, const Term& bound, const Term& body);
Term mk_if(const Term& c, const Term& t, const Term& e);
Term mk_undef(const Sort& s);  // Con "undef": evaluation is undefined

// bool connectives
Term mk_and(const Term& a, const Term& b);
Term mk_or(const Term& a, const Term& b);
Term mk_not(const Term& a);
Term mk_imp(const Term& a, const Term& b);
Term mk_eq(const Term& a, const Term& b);
Term mk_le(const Term& a, const Term& b);
Term mk_lt(const Term& a, const Term& b);
Term mk_forall(const std::string& hint, const Sort& s, const Term& body_lam_body);
Term mk_exists(const std::string& hint, const Sort& s, const Term& body_lam_body);

// arithmetic (int or rat, from arg sorts)
Term mk_add(const Term& a, const Term& b);
Term mk_sub(const Term& a, const Term& b);
Term mk_mul(const Term& a, const Term& b);

// containers
Term mk_mem(const Term& x, const Term& s);
Term mk_subset(const Term& a, const Term& b);
Term mk_union(const Term& a, const Term& b);
Term mk_setminus(const Term& a, const Term& b);
Term mk_inter(const Term& a, const Term& b);
Term mk_map(const Term& f, const Term& l);
Term mk_setof(const Term& l);          // list -> set of its elements
Term mk_zip(const Term& a, const Term& b);
Term mk_unzip(const Term& l);
Term mk_append(const Term& a, const Term& b);
Term mk_len(const Term& l);
Term mk_lslice(const Term& l, const Term& i, const Term& j);  // l[i:j], clamped
Term mk_idx(const Term& l, const Term& i);
Term mk_replicate(const Term& x, const Term& n);
Term mk_cons(const Term& x, const Term& l);
Term mk_image(const Term& f, const Term& d);   // image of set under f
Term mk_bindset(const Term& d, const Term& f); // monadic bind: union of f over d
Term mk_singleton(const Term& x);
Term mk_the_elem(const Term& s);               // element of a singleton set
Term mk_mapget(const Term& m, const Term& k);  // finite map as set of pairs
Term mk_maprestrict(const Term& m, const Term& ks);

// sums
Term mk_inj1(const Term& a, const Sort& sum);
Term mk_inj2(const Term& b, const Sort& sum);
Term mk_sumcase(const Term& s, const Term& f1, const Term& f2);
Term mk_preimage_inj1(const Term& d);
Term mk_preimage_inj2(const Term& d);

// partiality probes
Term mk_in_dom(const Term& x, const Term& f);
Term mk_subset_dom(const Term& d, const Term& f);

// scalar helpers
Term mk_ivl(const Term& lo, const Term& hi);  // interval [lo, hi)
Term ivl_lo(const Term& ivl);
Term ivl_hi(const Term& ivl);

// --- structure --------------------------------------------------------------

bool term_eq(const Term& a, const Term& b);    // structural, alpha via de Bruijn
int term_cmp(const Term& a, const Term& b);
struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return term_cmp(a, b) < 0; }
};

// instantiate BVar(0) of a binder body with `u` (shifting deeper indices down)
Term open_term(const Term& body, const Term& u);
// abstract free variable `name` as BVar(0), for building binders
Term close_term(const Term& t, const std::string& name);
// convenience: lambda binding the free variable `name` in `body`
Term lam_of(const std::string& name, const Sort& s, const Term& body);
Term forall_of(const std::string& name, const Sort& s, const Term& body);
Term exists_of(const std::string& name, const Sort& s, const Term& body);

Term subst_fvar(const Term& t, const std::string& name, const Term& replacement);
Term subst_evar(const Term& t, int id, const Term& replacement);
Term subst_evars(const Term& t, const std::map<int, Term>& env);

void collect_fvars(const Term& t, std::set<std::string>& out);
void collect_evars(const Term& t, std::set<int>& out);
bool has_evar(const Term& t);
bool locally_closed(const Term& t);
bool contains_subterm(const Term& t, const Term& needle);

std::string show_term(const Term& t);

}  // namespace slr
