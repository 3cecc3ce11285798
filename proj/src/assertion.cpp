#include "slr/assertion.hpp"

#include <atomic>
#include <sstream>

#include "slr/simplify.hpp"

namespace slr {

namespace {
std::shared_ptr<PredNode> pnode(PredKind k) { return std::make_shared<PredNode>(k); }
std::shared_ptr<ANode> anode(AKind k) { return std::make_shared<ANode>(k); }

std::string fresh_name(const std::string& base) {
  static std::atomic<int> ctr{0};
  return base + "#" + std::to_string(ctr++);
}
}  // namespace

Pred pred_atom(const std::string& name, const Sort& abst) {
  auto p = pnode(PredKind::Atom);
  p->name = name;
  p->abst = abst;
  return p;
}

Pred pred_evar(int id, const Sort& abst) {
  auto p = pnode(PredKind::Evar);
  p->evar_id = id;
  p->abst = abst;
  return p;
}

Pred pred_op(const std::string& op, std::vector<Term> scalars, std::vector<Pred> args,
             const Sort& abst) {
  auto p = pnode(PredKind::OpApp);
  p->name = op;
  p->scalars = std::move(scalars);
  p->preds = std::move(args);
  p->abst = abst;
  return p;
}

Pred pred_star(const Pred& a, const Pred& b) {
  auto p = pnode(PredKind::Star);
  p->preds = {a, b};
  p->abst = pair_sort(a->abst, b->abst);
  return p;
}

Pred pred_sum(const Pred& a, const Pred& b) {
  auto p = pnode(PredKind::Sum);
  p->preds = {a, b};
  p->abst = sum_sort(a->abst, b->abst);
  return p;
}

Pred pred_emp() {
  static Pred p = [] {
    auto q = pnode(PredKind::Emp);
    q->abst = unit_sort();
    return Pred(q);
  }();
  return p;
}

Pred pred_id(const Sort& world) {
  auto p = pnode(PredKind::Id);
  p->abst = world;
  return p;
}

Pred pred_defined(const std::string& display, const std::string& binder, const Sort& abst,
                  const Assertion& body) {
  auto p = pnode(PredKind::Defined);
  p->name = display;
  p->binder = binder;
  p->abst = abst;
  p->body = body;
  return p;
}

// --- assertions ---------------------------------------------------------------

Assertion a_top() { static Assertion a = anode(AKind::Top); return a; }
Assertion a_bot() { static Assertion a = anode(AKind::Bot); return a; }
Assertion a_emp() { static Assertion a = anode(AKind::Emp); return a; }

Assertion a_pred(const Pred& p, const Term& arg) {
  if (!sort_eq(p->abst, arg->sort))
    throw SortError("predicate application: argument sort " + show_sort(arg->sort) +
                    " does not match abstraction sort " + show_sort(p->abst) + " of " +
                    show_pred(p));
  auto a = anode(AKind::PredApp);
  a->pred = p;
  a->term = arg;
  return a;
}

namespace {
Assertion binop(AKind k, const Assertion& a, const Assertion& b) {
  auto n = anode(k);
  n->kids = {a, b};
  return n;
}
}  // namespace

Assertion a_not(const Assertion& a) {
  auto n = anode(AKind::Not);
  n->kids = {a};
  return n;
}
Assertion a_star(const Assertion& a, const Assertion& b) { return binop(AKind::Star, a, b); }
Assertion a_and(const Assertion& a, const Assertion& b) { return binop(AKind::And, a, b); }
Assertion a_or(const Assertion& a, const Assertion& b) { return binop(AKind::Or, a, b); }
Assertion a_wand(const Assertion& a, const Assertion& b) { return binop(AKind::Wand, a, b); }
Assertion a_implies(const Assertion& a, const Assertion& b) { return binop(AKind::Implies, a, b); }

Assertion a_exists(const std::string& var, const Sort& s, const Assertion& body) {
  auto n = anode(AKind::Exists);
  n->binder = var;
  n->binder_sort = s;
  n->kids = {body};
  return n;
}

Assertion a_forall(const std::string& var, const Sort& s, const Assertion& body) {
  auto n = anode(AKind::Forall);
  n->binder = var;
  n->binder_sort = s;
  n->kids = {body};
  return n;
}

Assertion a_satisfies(const Term& t, const Assertion& body) {
  auto n = anode(AKind::Satisfies);
  n->term = t;
  n->kids = {body};
  return n;
}

Assertion a_pure(const Term& t) {
  if (!sort_eq(t->sort, bool_sort())) throw SortError("pure assertion needs a bool term");
  auto n = anode(AKind::Pure);
  n->term = t;
  return n;
}

// --- equality / printing ---------------------------------------------------------

int pred_cmp(const Pred& a, const Pred& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
  if (a->evar_id != b->evar_id) return a->evar_id < b->evar_id ? -1 : 1;
  if (a->scalars.size() != b->scalars.size())
    return a->scalars.size() < b->scalars.size() ? -1 : 1;
  for (size_t i = 0; i < a->scalars.size(); ++i)
    if (int c = term_cmp(a->scalars[i], b->scalars[i])) return c;
  if (a->preds.size() != b->preds.size()) return a->preds.size() < b->preds.size() ? -1 : 1;
  for (size_t i = 0; i < a->preds.size(); ++i)
    if (int c = pred_cmp(a->preds[i], b->preds[i])) return c;
  if (a->kind == PredKind::Defined) {
    // compare bodies up to the binder name
    bool e = aeq(a->body, b->body) ||
             aeq(asubst(a->body, a->binder, mk_fvar("#cmp", a->abst)),
                 asubst(b->body, b->binder, mk_fvar("#cmp", b->abst)));
    if (!e) return a.get() < b.get() ? -1 : 1;
  }
  return 0;
}

bool pred_eq(const Pred& a, const Pred& b) { return pred_cmp(a, b) == 0; }

std::string show_pred(const Pred& p) {
  std::ostringstream os;
  switch (p->kind) {
    case PredKind::Atom: os << p->name; break;
    case PredKind::Evar: os << "?P" << p->evar_id; break;
    case PredKind::OpApp: {
      os << p->name;
      if (!p->scalars.empty()) {
        os << "[";
        for (size_t i = 0; i < p->scalars.size(); ++i) {
          if (i) os << ", ";
          os << show_term(p->scalars[i]);
        }
        os << "]";
      }
      if (!p->preds.empty()) {
        os << "(";
        for (size_t i = 0; i < p->preds.size(); ++i) {
          if (i) os << ", ";
          os << show_pred(p->preds[i]);
        }
        os << ")";
      }
      break;
    }
    case PredKind::Star:
      os << "(" << show_pred(p->preds[0]) << " ** " << show_pred(p->preds[1]) << ")";
      break;
    case PredKind::Sum:
      os << "(" << show_pred(p->preds[0]) << " + " << show_pred(p->preds[1]) << ")";
      break;
    case PredKind::Emp: os << "Emp"; break;
    case PredKind::Id: os << "Id"; break;
    case PredKind::Defined:
      os << (p->name.empty() ? "<defined>" : p->name);
      break;
  }
  return os.str();
}

namespace {
bool aeq_rec(const Assertion& a, const Assertion& b,
             std::vector<std::pair<std::string, std::string>>& ren) {
  if (a->kind != b->kind) return false;
  auto term_matches = [&](const Term& x, const Term& y) {
    Term xr = x, yr = y;
    for (auto& [na, nb] : ren) {
      if (na != nb) xr = subst_fvar(xr, na, mk_fvar(nb, y->sort.get() ? y->sort : x->sort));
      (void)nb;
    }
    // simpler: rename a-side binders into b-side names
    return term_eq(xr, yr);
  };
  (void)term_matches;
  switch (a->kind) {
    case AKind::Top:
    case AKind::Bot:
    case AKind::Emp:
      return true;
    case AKind::PredApp: {
      if (!pred_eq(a->pred, b->pred)) return false;
      Term ta = a->term;
      for (auto& [na, nb] : ren)
        if (na != nb) ta = subst_fvar(ta, na, mk_fvar(nb, b->term->sort));
      return term_eq(ta, b->term);
    }
    case AKind::Pure:
    case AKind::Satisfies: {
      Term ta = a->term;
      for (auto& [na, nb] : ren)
        if (na != nb) ta = subst_fvar(ta, na, mk_fvar(nb, b->term->sort));
      if (!term_eq(ta, b->term)) return false;
      if (a->kind == AKind::Pure) return true;
      return aeq_rec(a->kids[0], b->kids[0], ren);
    }
    case AKind::Exists:
    case AKind::Forall: {
      if (!sort_eq(a->binder_sort, b->binder_sort)) return false;
      ren.emplace_back(a->binder, b->binder);
      bool r = aeq_rec(a->kids[0], b->kids[0], ren);
      ren.pop_back();
      return r;
    }
    default: {
      if (a->kids.size() != b->kids.size()) return false;
      for (size_t i = 0; i < a->kids.size(); ++i)
        if (!aeq_rec(a->kids[i], b->kids[i], ren)) return false;
      return true;
    }
  }
}
}  // namespace

bool aeq(const Assertion& a, const Assertion& b) {
  if (a.get() == b.get()) return true;
  std::vector<std::pair<std::string, std::string>> ren;
  return aeq_rec(a, b, ren);
}

std::string show_assertion(const Assertion& a) {
  std::ostringstream os;
  switch (a->kind) {
    case AKind::Top: os << "TOP"; break;
    case AKind::Bot: os << "BOT"; break;
    case AKind::Emp: os << "emp"; break;
    case AKind::PredApp:
      os << show_term(a->term) << " :: " << show_pred(a->pred);
      break;
    case AKind::Not: os << "!(" << show_assertion(a->kids[0]) << ")"; break;
    case AKind::Star:
      os << "(" << show_assertion(a->kids[0]) << " ** " << show_assertion(a->kids[1]) << ")";
      break;
    case AKind::And:
      os << "(" << show_assertion(a->kids[0]) << " /\\ " << show_assertion(a->kids[1]) << ")";
      break;
    case AKind::Or:
      os << "(" << show_assertion(a->kids[0]) << " \\/ " << show_assertion(a->kids[1]) << ")";
      break;
    case AKind::Wand:
      os << "(" << show_assertion(a->kids[0]) << " -* " << show_assertion(a->kids[1]) << ")";
      break;
    case AKind::Implies:
      os << "(" << show_assertion(a->kids[0]) << " -> " << show_assertion(a->kids[1]) << ")";
      break;
    case AKind::Exists:
      os << "(EX " << a->binder << ":" << show_sort(a->binder_sort) << ". "
         << show_assertion(a->kids[0]) << ")";
      break;
    case AKind::Forall:
      os << "(ALL " << a->binder << ":" << show_sort(a->binder_sort) << ". "
         << show_assertion(a->kids[0]) << ")";
      break;
    case AKind::Satisfies:
      os << "(" << show_term(a->term) << " |= " << show_assertion(a->kids[0]) << ")";
      break;
    case AKind::Pure: os << "pure(" << show_term(a->term) << ")"; break;
  }
  return os.str();
}

// --- substitution / traversal -----------------------------------------------------

Assertion amap_terms(const Assertion& a, const std::function<Term(const Term&)>& f) {
  auto n = std::make_shared<ANode>(*a);
  if (a->term) n->term = f(a->term);
  if (a->pred) {
    if (!a->pred->scalars.empty() || a->pred->kind == PredKind::Defined) {
      // rebuild predicate with mapped scalar parameters (and defined bodies)
      std::function<Pred(const Pred&)> pf = [&](const Pred& p) -> Pred {
        auto q = std::make_shared<PredNode>(*p);
        for (auto& s : q->scalars) s = f(s);
        for (auto& sub : q->preds) sub = pf(sub);
        if (p->kind == PredKind::Defined && p->body) q->body = amap_terms(p->body, f);
        return q;
      };
      n->pred = pf(a->pred);
    }
  }
  for (auto& k : n->kids) k = amap_terms(k, f);
  return n;
}

Assertion asubst(const Assertion& a, const std::string& var, const Term& t) {
  switch (a->kind) {
    case AKind::Exists:
    case AKind::Forall: {
      if (a->binder == var) return a;
      std::set<std::string> fv;
      collect_fvars(t, fv);
      Assertion body = a->kids[0];
      std::string binder = a->binder;
      if (fv.count(binder)) {
        std::string nb = fresh_name(binder);
        body = asubst(body, binder, mk_fvar(nb, a->binder_sort));
        binder = nb;
      }
      auto n = std::make_shared<ANode>(*a);
      n->binder = binder;
      n->kids = {asubst(body, var, t)};
      return n;
    }
    default:
      return amap_terms(a, [&](const Term& x) { return subst_fvar(x, var, t); });
  }
}

Assertion asubst_evars(const Assertion& a, const std::map<int, Term>& tenv,
                       const std::map<int, Pred>& penv) {
  std::function<Pred(const Pred&)> pf = [&](const Pred& p) -> Pred {
    if (p->kind == PredKind::Evar) {
      auto it = penv.find(p->evar_id);
      if (it != penv.end()) return pf(it->second);
      return p;
    }
    auto q = std::make_shared<PredNode>(*p);
    for (auto& s : q->scalars) s = subst_evars(s, tenv);
    for (auto& sub : q->preds) sub = pf(sub);
    if (p->kind == PredKind::Defined && p->body) q->body = asubst_evars(p->body, tenv, penv);
    return q;
  };
  std::function<Assertion(const Assertion&)> af = [&](const Assertion& x) -> Assertion {
    auto n = std::make_shared<ANode>(*x);
    if (x->term) n->term = subst_evars(x->term, tenv);
    if (x->pred) n->pred = pf(x->pred);
    for (auto& k : n->kids) k = af(k);
    return n;
  };
  return af(a);
}

void a_collect_fvars(const Assertion& a, std::set<std::string>& out) {
  std::set<std::string> raw;
  std::function<void(const Assertion&, std::set<std::string>&)> go =
      [&](const Assertion& x, std::set<std::string>& bound) {
        if (x->term) {
          std::set<std::string> fv;
          collect_fvars(x->term, fv);
          for (auto& v : fv)
            if (!bound.count(v)) raw.insert(v);
        }
        if (x->pred) {
          std::function<void(const Pred&)> pf = [&](const Pred& p) {
            for (auto& s : p->scalars) {
              std::set<std::string> fv;
              collect_fvars(s, fv);
              for (auto& v : fv)
                if (!bound.count(v)) raw.insert(v);
            }
            for (auto& sub : p->preds) pf(sub);
          };
          pf(x->pred);
        }
        if (x->kind == AKind::Exists || x->kind == AKind::Forall) {
          bool fresh = bound.insert(x->binder).second;
          go(x->kids[0], bound);
          if (fresh) bound.erase(x->binder);
          return;
        }
        for (auto& k : x->kids) go(k, bound);
      };
  std::set<std::string> bound;
  go(a, bound);
  out.insert(raw.begin(), raw.end());
}

void pred_collect_evars(const Pred& p, std::set<int>& tev, std::set<int>& pev) {
  if (p->kind == PredKind::Evar) pev.insert(p->evar_id);
  for (auto& s : p->scalars) collect_evars(s, tev);
  for (auto& sub : p->preds) pred_collect_evars(sub, tev, pev);
  if (p->kind == PredKind::Defined && p->body) a_collect_evars(p->body, tev, pev);
}

void a_collect_evars(const Assertion& a, std::set<int>& tev, std::set<int>& pev) {
  if (a->term) collect_evars(a->term, tev);
  if (a->pred) pred_collect_evars(a->pred, tev, pev);
  for (auto& k : a->kids) a_collect_evars(k, tev, pev);
}

Pred pred_subst_fvar(const Pred& p, const std::string& var, const Term& t) {
  auto q = std::make_shared<PredNode>(*p);
  for (auto& s : q->scalars) s = subst_fvar(s, var, t);
  for (auto& sub : q->preds) sub = pred_subst_fvar(sub, var, t);
  if (p->kind == PredKind::Defined && p->body && p->binder != var)
    q->body = asubst(p->body, var, t);
  return q;
}

Pred pred_subst_evars(const Pred& p, const std::map<int, Term>& tenv,
                      const std::map<int, Pred>& penv) {
  if (p->kind == PredKind::Evar) {
    auto it = penv.find(p->evar_id);
    if (it != penv.end()) return pred_subst_evars(it->second, tenv, penv);
    return p;
  }
  auto q = std::make_shared<PredNode>(*p);
  for (auto& s : q->scalars) s = subst_evars(s, tenv);
  for (auto& sub : q->preds) sub = pred_subst_evars(sub, tenv, penv);
  if (p->kind == PredKind::Defined && p->body) q->body = asubst_evars(p->body, tenv, penv);
  return q;
}

// --- simplification ---------------------------------------------------------------

Assertion assertion_simplify(const Assertion& a) {
  switch (a->kind) {
    case AKind::PredApp: {
      Term t = simplify(a->term);
      if (a->pred->kind == PredKind::Emp) {
        if (t->kind == TermKind::LitUnit) return a_emp();
        return a_and(a_emp(), a_pure(simplify(mk_eq(t, mk_unit()))));
      }
      std::function<Pred(const Pred&)> pf = [&](const Pred& p) -> Pred {
        if (p->scalars.empty() && p->preds.empty()) return p;
        auto q = std::make_shared<PredNode>(*p);
        for (auto& sc : q->scalars) sc = simplify(sc);
        for (auto& sub : q->preds) sub = pf(sub);
        return q;
      };
      Pred sp = pf(a->pred);
      if (t.get() == a->term.get() && sp.get() == a->pred.get()) return a;
      return a_pred(sp, t);
    }
    case AKind::Star: {
      Assertion l = assertion_simplify(a->kids[0]);
      Assertion r = assertion_simplify(a->kids[1]);
      if (l->kind == AKind::Emp) return r;
      if (r->kind == AKind::Emp) return l;
      if (l->kind == AKind::Bot || r->kind == AKind::Bot) return a_bot();
      return a_star(l, r);
    }
    case AKind::And: {
      Assertion l = assertion_simplify(a->kids[0]);
      Assertion r = assertion_simplify(a->kids[1]);
      if (r->kind == AKind::Pure) {
        Term p = simplify(r->term);
        if (is_true(p)) return l;
        if (is_false(p)) return a_bot();
        r = a_pure(p);
      }
      if (l->kind == AKind::Pure) {
        Term p = simplify(l->term);
        if (is_true(p)) return r;
        if (is_false(p)) return a_bot();
        l = a_pure(p);
      }
      if (l->kind == AKind::Top) return r;
      if (r->kind == AKind::Top) return l;
      return a_and(l, r);
    }
    case AKind::Pure: {
      Term p = simplify(a->term);
      if (p.get() == a->term.get()) return a;
      return a_pure(p);
    }
    case AKind::Exists:
    case AKind::Forall: {
      Assertion body = assertion_simplify(a->kids[0]);
      std::set<std::string> fv;
      a_collect_fvars(body, fv);
      if (!fv.count(a->binder)) return body;  // unused binder
      auto n = std::make_shared<ANode>(*a);
      n->kids = {body};
      return n;
    }
    default: {
      if (a->kids.empty() && !a->term) return a;
      auto n = std::make_shared<ANode>(*a);
      if (n->term) n->term = simplify(n->term);
      for (auto& k : n->kids) k = assertion_simplify(k);
      return n;
    }
  }
}

// --- fragments ----------------------------------------------------------------------

namespace {

bool in_S(const Assertion& a) {
  switch (a->kind) {
    case AKind::PredApp:
    case AKind::Top:
    case AKind::Bot:
    case AKind::Emp:
    case AKind::Pure:  // read as TOP /\ P
      return true;
    case AKind::Star:
      return in_S(a->kids[0]) && in_S(a->kids[1]);
    case AKind::And:
      return in_S(a->kids[0]) && a->kids[1]->kind == AKind::Pure;
    case AKind::Exists:
      return in_S(a->kids[0]);
    default:
      return false;
  }
}

bool in_G(const Assertion& a) {
  if (in_S(a)) return true;
  switch (a->kind) {
    case AKind::Star:
      return in_S(a->kids[0]) && in_G(a->kids[1]);
    case AKind::Wand:
      return in_S(a->kids[0]) && in_G(a->kids[1]);
    case AKind::Implies:
      return a->kids[0]->kind == AKind::Pure && in_G(a->kids[1]);
    case AKind::And:
    case AKind::Or:
      return in_G(a->kids[0]) && in_G(a->kids[1]);
    case AKind::Forall:
    case AKind::Exists:
      return in_G(a->kids[0]);
    default:
      return false;
  }
}

bool in_E(const Assertion& a) {
  return a->kind == AKind::Implies && in_S(a->kids[0]) && in_G(a->kids[1]);
}

}  // namespace

FragmentClass classify(const Assertion& a) {
  if (in_S(a)) return FragmentClass::StateS;
  if (in_G(a)) return FragmentClass::GoalG;
  if (in_E(a)) return FragmentClass::EntailE;
  return FragmentClass::Outside;
}

// independent formulation: computes the set of grammars that produce the node
FragmentClass classify_reference(const Assertion& a) {
  struct R {
    bool s, g, e;
  };
  std::function<R(const Assertion&)> go = [&](const Assertion& x) -> R {
    R r{false, false, false};
    switch (x->kind) {
      case AKind::PredApp:
      case AKind::Top:
      case AKind::Bot:
      case AKind::Emp:
      case AKind::Pure:
        r.s = true;
        break;
      case AKind::Star: {
        R l = go(x->kids[0]), rr = go(x->kids[1]);
        r.s = l.s && rr.s;
        r.g = l.s && (rr.g || rr.s);
        break;
      }
      case AKind::And: {
        R l = go(x->kids[0]), rr = go(x->kids[1]);
        r.s = l.s && x->kids[1]->kind == AKind::Pure;
        r.g = (l.g || l.s) && (rr.g || rr.s);
        break;
      }
      case AKind::Or: {
        R l = go(x->kids[0]), rr = go(x->kids[1]);
        r.g = (l.g || l.s) && (rr.g || rr.s);
        break;
      }
      case AKind::Wand: {
        R l = go(x->kids[0]), rr = go(x->kids[1]);
        r.g = l.s && (rr.g || rr.s);
        break;
      }
      case AKind::Implies: {
        R l = go(x->kids[0]), rr = go(x->kids[1]);
        r.g = x->kids[0]->kind == AKind::Pure && (rr.g || rr.s);
        r.e = l.s && (rr.g || rr.s);
        break;
      }
      case AKind::Exists: {
        R b = go(x->kids[0]);
        r.s = b.s;
        r.g = b.g || b.s;
        break;
      }
      case AKind::Forall: {
        R b = go(x->kids[0]);
        r.g = b.g || b.s;
        break;
      }
      default:
        break;
    }
    return r;
  };
  R r = go(a);
  if (r.s) return FragmentClass::StateS;
  if (r.g) return FragmentClass::GoalG;
  if (r.e) return FragmentClass::EntailE;
  return FragmentClass::Outside;
}

Assertion hoist_exists(const Assertion& a) {
  // peel binders, hoist inside children, re-wrap
  switch (a->kind) {
    case AKind::Exists: {
      Assertion body = hoist_exists(a->kids[0]);
      auto n = std::make_shared<ANode>(*a);
      n->kids = {body};
      return n;
    }
    case AKind::Star:
    case AKind::And: {
      Assertion l = hoist_exists(a->kids[0]);
      Assertion r = hoist_exists(a->kids[1]);
      std::vector<std::tuple<std::string, Sort>> binders;
      std::set<std::string> used;
      a_collect_fvars(l, used);
      a_collect_fvars(r, used);
      auto peel = [&](Assertion x, const Assertion& other) {
        while (x->kind == AKind::Exists) {
          std::string b = x->binder;
          Assertion body = x->kids[0];
          std::set<std::string> fv_other;
          a_collect_fvars(other, fv_other);
          if (fv_other.count(b) || used.count(b)) {
            std::string nb = fresh_name(b);
            body = asubst(body, b, mk_fvar(nb, x->binder_sort));
            b = nb;
          }
          used.insert(b);
          binders.emplace_back(b, x->binder_sort);
          x = body;
        }
        return x;
      };
      Assertion lb = peel(l, r);
      Assertion rb = peel(r, lb);
      Assertion out = binop(a->kind, lb, rb);
      for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        out = a_exists(std::get<0>(*it), std::get<1>(*it), out);
      return out;
    }
    default:
      return a;
  }
}

std::pair<Term, Pred> as_pred_app(const Assertion& a0) {
  Assertion a = assertion_simplify(a0);
  if (classify(a) != FragmentClass::StateS)
    throw FragmentError("as_pred_app: not an S-assertion: " + show_assertion(a));
  switch (a->kind) {
    case AKind::PredApp:
      return {a->term, a->pred};
    case AKind::Emp:
      return {mk_unit(), pred_emp()};
    case AKind::Star: {
      auto [x, T] = as_pred_app(a->kids[0]);
      auto [y, U] = as_pred_app(a->kids[1]);
      return {mk_pair(x, y), pred_star(T, U)};
    }
    case AKind::And: {
      // S /\ P: wrap with the pure conjunct retained
      auto [x, T] = as_pred_app(a->kids[0]);
      std::string b = fresh_name("v");
      Assertion body = a_and(a_pred(T, mk_fvar(b, T->abst)), a->kids[1]);
      return {x, pred_defined("", b, T->abst, body)};
    }
    case AKind::Top: {
      std::string b = fresh_name("v");
      return {mk_unit(), pred_defined("TopP", b, unit_sort(), a_top())};
    }
    case AKind::Bot: {
      std::string b = fresh_name("v");
      return {mk_unit(), pred_defined("BotP", b, unit_sort(), a_bot())};
    }
    case AKind::Pure: {
      std::string b = fresh_name("v");
      return {mk_unit(), pred_defined("", b, unit_sort(), a)};
    }
    case AKind::Exists:
      throw FragmentError("as_pred_app: existential not hoisted/eliminated");
    default:
      throw FragmentError("as_pred_app: unsupported shape");
  }
}

}  // namespace slr
