#include "slr/force.hpp"

namespace slr {

EvalEnv ForceCtx::eenv() const {
  EvalEnv e;
  e.universes = &m;
  e.fvars = &fvars;
  e.evars = &evars;
  return e;
}

Value ForceCtx::eval(const Term& t) {
  auto v = eval_term(t, eenv());
  if (!v) throw ForceError("term undefined under forcing: " + show_term(t));
  return *v;
}

bool ForceCtx::force(const Value& w, const Assertion& a) {
  if (++depth > 3000) throw ForceError("forcing recursion limit");
  struct Dec {
    int& d;
    ~Dec() { --d; }
  } dec{depth};
  switch (a->kind) {
    case AKind::Top: return true;
    case AKind::Bot: return false;
    case AKind::Emp: return value_eq(w, m.unit);
    case AKind::Pure: {
      auto v = eval_term(a->term, eenv());
      if (!v || v->k != VKind::Bool) throw ForceError("pure formula undefined");
      return v->b;
    }
    case AKind::PredApp: {
      Value x = eval(a->term);
      return force_pred(w, a->pred, x);
    }
    case AKind::Not: return !force(w, a->kids[0]);
    case AKind::And: return force(w, a->kids[0]) && force(w, a->kids[1]);
    case AKind::Or: return force(w, a->kids[0]) || force(w, a->kids[1]);
    case AKind::Implies: return !force(w, a->kids[0]) || force(w, a->kids[1]);
    case AKind::Star: {
      for (auto& [w1, w2] : m.splits(w))
        if (force(w1, a->kids[0]) && force(w2, a->kids[1])) return true;
      return false;
    }
    case AKind::Wand: {
      for (auto& w1 : m.carrier) {
        auto c = m.star(w1, w);
        if (!c) continue;
        if (force(w1, a->kids[0]) && !force(*c, a->kids[1])) return false;
      }
      return true;
    }
    case AKind::Exists:
    case AKind::Forall: {
      std::vector<Value> dom = m.universe(a->binder_sort);
      bool had = fvars.count(a->binder);
      Value saved = had ? fvars[a->binder] : Value{};
      bool result = a->kind == AKind::Forall;
      for (auto& v : dom) {
        fvars[a->binder] = v;
        bool r = force(w, a->kids[0]);
        if (a->kind == AKind::Exists && r) { result = true; break; }
        if (a->kind == AKind::Forall && !r) { result = false; break; }
      }
      if (had) fvars[a->binder] = saved;
      else fvars.erase(a->binder);
      return result;
    }
    case AKind::Satisfies: {
      Value t = eval(a->term);
      return force(t, a->kids[0]);
    }
  }
  throw ForceError("unreachable");
}

bool ForceCtx::force_pred(const Value& w, const Pred& p, const Value& x) {
  switch (p->kind) {
    case PredKind::Evar: throw ForceError("cannot force an uninstantiated predicate evar");
    case PredKind::Emp: return value_eq(w, m.unit) && x.k == VKind::Unit;
    case PredKind::Id: return value_eq(w, x);
    case PredKind::Star: {
      if (x.k != VKind::Tuple || x.elems.size() != 2)
        throw ForceError("star predicate expects a pair abstraction");
      for (auto& [w1, w2] : m.splits(w))
        if (force_pred(w1, p->preds[0], x.elems[0]) && force_pred(w2, p->preds[1], x.elems[1]))
          return true;
      return false;
    }
    case PredKind::Sum: {
      if (x.k != VKind::Tuple || x.elems.size() != 2 || x.elems[0].k != VKind::Sym)
        throw ForceError("sum predicate expects a tagged abstraction");
      if (x.elems[0].sym == "inj1") return force_pred(w, p->preds[0], x.elems[1]);
      return force_pred(w, p->preds[1], x.elems[1]);
    }
    case PredKind::Defined: {
      bool had = fvars.count(p->binder);
      Value saved = had ? fvars[p->binder] : Value{};
      fvars[p->binder] = x;
      bool r = force(w, p->body);
      if (had) fvars[p->binder] = saved;
      else fvars.erase(p->binder);
      return r;
    }
    case PredKind::Atom: {
      auto it = m.atom_interp.find(p->name);
      if (it != m.atom_interp.end()) {
        for (auto& [ax, aw] : it->second)
          if (value_eq(ax, x) && value_eq(aw, w)) return true;
        return false;
      }
      const PredicateDef* d = reg.find_pred(p->name);
      if (d) {
        if (d->native) {
          std::vector<Value> sc;
          return d->native(*this, sc, p->preds, x, w);
        }
        if (d->def) {
          Assertion body = d->def->body;
          bool had = fvars.count(d->def->binder);
          Value saved = had ? fvars[d->def->binder] : Value{};
          fvars[d->def->binder] = x;
          bool r = force(w, body);
          if (had) fvars[d->def->binder] = saved;
          else fvars.erase(d->def->binder);
          return r;
        }
      }
      throw ForceError("unknown predicate " + p->name);
    }
    case PredKind::OpApp: {
      const PredicateDef* d = reg.find_pred(p->name);
      if (!d) throw ForceError("unknown predicate operator " + p->name);
      if (d->native) {
        std::vector<Value> sc;
        sc.reserve(p->scalars.size());
        for (auto& s : p->scalars) sc.push_back(eval(s));
        return d->native(*this, sc, p->preds, x, w);
      }
      auto body = reg.unfold(p, value_term(x, p->abst));
      if (body) return force(w, *body);
      throw ForceError("operator " + p->name + " has no oracle semantics");
    }
  }
  throw ForceError("unreachable");
}

bool force(const FiniteModel& m, const Registry& reg, const Value& w, const Assertion& a,
           const std::map<std::string, Value>& extra_env) {
  ForceCtx ctx{m, reg};
  ctx.fvars = m.term_env;
  for (auto& [k, v] : extra_env) ctx.fvars[k] = v;
  return ctx.force(w, a);
}

bool valid(const FiniteModel& m, const Registry& reg, const Assertion& a,
           const std::map<std::string, Value>& extra_env) {
  ForceCtx ctx{m, reg};
  ctx.fvars = m.term_env;
  for (auto& [k, v] : extra_env) ctx.fvars[k] = v;
  for (auto& w : m.carrier)
    if (!ctx.force(w, a)) return false;
  return true;
}

}  // namespace slr
