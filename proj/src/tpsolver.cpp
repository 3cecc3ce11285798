#include "slr/tpsolver.hpp"

#include <atomic>

#include "slr/simplify.hpp"

namespace slr {

Term klam(const Sort& s, const std::function<Term(const Term&)>& body) {
  static std::atomic<int> ctr{0};
  std::string n = "$k" + std::to_string(ctr++);
  return lam_of(n, s, body(mk_fvar(n, s)));
}

Term klam2(const Sort& a, const Sort& b,
           const std::function<Term(const Term&, const Term&)>& body) {
  return klam(pair_sort(a, b),
              [&](const Term& p) { return body(mk_proj(0, p), mk_proj(1, p)); });
}

bool TpSolver::unify_terms(const Term& a0, const Term& b0) {
  Term a = simplify(evars.resolve(a0));
  Term b = simplify(evars.resolve(b0));
  if (term_eq(a, b)) return true;
  if (a->kind == TermKind::Evar) return evars.bind(a->idx, b);
  if (b->kind == TermKind::Evar) return evars.bind(b->idx, a);
  // structural descent keeps unification syntactic where possible
  if (a->kind == b->kind && a->kind == TermKind::Con && a->name == b->name &&
      a->args.size() == b->args.size()) {
    bool all = true;
    for (size_t i = 0; i < a->args.size(); ++i)
      if (!unify_terms(a->args[i], b->args[i])) { all = false; break; }
    if (all) return true;
  }
  if (a->kind == TermKind::TupleT && b->kind == TermKind::TupleT &&
      a->args.size() == b->args.size()) {
    bool all = true;
    for (size_t i = 0; i < a->args.size(); ++i)
      if (!unify_terms(a->args[i], b->args[i])) { all = false; break; }
    if (all) return true;
  }
  if (a->kind == TermKind::ListLit && b->kind == TermKind::ListLit &&
      a->args.size() == b->args.size()) {
    bool all = true;
    for (size_t i = 0; i < a->args.size(); ++i)
      if (!unify_terms(a->args[i], b->args[i])) { all = false; break; }
    if (all) return true;
  }
  if (has_evar(a) || has_evar(b)) return false;
  return prover.prove_eq(a, b);
}

bool TpSolver::unify_preds(const Pred& a0, const Pred& b0) {
  Pred a = evars.resolve_pred(a0);
  Pred b = evars.resolve_pred(b0);
  if (a->kind == PredKind::Evar) return evars.bind_pred(a->evar_id, b);
  if (b->kind == PredKind::Evar) return evars.bind_pred(b->evar_id, a);
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PredKind::Atom: return a->name == b->name;
    case PredKind::Emp: return true;
    case PredKind::Id: return sort_eq(a->abst, b->abst);
    case PredKind::Star:
    case PredKind::Sum:
      return unify_preds(a->preds[0], b->preds[0]) && unify_preds(a->preds[1], b->preds[1]);
    case PredKind::OpApp: {
      if (a->name != b->name) return false;
      if (a->scalars.size() != b->scalars.size() || a->preds.size() != b->preds.size())
        return false;
      for (size_t i = 0; i < a->scalars.size(); ++i)
        if (!unify_terms(a->scalars[i], b->scalars[i])) return false;
      for (size_t i = 0; i < a->preds.size(); ++i)
        if (!unify_preds(a->preds[i], b->preds[i])) return false;
      return true;
    }
    case PredKind::Defined: return pred_eq(a, b);
    default: return false;
  }
}

Pred TpSolver::prenormalize(const Pred& p) const {
  if (p->kind != PredKind::OpApp) {
    if (p->preds.empty()) return p;
    auto q = std::make_shared<PredNode>(*p);
    for (auto& s : q->preds) s = prenormalize(s);
    return q;
  }
  auto q = std::make_shared<PredNode>(*p);
  for (auto& s : q->preds) s = prenormalize(s);
  const ScalarAlgebra* alg = reg.algebra_of_op(p->name);
  if (alg && alg->both_sa_sd && alg->has_mul && q->preds.size() == 1 &&
      q->preds[0]->kind == PredKind::OpApp && q->preds[0]->name == p->name &&
      q->scalars.size() == 1) {
    // F_n(F_m(T)) -> F_{n*m}(T) ahead of any SA/SD reasoning
    Term nm = alg->mul_term(q->scalars[0], q->preds[0]->scalars[0]);
    return reg.make_op(p->name, {nm}, {q->preds[0]->preds[0]});
  }
  return Pred(q);
}

namespace {

struct Collapse {
  Pred pred;
  Term proj;   // abst(old) -> abst(new)
  // rebuilds abst(old) from (abst(new), source-side abstraction)
  std::function<Term(const Term&, const Term&)> embed;
  bool changed = false;
};

Collapse identity_collapse(const Pred& p) {
  Collapse c;
  c.pred = p;
  c.proj = klam(p->abst, [](const Term& v) { return v; });
  c.embed = [](const Term& v, const Term&) { return v; };
  return c;
}

Collapse collapse_emp(const Registry& reg, const Pred& p) {
  switch (p->kind) {
    case PredKind::Star: {
      Collapse a = collapse_emp(reg, p->preds[0]);
      Collapse b = collapse_emp(reg, p->preds[1]);
      bool ae = a.pred->kind == PredKind::Emp, be = b.pred->kind == PredKind::Emp;
      if (!a.changed && !b.changed && !ae && !be) return identity_collapse(p);
      Collapse c;
      c.changed = true;
      auto ea = a.embed, eb = b.embed;
      if (ae && be) {
        c.pred = pred_emp();
        c.proj = klam(p->abst, [](const Term&) { return mk_unit(); });
        c.embed = [ea, eb](const Term&, const Term& src) {
          return mk_pair(ea(mk_unit(), src), eb(mk_unit(), src));
        };
      } else if (ae) {
        c.pred = b.pred;
        Term pb = b.proj;
        c.proj = klam(p->abst, [&](const Term& v) { return apply_simp(pb, mk_proj(1, v)); });
        c.embed = [ea, eb](const Term& v, const Term& src) {
          return mk_pair(ea(mk_unit(), src), eb(v, src));
        };
      } else if (be) {
        c.pred = a.pred;
        Term pa = a.proj;
        c.proj = klam(p->abst, [&](const Term& v) { return apply_simp(pa, mk_proj(0, v)); });
        c.embed = [ea, eb](const Term& v, const Term& src) {
          return mk_pair(ea(v, src), eb(mk_unit(), src));
        };
      } else {
        c.pred = pred_star(a.pred, b.pred);
        Term pa = a.proj, pb = b.proj;
        c.proj = klam(p->abst, [&](const Term& v) {
          return mk_pair(apply_simp(pa, mk_proj(0, v)), apply_simp(pb, mk_proj(1, v)));
        });
        c.embed = [ea, eb](const Term& v, const Term& src) {
          return mk_pair(ea(mk_proj(0, v), src), eb(mk_proj(1, v), src));
        };
      }
      return c;
    }
    case PredKind::OpApp: {
      const PredicateDef* d = reg.find_pred(p->name);
      if (d && d->sig.collapses_empty && p->preds.size() == 1 &&
          p->preds[0]->kind == PredKind::Emp) {
        Collapse c;
        c.changed = true;
        c.pred = pred_emp();
        c.proj = klam(p->abst, [](const Term&) { return mk_unit(); });
        std::vector<Term> scalars = p->scalars;
        auto embed_fn = d->sig.empty_embed;
        c.embed = [scalars, embed_fn](const Term&, const Term& src) {
          if (embed_fn) return embed_fn(scalars, src);
          return mk_unit();
        };
        return c;
      }
      return identity_collapse(p);
    }
    default:
      return identity_collapse(p);
  }
}

}  // namespace

TpSolution TpSolver::normalize_solution(const TpProblem& p, TpSolution s) const {
  s.theta = evars.resolve(s.theta);
  s.f = evars.resolve(s.f);
  s.Z = evars.resolve_pred(s.Z);
  s.R = evars.resolve_pred(s.R);
  if (p.kind == TpKind::BiTP) {
    for (int round = 0; round < 6; ++round) {
      bool changed = false;
      Collapse cz = collapse_emp(reg, s.Z);
      if (cz.changed) {
        changed = true;
        Term f = s.f;
        Sort in = pair_sort(p.source->abst, cz.pred->abst);
        auto embed = cz.embed;
        s.f = klam(in, [&](const Term& q) {
          return mk_app(f, mk_pair(mk_proj(0, q), embed(mk_proj(1, q), mk_proj(0, q))));
        });
        s.Z = cz.pred;
      }
      Collapse cr = collapse_emp(reg, s.R);
      if (cr.changed) {
        changed = true;
        Term f = s.f;
        Sort in = pair_sort(p.source->abst, s.Z->abst);
        Term proj = cr.proj;
        s.f = klam(in, [&](const Term& q) {
          Term r = mk_app(f, q);
          return mk_let("q", r,
                        mk_pair(mk_proj(0, mk_bvar(0, r->sort)),
                                apply_simp(proj, mk_proj(1, mk_bvar(0, r->sort)))));
        });
        s.R = cr.pred;
      }
      if (!changed) break;
    }
  }
  s.theta = simplify(s.theta);
  s.f = simplify(s.f);
  return s;
}

std::optional<std::pair<TpSolution, DerivationNode>> TpSolver::solve(const TpProblem& p0) {
  if (++steps > step_budget) {
    budget_hit = true;
    return std::nullopt;
  }
  TpProblem p = p0;
  p.source = prenormalize(evars.resolve_pred(p.source));
  p.target = prenormalize(evars.resolve_pred(p.target));
  p.domain = evars.resolve(p.domain);

  std::vector<const TpRule*> rules;
  for (auto& r : session_rules) rules.push_back(&r);
  for (auto* r : reg.rule_list()) rules.push_back(r);

  for (const TpRule* r : rules) {
    if (p.kind == TpKind::TP && !r->for_tp) continue;
    if (p.kind == TpKind::BiTP && !r->for_bitp) continue;
    auto snap = evars.snapshot();
    ApplyResult res = r->apply(*this, p);
    if (res.status == ApplyResult::NoMatch) {
      evars.restore(snap);
      continue;
    }
    ++rule_apps;
    if (res.status == ApplyResult::Failed) {
      evars.restore(snap);
      // FB1's induced TP may fail with FB2 still behind it; any other
      // committed rule failing fails the routine (no backtracking)
      if (r->name == "FB1") continue;
      return std::nullopt;
    }
    TpSolution sol = normalize_solution(p, res.sol);
    DerivationNode node{r->name, p, sol, std::move(res.children)};
    return std::make_pair(std::move(sol), std::move(node));
  }
  return std::nullopt;
}

}  // namespace slr
