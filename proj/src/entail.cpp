#include "slr/entail.hpp"

#include <sstream>

#include "slr/simplify.hpp"

namespace slr {

std::vector<std::string> EntailResult::tp_root_labels() const {
  std::vector<std::string> out;
  for (auto& t : tp_trees) out.push_back(t.rule);
  return out;
}

namespace {

int count_connectives(const Assertion& a) {
  int n = 1;
  for (auto& k : a->kids) n += count_connectives(k);
  if (a->kind == AKind::PredApp) {
    std::function<int(const Pred&)> pc = [&](const Pred& p) {
      int c = 1;
      for (auto& s : p->preds) c += pc(s);
      return c;
    };
    n += pc(a->pred) - 1;
  }
  return n;
}

bool is_pure(const Assertion& a) { return a->kind == AKind::Pure; }

}  // namespace

EntailSession::Policy EntailSession::evar_policy(const Term& cond0, Term& residual) {
  Term cond = simplify(evars.resolve(cond0));
  residual = cond;
  if (cond->kind != TermKind::Con || cond->name != "eq") return Policy::Deferred;
  const Term& a = cond->args[0];
  const Term& b = cond->args[1];
  bool ae = a->kind == TermKind::Evar, be = b->kind == TermKind::Evar;
  // unify only when exactly one side is a bare evar
  if (ae && be) return Policy::Deferred;
  if (ae && !has_evar(b)) {
    if (evars.bind(a->idx, b)) {
      residual = mk_bool(true);
      return Policy::Unified;
    }
  }
  if (be && !has_evar(a)) {
    if (evars.bind(b->idx, a)) {
      residual = mk_bool(true);
      return Policy::Unified;
    }
  }
  return Policy::Deferred;
}

Assertion EntailSession::skolemize(const Assertion& h0, EntailResult& out,
                                   std::vector<std::pair<std::string, Sort>>& fixed) {
  Assertion h = hoist_exists(assertion_simplify(evars.resolve_assertion(h0)));
  while (h->kind == AKind::Exists) {
    std::string name = h->binder + "^" + std::to_string(fresh_ctr_++);
    fixed.emplace_back(name, h->binder_sort);
    out.events.push_back({"SEx", name, 0});
    h = asubst(h->kids[0], h->binder, mk_fvar(name, h->binder_sort, /*rigid=*/true));
  }
  return h;
}

EntailResult EntailSession::prove_entailment(const Assertion& hyp, const Assertion& goal_a) {
  EntailResult out;
  out.connectives = count_connectives(hyp) + count_connectives(goal_a);
  FragmentClass hc = classify(hyp);
  FragmentClass gc = classify(goal_a);
  if (hc != FragmentClass::StateS) {
    out.blocking = "hypothesis outside the state fragment: " + show_assertion(hyp);
    return out;
  }
  if (gc != FragmentClass::StateS && gc != FragmentClass::GoalG) {
    out.blocking = "goal outside the goal fragment: " + show_assertion(goal_a);
    return out;
  }
  std::vector<std::pair<std::string, Sort>> fixed;
  Assertion h = skolemize(hyp, out, fixed);
  // pure hypotheses feed the side-condition prover
  size_t ctx0 = tps.prover.context.size();
  std::function<void(const Assertion&)> mine = [&](const Assertion& a) {
    if (a->kind == AKind::Pure) tps.prover.context.push_back(a->term);
    for (auto& k : a->kids) mine(k);
  };
  mine(h);

  auto theta = goal(h, goal_a, out, 0);
  tps.prover.context.resize(ctx0);
  if (!theta) {
    out.ok = false;
    if (out.blocking.empty()) out.blocking = "unsolved subgoal";
    return out;
  }
  Term t = simplify(evars.resolve(*theta));
  // deferred equations may have become one-sided through later bindings;
  // re-apply the policy until the obligation stabilizes
  for (int round = 0; round < 8; ++round) {
    std::vector<Term> conj;
    std::function<void(const Term&)> split = [&](const Term& c) {
      if (c->kind == TermKind::Con && c->name == "and") {
        split(c->args[0]);
        split(c->args[1]);
      } else {
        conj.push_back(c);
      }
    };
    split(t);
    Term next = mk_bool(true);
    for (auto& c : conj) {
      Term residual;
      evar_policy(c, residual);
      next = and_simp(next, residual);
    }
    next = simplify(evars.resolve(next));
    if (term_eq(next, t)) break;
    t = next;
  }
  // goal-existential bindings become part of the reported obligation
  for (auto& [id, name] : evars.goal_evars) {
    Term ev = mk_evar(id, any_sort());
    Term b = evars.resolve(ev);
    out.goal_bindings.emplace_back(name, b);
    if (b->kind != TermKind::Evar || b->idx != id) {
      Term nv = mk_fvar(name, b->sort);
      t = and_simp(t, mk_eq(nv, b));
    }
  }
  // close over the fixed variables the obligation still mentions (S-Exists rule)
  std::set<std::string> fv;
  collect_fvars(t, fv);
  for (auto it = fixed.rbegin(); it != fixed.rend(); ++it)
    if (fv.count(it->first)) t = forall_of(it->first, it->second, t);
  out.theta = simplify(t);
  out.rule_apps += tps.rule_apps;
  out.ok = true;
  return out;
}

std::optional<Term> EntailSession::goal(const Assertion& h0, const Assertion& g0,
                                        EntailResult& out, int depth) {
  Assertion h = assertion_simplify(evars.resolve_assertion(h0));
  Assertion g = assertion_simplify(evars.resolve_assertion(g0));

  if (classify(g) == FragmentClass::StateS) {  // terminal (bi-EP)
    out.events.push_back({"bi-EP", show_assertion(h) + " |- " + show_assertion(g), depth});
    auto s = solve_biep(h, g, out, depth + 1);
    if (!s) return std::nullopt;
    auto tz = solve_from_emp(assertion_simplify(evars.resolve_assertion(s->Z)), out, depth + 1);
    if (!tz) {
      if (out.blocking.empty())
        out.blocking = "unsatisfied antiframe: " + show_assertion(evars.resolve_assertion(s->Z));
      return std::nullopt;
    }
    auto tr = solve_to_emp(assertion_simplify(evars.resolve_assertion(s->R)), out, depth + 1);
    if (!tr) {
      if (out.blocking.empty())
        out.blocking = "leftover frame: " + show_assertion(evars.resolve_assertion(s->R));
      return std::nullopt;
    }
    return and_simp(s->theta, and_simp(*tz, *tr));
  }

  switch (g->kind) {
    case AKind::Star: {  // (bi-EP_R): peel the first target bunch
      out.events.push_back({"bi-EP_R", show_assertion(g->kids[0]), depth});
      auto s = solve_biep(h, g->kids[0], out, depth + 1);
      if (!s) return std::nullopt;
      auto tz = solve_from_emp(assertion_simplify(evars.resolve_assertion(s->Z)), out, depth + 1);
      if (!tz) {
        if (out.blocking.empty())
          out.blocking = "unsatisfied antiframe: " + show_assertion(evars.resolve_assertion(s->Z));
        return std::nullopt;
      }
      auto rest = goal(s->R, g->kids[1], out, depth + 1);
      if (!rest) return std::nullopt;
      return and_simp(s->theta, and_simp(*tz, *rest));
    }
    case AKind::Wand: {  // star the operand onto the hypothesis
      out.events.push_back({"Wand", show_assertion(g->kids[0]), depth});
      std::vector<std::pair<std::string, Sort>> fixed;
      Assertion h2 = skolemize(a_star(h, g->kids[0]), out, fixed);
      size_t ctx0 = tps.prover.context.size();
      std::function<void(const Assertion&)> mine = [&](const Assertion& a) {
        if (a->kind == AKind::Pure) tps.prover.context.push_back(a->term);
        for (auto& k : a->kids) mine(k);
      };
      mine(h2);
      auto t = goal(h2, g->kids[1], out, depth + 1);
      tps.prover.context.resize(ctx0);
      if (!t) return std::nullopt;
      Term r = *t;
      std::set<std::string> fv;
      collect_fvars(r, fv);
      for (auto it = fixed.rbegin(); it != fixed.rend(); ++it)
        if (fv.count(it->first)) r = forall_of(it->first, it->second, r);
      return r;
    }
    case AKind::Implies: {  // P -> G
      if (!is_pure(g->kids[0])) {
        out.blocking = "non-pure implication antecedent in goal";
        return std::nullopt;
      }
      out.events.push_back({"P->", show_term(g->kids[0]->term), depth});
      tps.prover.context.push_back(g->kids[0]->term);
      auto t = goal(a_and(h, g->kids[0]), g->kids[1], out, depth + 1);
      tps.prover.context.pop_back();
      if (!t) return std::nullopt;
      return simplify(mk_imp(g->kids[0]->term, *t));
    }
    case AKind::And: {
      out.events.push_back({"/\\", "", depth});
      auto t1 = goal(h, g->kids[0], out, depth + 1);
      if (!t1) return std::nullopt;
      auto t2 = goal(h, g->kids[1], out, depth + 1);
      if (!t2) return std::nullopt;
      return and_simp(*t1, *t2);
    }
    case AKind::Forall: {
      std::string name = g->binder + "^" + std::to_string(fresh_ctr_++);
      out.events.push_back({"ALL", name, depth});
      auto t = goal(h, asubst(g->kids[0], g->binder, mk_fvar(name, g->binder_sort, true)), out,
                    depth + 1);
      if (!t) return std::nullopt;
      std::set<std::string> fv;
      collect_fvars(*t, fv);
      if (fv.count(name)) return forall_of(name, g->binder_sort, *t);
      return *t;
    }
    case AKind::Exists: {  // fresh free variable, realized as an evar
      Term ev = evars.fresh(g->binder_sort);
      evars.goal_evars.emplace_back(ev->idx, g->binder);
      out.events.push_back({"EX", g->binder + " := ?e" + std::to_string(ev->idx), depth});
      return goal(h, asubst(g->kids[0], g->binder, ev), out, depth + 1);
    }
    case AKind::Or: {  // App.-G overloading: the only backtracking point
      auto snap = evars.snapshot();
      size_t ev0 = out.events.size(), tp0 = out.tp_trees.size();
      size_t ctx0 = tps.prover.context.size();
      out.events.push_back({"GV_L", "", depth});
      auto t = goal(h, g->kids[0], out, depth + 1);
      if (t) return t;
      evars.restore(snap);
      out.events.resize(ev0);
      out.tp_trees.resize(tp0);
      tps.prover.context.resize(ctx0);
      out.blocking.clear();
      out.events.push_back({"GV_R", "", depth});
      return goal(h, g->kids[1], out, depth + 1);
    }
    default:
      out.blocking = "goal outside the supported grammar: " + show_assertion(g);
      return std::nullopt;
  }
}

std::optional<BiEpSolution> EntailSession::solve_biep(const Assertion& h0, const Assertion& g0,
                                                      EntailResult& out, int depth) {
  Assertion h = assertion_simplify(evars.resolve_assertion(h0));
  Assertion g = assertion_simplify(evars.resolve_assertion(g0));
  auto ev = [&](const char* rule, const std::string& d) {
    out.events.push_back({rule, d, depth});
    out.rule_apps++;
  };

  if (h->kind == AKind::Emp) {
    ev("emp_L", show_assertion(g));
    return BiEpSolution{mk_bool(true), g, a_emp()};
  }
  if (g->kind == AKind::Emp) {
    ev("emp_R", show_assertion(h));
    return BiEpSolution{mk_bool(true), a_emp(), h};
  }
  if (h->kind == AKind::Bot) {
    ev("bot_L", "");
    return BiEpSolution{mk_bool(true), a_emp(), a_bot()};
  }
  if (g->kind == AKind::Top) {
    ev("top_R", "");
    return BiEpSolution{mk_bool(true), a_top(), a_emp()};
  }
  if (g->kind == AKind::Exists) {
    Term evar = evars.fresh(g->binder_sort);
    evars.goal_evars.emplace_back(evar->idx, g->binder);
    ev("EX_R", g->binder);
    return solve_biep(h, asubst(g->kids[0], g->binder, evar), out, depth);
  }
  if (g->kind == AKind::And && is_pure(g->kids[1])) {
    ev("pure-/\\_R", show_term(g->kids[1]->term));
    auto s = solve_biep(h, g->kids[0], out, depth);
    if (!s) return std::nullopt;
    Term residual;
    evar_policy(g->kids[1]->term, residual);
    s->theta = and_simp(s->theta, residual);
    return s;
  }
  if (g->kind == AKind::Pure) {  // TOP /\ P reading
    ev("pure-/\\_R", show_term(g->term));
    auto s = solve_biep(h, a_top(), out, depth);
    if (!s) return std::nullopt;
    Term residual;
    evar_policy(g->term, residual);
    s->theta = and_simp(s->theta, residual);
    return s;
  }
  if (h->kind == AKind::And && is_pure(h->kids[1])) {
    ev("pure-/\\_L", show_term(h->kids[1]->term));
    tps.prover.context.push_back(h->kids[1]->term);
    auto s = solve_biep(h->kids[0], g, out, depth);
    tps.prover.context.pop_back();
    if (!s) return std::nullopt;
    s->theta = simplify(mk_imp(h->kids[1]->term, evars.resolve(s->theta)));
    return s;
  }
  if (h->kind == AKind::Pure) {
    ev("pure-/\\_L", show_term(h->term));
    tps.prover.context.push_back(h->term);
    auto s = solve_biep(a_top(), g, out, depth);
    tps.prover.context.pop_back();
    if (!s) return std::nullopt;
    s->theta = simplify(mk_imp(h->term, evars.resolve(s->theta)));
    return s;
  }
  if (g->kind == AKind::Star) {  // (*_R): extract the first target
    ev("*_R", show_assertion(g->kids[0]));
    auto c1 = solve_biep(h, g->kids[0], out, depth + 1);
    if (!c1) return std::nullopt;
    auto c2 = solve_biep(c1->R, g->kids[1], out, depth + 1);
    if (!c2) return std::nullopt;
    return BiEpSolution{and_simp(c1->theta, c2->theta),
                        assertion_simplify(a_star(c1->Z, c2->Z)), c2->R};
  }
  if (h->kind == AKind::Star) {  // (*_L): probe source bunches left to right
    ev("*_L", show_assertion(h->kids[0]));
    auto c1 = solve_biep(h->kids[0], g, out, depth + 1);
    if (!c1) return std::nullopt;
    auto c2 = solve_biep(h->kids[1], c1->Z, out, depth + 1);
    if (!c2) return std::nullopt;
    return BiEpSolution{and_simp(c1->theta, c2->theta), c2->Z,
                        assertion_simplify(a_star(c1->R, c2->R))};
  }
  if (h->kind == AKind::PredApp && g->kind == AKind::PredApp) {  // (biTP)
    Term x = h->term;
    Term y = g->term;
    Term z = evars.fresh(any_sort());
    Term dpair = mk_pair(x, z);
    Term dom = mk_setlit({dpair}, dpair->sort);
    TpProblem prob{TpKind::BiTP, h->pred, g->pred, dom};
    auto r = tps.solve(prob);
    if (!r) {
      out.blocking = "bi-TP unsolved: " + show_problem(prob);
      return std::nullopt;
    }
    out.tp_trees.push_back(r->second);
    out.events.push_back({"biTP", r->second.rule + ": " + show_problem(prob), depth});
    const TpSolution& sol = r->first;
    Term fx = simplify(evars.resolve(mk_app(sol.f, mk_pair(evars.resolve(x), evars.resolve(z)))));
    Term theta = evars.resolve(sol.theta);
    // domain membership obligation
    Term dm;
    evar_policy(mk_in_dom(mk_pair(evars.resolve(x), evars.resolve(z)), sol.f), dm);
    theta = and_simp(theta, dm);
    // Trans(U, <=): default is equality
    Term lhs = simplify(mk_proj(0, fx));
    Term tr;
    const PropertyInstance* trp = reg.tr_of(g->pred);
    if (trp) {
      Term leq = trp->w.at("leq");
      evar_policy(simplify(mk_app(leq, mk_pair(lhs, evars.resolve(y)))), tr);
    } else {
      evar_policy(mk_eq(lhs, evars.resolve(y)), tr);
    }
    theta = and_simp(theta, tr);
    Assertion Z = assertion_simplify(
        a_pred(evars.resolve_pred(sol.Z), simplify(evars.resolve(z))));
    Assertion R = assertion_simplify(
        a_pred(evars.resolve_pred(sol.R), simplify(mk_proj(1, fx))));
    return BiEpSolution{simplify(theta), Z, R};
  }

  out.blocking = "bi-EP stuck: " + show_assertion(h) + " |- " + show_assertion(g);
  return std::nullopt;
}

std::optional<Term> EntailSession::solve_from_emp(const Assertion& a0, EntailResult& out,
                                                  int depth) {
  Assertion a = assertion_simplify(evars.resolve_assertion(a0));
  auto ev = [&](const char* rule, const std::string& d) {
    out.events.push_back({rule, d, depth});
    out.rule_apps++;
  };
  switch (a->kind) {
    case AKind::Emp:
      return mk_bool(true);
    case AKind::Top:
      ev("emp->TOP", "");
      return mk_bool(true);
    case AKind::Star: {
      ev("emp->**", "");
      auto t1 = solve_from_emp(a->kids[0], out, depth + 1);
      if (!t1) return std::nullopt;
      auto t2 = solve_from_emp(a->kids[1], out, depth + 1);
      if (!t2) return std::nullopt;
      return and_simp(*t1, *t2);
    }
    case AKind::And: {
      if (!is_pure(a->kids[1])) break;
      ev("emp->/\\", "");
      auto t = solve_from_emp(a->kids[0], out, depth + 1);
      if (!t) return std::nullopt;
      Term residual;
      evar_policy(a->kids[1]->term, residual);
      return and_simp(*t, residual);
    }
    case AKind::Pure: {
      Term residual;
      evar_policy(a->term, residual);
      return residual;
    }
    case AKind::Exists: {  // fresh free variable
      Term evar = evars.fresh(a->binder_sort);
      ev("emp->EX", a->binder);
      return solve_from_emp(asubst(a->kids[0], a->binder, evar), out, depth);
    }
    case AKind::PredApp: {
      const Pred& p = a->pred;
      if (p->kind == PredKind::Emp) {
        Term residual;
        evar_policy(mk_eq(a->term, mk_unit()), residual);
        return residual;
      }
      // value refinements are emp-based: emp -> x :: val_v(P) reduces to the
      // pure fact that v refines x
      if (p->kind == PredKind::OpApp && p->name == "val") {
        Term v = simplify(evars.resolve(p->scalars[0]));
        Pred inner = evars.resolve_pred(p->preds[0]);
        if (inner->kind == PredKind::Evar) {
          Pred pick;
          if (v->sort->kind == SortKind::Int) pick = pred_atom("IntV", int_sort());
          else if (v->sort->kind == SortKind::Bool) pick = pred_atom("BoolV", bool_sort());
          if (pick && evars.bind_pred(inner->evar_id, pick)) inner = pick;
        }
        ev("val_E", show_pred(inner));
        Term residual;
        if (inner->kind == PredKind::Atom && inner->name == "IntV") {
          evar_policy(mk_eq(a->term, v), residual);
          return residual;
        }
        if (inner->kind == PredKind::Atom && inner->name == "BoolV") {
          evar_policy(simplify(mk_eq(a->term, mk_con("truthy", {v}, bool_sort()))), residual);
          return residual;
        }
        if (inner->kind == PredKind::Atom && inner->name == "Null") {
          Term eqz = simplify(mk_eq(mk_con("ki", {v}, int_sort()), mk_int(0)));
          evar_policy(mk_eq(a->term, mk_unit()), residual);
          return and_simp(eqz, residual);
        }
        break;
      }
      // zero-scalar closure from SZero (IdEleE-style)
      if (p->kind == PredKind::OpApp) {
        const PropertyInstance* s0 = reg.first_prop(p->name, PropKind::S0);
        const ScalarAlgebra* alg = reg.algebra_of_op(p->name);
        if (s0 && alg && p->scalars.size() == 1 &&
            alg->is_zero(simplify(evars.resolve(p->scalars[0])), tps.prover)) {
          ev("IE_E(S0)", p->name);
          Term residual;
          evar_policy(simplify(mk_mem(a->term, s0->w.at("D"))), residual);
          return residual;
        }
      }
      std::string head = p->kind == PredKind::Atom || p->kind == PredKind::OpApp ? p->name : "";
      if (!head.empty()) {
        const PropertyInstance* ie = reg.first_prop(head, PropKind::IE_E);
        if (ie) {
          ev("IE_E", head);
          Term residual;
          evar_policy(simplify(mk_mem(a->term, ie->w.at("D"))), residual);
          return residual;
        }
      }
      break;
    }
    default:
      break;
  }
  if (out.blocking.empty()) out.blocking = "emp -/-> " + show_assertion(a);
  return std::nullopt;
}

std::optional<Term> EntailSession::solve_to_emp(const Assertion& a0, EntailResult& out,
                                                int depth) {
  Assertion a = assertion_simplify(evars.resolve_assertion(a0));
  auto ev = [&](const char* rule, const std::string& d) {
    out.events.push_back({rule, d, depth});
    out.rule_apps++;
  };
  switch (a->kind) {
    case AKind::Emp:
      return mk_bool(true);
    case AKind::Bot:
      ev("BOT->emp", "");
      return mk_bool(true);
    case AKind::Star: {
      ev("**->emp", "");
      auto t1 = solve_to_emp(a->kids[0], out, depth + 1);
      if (!t1) return std::nullopt;
      auto t2 = solve_to_emp(a->kids[1], out, depth + 1);
      if (!t2) return std::nullopt;
      return and_simp(*t1, *t2);
    }
    case AKind::And: {
      if (!is_pure(a->kids[1])) break;
      ev("/\\->emp", "");
      return solve_to_emp(a->kids[0], out, depth + 1);
    }
    case AKind::Exists: {  // fresh fixed variable
      std::string name = a->binder + "^" + std::to_string(out.events.size());
      ev("EX->emp", name);
      return solve_to_emp(asubst(a->kids[0], a->binder, mk_fvar(name, a->binder_sort, true)), out,
                          depth);
    }
    case AKind::PredApp: {
      const Pred& p = a->pred;
      if (p->kind == PredKind::Emp) return mk_bool(true);
      if (p->kind == PredKind::OpApp && p->name == "val") {
        ev("val_I", "");
        return mk_bool(true);  // value facts occupy no resources
      }
      if (p->kind == PredKind::OpApp) {
        const PropertyInstance* s0 = reg.first_prop(p->name, PropKind::S0);
        const ScalarAlgebra* alg = reg.algebra_of_op(p->name);
        if (s0 && alg && p->scalars.size() == 1 &&
            alg->is_zero(simplify(evars.resolve(p->scalars[0])), tps.prover)) {
          ev("IE_I(S0)", p->name);
          Term residual;
          evar_policy(simplify(mk_mem(a->term, s0->w.at("D"))), residual);
          return residual;
        }
      }
      std::string head = p->kind == PredKind::Atom || p->kind == PredKind::OpApp ? p->name : "";
      if (!head.empty()) {
        const PropertyInstance* ie = reg.first_prop(head, PropKind::IE_I);
        if (ie) {
          ev("IE_I", head);
          Term residual;
          evar_policy(simplify(mk_mem(a->term, ie->w.at("D"))), residual);
          return residual;
        }
      }
      break;
    }
    default:
      break;
  }
  if (out.blocking.empty()) out.blocking = show_assertion(a) + " -/-> emp";
  return std::nullopt;
}

}  // namespace slr
