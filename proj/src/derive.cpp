// Automatic property derivation: functor composition, the definitional
// entailment pipeline for non-recursive operators, and the induction strategy
// for recursive ones.
#include "slr/derive.hpp"

#include <atomic>

#include "slr/entail.hpp"
#include "slr/simplify.hpp"

namespace slr {

namespace {

std::string fresh_atom_name(const char* base) {
  static std::atomic<int> ctr{0};
  return std::string(base) + "@" + std::to_string(ctr++);
}

Term W1(const std::string& v, const Sort& s, const std::function<Term(const Term&)>& b) {
  return lam_of(v, s, b(mk_fvar(v, s)));
}

// one-level unfolding of `op` applications inside an assertion; predicate
// stars over pairs are expanded first so nested occurrences become visible
Assertion unfold_ops(const Registry& reg, const Assertion& a, const std::string& op) {
  switch (a->kind) {
    case AKind::PredApp: {
      const Pred& p = a->pred;
      if (p->kind == PredKind::Star) {
        Assertion l = a_pred(p->preds[0], simplify(mk_proj(0, a->term)));
        Assertion r = a_pred(p->preds[1], simplify(mk_proj(1, a->term)));
        return a_star(unfold_ops(reg, l, op), unfold_ops(reg, r, op));
      }
      if (p->kind == PredKind::OpApp && p->name == op) {
        auto body = reg.unfold(p, a->term);
        if (body) return assertion_simplify(*body);
      }
      if (p->kind == PredKind::Defined && p->name == op) {
        auto body = reg.unfold(p, a->term);
        if (body) return assertion_simplify(*body);
      }
      return a;
    }
    default: {
      if (a->kids.empty()) return a;
      auto n = std::make_shared<ANode>(*a);
      for (auto& k : n->kids) k = unfold_ops(reg, k, op);
      return n;
    }
  }
}

// session axiom TP(T, U, D') <- (D' <= D, f) used by Routine 4
TpRule element_axiom(const Pred& T, const Pred& U, const Term& f, const Term& D) {
  TpRule ax;
  ax.name = "TP-Hyp";
  ax.band = RuleBand::AdHoc;
  ax.for_tp = true;
  ax.for_bitp = false;
  ax.apply = [T, U, f, D](TpSolver& S, const TpProblem& p) -> ApplyResult {
    if (!pred_eq(S.evars.resolve_pred(p.source), T)) return ApplyResult::no_match();
    if (!pred_eq(S.evars.resolve_pred(p.target), U)) return ApplyResult::no_match();
    TpSolution s;
    s.theta = simplify(mk_subset(p.domain, D));
    s.f = f;
    s.Z = pred_emp();
    s.R = pred_emp();
    return ApplyResult::solved_with(std::move(s));
  };
  return ax;
}

struct DefEntailment {
  Assertion hyp;
  Assertion goal;
  std::string note;
  Term axiom_dom;  // domain of the element-transformation axiom (Routine 4)
};

}  // namespace

PropertyInstance compose_functors(const Registry& reg, const PropertyInstance& p1,
                                  const PropertyInstance& p2) {
  (void)reg;
  if (p1.kind != PropKind::TF || p2.kind != PropKind::TF)
    throw std::runtime_error("compose_functors expects two Functor instances");
  Term m1 = p1.w.at("m"), d1 = p1.w.at("d");
  Term m2 = p2.w.at("m"), d2 = p2.w.at("d");
  PropertyInstance out;
  out.kind = PropKind::TF;
  out.op = p1.op + "." + p2.op;
  out.prov = Provenance::Derived;
  out.note = "composition of " + p1.op + " and " + p2.op;
  out.w["m"] = simplify(W1("f", fun_sort(any_sort(), any_sort()), [&](const Term& f) {
    return mk_app(m1, mk_app(m2, f));
  }));
  out.w["d"] = simplify(W1("x", any_sort(), [&](const Term& x) {
    return mk_bindset(apply_simp(d1, x), d2);
  }));
  return out;
}

namespace {

// builds the definitional entailments of a property kind for operator `op`
// over fresh rigid element atoms; `unfold_target` controls which side gets
// the one-level unfolding (both, for Routine 3)
std::vector<DefEntailment> definitional_entailments(Registry& reg, const std::string& op,
                                                    PropKind kind,
                                                    const std::map<std::string, Term>& w,
                                                    const Pred& T, const Pred& U, const Term& f) {
  std::vector<DefEntailment> out;
  const PredicateDef* d = reg.find_pred(op);
  if (!d) throw std::runtime_error("derive: unknown operator " + op);
  auto apply_op = [&](const Pred& arg) {
    std::vector<Term> scs;  // scalar-free operators only in the derivation routines
    return reg.make_op(op, scs, {arg});
  };
  switch (kind) {
    case PropKind::TF: {
      Pred FT = apply_op(T), FU = apply_op(U);
      Term m = w.at("m");
      Term x = mk_fvar("x!", FT->abst);
      Term mfx = simplify(mk_app(mk_app(m, f), x));
      DefEntailment e;
      e.hyp = a_and(a_pred(FT, x), a_pure(mk_in_dom(x, simplify(mk_app(m, f)))));
      e.goal = a_pred(FU, mfx);
      e.note = "TF";
      e.axiom_dom = simplify(apply_simp(w.at("d"), x));
      out.push_back(e);
      return out;
    }
    case PropKind::SH: {
      Pred FT = apply_op(T), FU = apply_op(U);
      Pred FTU = apply_op(pred_star(T, U));
      Term s = w.at("s"), z = w.at("z");
      {
        Term x = mk_fvar("x!", pair_sort(FT->abst, FU->abst));
        DefEntailment e;
        e.hyp = a_and(a_pred(pred_star(FT, FU), x), a_pure(mk_in_dom(x, z)));
        e.goal = a_pred(FTU, simplify(mk_app(z, x)));
        e.note = "SH-merge";
        out.push_back(e);
      }
      {
        Term y = mk_fvar("y!", FTU->abst);
        DefEntailment e;
        e.hyp = a_and(a_pred(FTU, y), a_pure(mk_in_dom(y, s)));
        e.goal = a_pred(pred_star(FT, FU), simplify(mk_app(s, y)));
        e.note = "SH-split";
        out.push_back(e);
      }
      return out;
    }
    default:
      throw std::runtime_error("derivation for this property kind is not automated");
  }
}

DeriveResult run_derivation(Registry& reg, const std::string& op, PropKind kind,
                            const std::map<std::string, Term>& witnesses, bool prepend_tp_axiom) {
  DeriveResult res;
  const PredicateDef* d = reg.find_pred(op);
  if (!d) {
    res.error = "unknown operator " + op;
    return res;
  }
  if (!d->def) {
    res.error = "operator " + op + " has no definition to unfold";
    return res;
  }
  // the definition body must sit inside the state fragment
  if (classify(d->def->body) != FragmentClass::StateS) {
    res.error = "manual-proof-required: definition of " + op + " is outside S";
    return res;
  }
  Sort elem = any_sort();
  Pred T = pred_atom(fresh_atom_name("T"), elem);
  Pred U = pred_atom(fresh_atom_name("U"), elem);
  Term f = mk_fvar("f!", fun_sort(elem, elem));
  Term Dv = mk_fvar("D!", set_sort(elem));

  std::vector<DefEntailment> ents;
  try {
    ents = definitional_entailments(reg, op, kind, witnesses, T, U, f);
  } catch (const SortError& se) {
    res.error = std::string("witness sorts reject the definitional entailment: ") + se.what();
    return res;
  }
  Term theta = mk_bool(true);
  for (auto& e : ents) {
    Assertion hyp, goal;
    try {
      hyp = unfold_ops(reg, e.hyp, op);
      goal = unfold_ops(reg, e.goal, op);
    } catch (const SortError& se) {
      res.error = std::string("unfolding rejected: ") + se.what();
      return res;
    }
    EntailSession ses(reg);
    if (prepend_tp_axiom)
      ses.tps.session_rules.push_back(element_axiom(T, U, f, e.axiom_dom ? e.axiom_dom : Dv));
    auto r = ses.prove_entailment(hyp, goal);
    res.trace += e.note + ":\n";
    for (auto& t : r.tp_trees) res.trace += derivation_text(t, 1);
    if (!r.ok) {
      res.error = "entailment engine failed on " + e.note + ": " + r.blocking;
      return res;
    }
    theta = and_simp(theta, r.theta);
  }
  res.ok = true;
  res.obligation = simplify(theta);
  res.instance.kind = kind;
  res.instance.op = op;
  res.instance.w = witnesses;
  res.instance.prov = Provenance::Derived;
  res.instance.note = "derived from the definition";
  return res;
}

}  // namespace

DeriveResult derive_nonrecursive(Registry& reg, const std::string& op, PropKind kind,
                                 const std::map<std::string, Term>& witnesses) {
  return run_derivation(reg, op, kind, witnesses, /*prepend_tp_axiom=*/kind == PropKind::TF);
}

DeriveResult derive_functor(Registry& reg, const std::string& op, const Term& mapper,
                            const Term& dom) {
  std::map<std::string, Term> w = {{"m", mapper}, {"d", dom}};
  return run_derivation(reg, op, PropKind::TF, w, /*prepend_tp_axiom=*/true);
}

namespace {

// locates the unique recursive occurrence of `op` in a predicate tree
bool find_recursive_path(const Pred& p, const std::string& op, std::vector<int>& path) {
  if (p->kind == PredKind::OpApp && p->name == op) return true;
  for (size_t i = 0; i < p->preds.size(); ++i) {
    path.push_back((int)i);
    if (find_recursive_path(p->preds[i], op, path)) return true;
    path.pop_back();
  }
  return false;
}

struct FunctorSpine {
  Term m;  // \h. mapper through the spine
  Term d;  // element domain through the spine
};

// functor structure of the definition body along the recursion path,
// assembled from the structural functors of Sum/Star and registered TF
// instances of intermediate operators
std::optional<FunctorSpine> functor_along_path(const Registry& reg, const Pred& root,
                                               const std::vector<int>& path) {
  // collect per-step (m_i, d_i) from outermost in
  std::vector<std::pair<Term, Term>> steps;
  Pred cur = root;
  Sort anyf = fun_sort(any_sort(), any_sort());
  for (int ix : path) {
    if (cur->kind == PredKind::Sum) {
      Sort sum = cur->abst;
      bool left = ix == 0;
      Term m = W1("f", anyf, [&](const Term& f) {
        return W1("s", sum, [&](const Term& s) {
          Term k1 = left ? W1("a", sum->args[0], [&](const Term& a) {
            return mk_inj1(apply_simp(f, a), sum);
          })
                         : W1("a", sum->args[0],
                              [&](const Term& a) { return mk_inj1(a, sum); });
          Term k2 = left ? W1("b", sum->args[1], [&](const Term& b) { return mk_inj2(b, sum); })
                         : W1("b", sum->args[1], [&](const Term& b) {
                             return mk_inj2(apply_simp(f, b), sum);
                           });
          return mk_sumcase(s, k1, k2);
        });
      });
      Sort hole = left ? sum->args[0] : sum->args[1];
      Term d = W1("s", sum, [&](const Term& s) {
        Term none1 = W1("a", sum->args[0], [&](const Term& a) {
          return left ? mk_setlit({a}, sum->args[0]) : mk_setlit({}, hole);
        });
        Term none2 = W1("b", sum->args[1], [&](const Term& b) {
          return left ? mk_setlit({}, hole) : mk_setlit({b}, sum->args[1]);
        });
        return mk_sumcase(s, none1, none2);
      });
      steps.emplace_back(m, d);
      cur = cur->preds[ix];
      continue;
    }
    if (cur->kind == PredKind::Star) {
      Sort pr = cur->abst;
      bool left = ix == 0;
      Term m = W1("f", anyf, [&](const Term& f) {
        return W1("p", pr, [&](const Term& p) {
          Term a = mk_proj(0, p), b = mk_proj(1, p);
          return left ? mk_pair(apply_simp(f, a), b) : mk_pair(a, apply_simp(f, b));
        });
      });
      Term d = W1("p", pr, [&](const Term& p) {
        Term e = left ? mk_proj(0, p) : mk_proj(1, p);
        return mk_setlit({e}, e->sort);
      });
      steps.emplace_back(m, d);
      cur = cur->preds[ix];
      continue;
    }
    if (cur->kind == PredKind::OpApp && ix == 0 && cur->preds.size() == 1) {
      const PropertyInstance* tf = reg.first_prop(cur->name, PropKind::TF);
      if (!tf) return std::nullopt;
      steps.emplace_back(tf->w.at("m"), tf->w.at("d"));
      cur = cur->preds[0];
      continue;
    }
    return std::nullopt;
  }
  // compose outermost-first: m(h) = m1(m2(...(h))), d = d1 >>= d2 >>= ...
  FunctorSpine spine;
  spine.m = W1("h", anyf, [&](const Term& h) {
    Term acc = h;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) acc = mk_app(it->first, acc);
    return acc;
  });
  spine.d = W1("x", any_sort(), [&](const Term& x) {
    Term acc = mk_setlit({x}, any_sort());
    for (auto& [m, d] : steps) {
      (void)m;
      acc = mk_bindset(acc, d);
    }
    return acc;
  });
  spine.m = simplify(spine.m);
  spine.d = simplify(spine.d);
  return spine;
}

Pred replace_at_path(const Pred& root, const std::vector<int>& path, size_t i, const Pred& repl) {
  if (i == path.size()) return repl;
  auto q = std::make_shared<PredNode>(*root);
  q->preds[path[i]] = replace_at_path(root->preds[path[i]], path, i + 1, repl);
  if (q->kind == PredKind::Star) q->abst = pair_sort(q->preds[0]->abst, q->preds[1]->abst);
  if (q->kind == PredKind::Sum) q->abst = sum_sort(q->preds[0]->abst, q->preds[1]->abst);
  return q;
}

}  // namespace

DeriveResult derive_recursive(Registry& reg, const std::string& op, PropKind kind,
                              const std::map<std::string, Term>& witnesses, const WfOrder& order) {
  DeriveResult res;
  if (kind != PropKind::TF) {
    res.error = "recursive derivation currently targets the functor property";
    return res;
  }
  const PredicateDef* d = reg.find_pred(op);
  if (!d || !d->def) {
    res.error = "operator " + op + " has no definition";
    return res;
  }
  const OpDefinition& def = *d->def;
  if (classify(def.body) != FragmentClass::StateS) {
    res.error = "manual-proof-required: definition of " + op + " is outside S";
    return res;
  }
  if (def.body->kind != AKind::PredApp) {
    res.error = "recursive definition must take the form x :: T == f(x) :: F(T)";
    return res;
  }
  Sort elem = any_sort();
  Pred T = pred_atom(fresh_atom_name("T"), elem);
  Pred U = pred_atom(fresh_atom_name("U"), elem);
  Term f = mk_fvar("f!", fun_sort(elem, elem));
  Term m = witnesses.at("m");
  Term dwit = witnesses.at("d");

  // instantiate the definition body for source and target element refinements
  auto instantiate = [&](const Pred& arg_pred, const Term& x) {
    Assertion b = def.body;
    std::map<std::string, Pred> penv;
    if (!def.pred_params.empty()) penv[def.pred_params[0]] = arg_pred;
    // reuse the registry unfold machinery
    Pred opApp = reg.make_op(op, {}, {arg_pred});
    auto body = reg.unfold(opApp, x);
    (void)penv;
    (void)b;
    return *body;
  };

  Pred FT = reg.make_op(op, {}, {T});
  Pred FU = reg.make_op(op, {}, {U});
  Term x = mk_fvar("x!", FT->abst);
  Term mf = simplify(mk_app(m, f));
  Term mfx = simplify(mk_app(mf, x));

  Assertion src_unf = assertion_simplify(instantiate(T, x));
  Assertion tgt_unf = assertion_simplify(instantiate(U, mfx));
  if (src_unf->kind != AKind::PredApp) {
    res.error = "unfolded definition is not a predicate application";
    return res;
  }

  // locate the recursive occurrence and its functor spine
  std::vector<int> path;
  if (!find_recursive_path(src_unf->pred, op, path)) {
    // no recursion: identical to the non-recursive pipeline (empty IH)
    return run_derivation(reg, op, kind, witnesses, true);
  }
  auto spine = functor_along_path(reg, src_unf->pred, path);
  if (!spine) {
    res.error = "recursive occurrence is not under a functor spine";
    return res;
  }

  // induction: rewrite the recursive occurrence via the IH, collecting the
  // d_F(f(x)) <= pre(x) obligation
  Pred rewritten = replace_at_path(src_unf->pred, path, 0, reg.make_op(op, {}, {U}));
  Term ih_arg = simplify(mk_app(apply_simp(spine->m, mf), src_unf->term));
  Term pre_ob = simplify(mk_subset(apply_simp(spine->d, src_unf->term),
                                   apply_simp(order.pre, x)));

  EntailSession ses(reg);
  Term Dv = simplify(apply_simp(dwit, x));
  ses.tps.session_rules.push_back(element_axiom(T, U, f, Dv));
  Assertion hyp = a_pred(rewritten, ih_arg);
  auto r = ses.prove_entailment(hyp, tgt_unf);
  for (auto& t : r.tp_trees) res.trace += derivation_text(t, 1);
  if (!r.ok) {
    res.error = "entailment engine failed after induction: " + r.blocking;
    return res;
  }
  res.ok = true;
  res.obligation = simplify(and_simp(pre_ob, r.theta));
  res.instance.kind = kind;
  res.instance.op = op;
  res.instance.w = witnesses;
  res.instance.prov = Provenance::Derived;
  res.instance.note = "derived by induction over the recursive definition";
  return res;
}

}  // namespace slr
