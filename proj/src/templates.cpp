// Rule construction: built-in ad-hoc rules, fallbacks, and the instantiation
// of template rules from registered algebraic property instances.
#include "slr/simplify.hpp"
#include "slr/tpsolver.hpp"

namespace slr {

namespace {

bool is_opapp(const Pred& p, const std::string& op) {
  return p->kind == PredKind::OpApp && p->name == op;
}

Term dimage(const Term& f, const Term& d) { return simplify(mk_image(f, d)); }

Term m1_of(const Term& g, const Sort& a, const Sort& b) {
  return klam2(a, b, [&](const Term& x, const Term& y) {
    return mk_pair(apply_simp(g, x), y);
  });
}

Term compose_f(const Term& outer, const Term& inner, const Sort& in) {
  return klam(in, [&](const Term& q) { return mk_app(outer, apply_simp(inner, q)); });
}

// scalars equal: syntactic first, then the budgeted prover (App. F step 6)
bool scalars_match(TpSolver& S, const Pred& a, const Pred& b) {
  if (a->scalars.size() != b->scalars.size()) return false;
  for (size_t i = 0; i < a->scalars.size(); ++i) {
    Term x = simplify(a->scalars[i]), y = simplify(b->scalars[i]);
    if (term_eq(x, y)) continue;
    if (has_evar(x) || has_evar(y)) {
      if (!S.unify_terms(x, y)) return false;
      continue;
    }
    if (!S.prover.prove_eq(x, y)) return false;
  }
  return true;
}

ApplyResult solved(TpSolution s, std::vector<DerivationNode> kids = {}) {
  ApplyResult r;
  r.status = ApplyResult::Solved;
  r.sol = std::move(s);
  r.children = std::move(kids);
  return r;
}

}  // namespace

// --- built-in ad-hoc rules ----------------------------------------------------

std::vector<TpRule> core_adhoc_rules() {
  std::vector<TpRule> out;

  {  // identical refinement relations (syntactic up to evar unification)
    TpRule r;
    r.name = "ID";
    r.band = RuleBand::AdHoc;
    r.for_tp = r.for_bitp = true;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (!S.unify_preds(p.source, p.target)) return ApplyResult::no_match();
      Pred src = S.evars.resolve_pred(p.source);
      TpSolution s;
      s.theta = mk_bool(true);
      s.Z = pred_emp();
      s.R = pred_emp();
      if (p.kind == TpKind::TP) {
        s.f = klam(src->abst, [](const Term& x) { return x; });
      } else {
        Sort in = pair_sort(src->abst, unit_sort());
        s.f = klam(in, [](const Term& q) { return q; });
      }
      return solved(std::move(s));
    };
    out.push_back(r);
  }

  {  // bi-TP(Emp, U, D): demand the whole target
    TpRule r;
    r.name = "TP-Emp_L";
    r.band = RuleBand::AdHoc;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.source->kind != PredKind::Emp) return ApplyResult::no_match();
      Pred tgt = S.evars.resolve_pred(p.target);
      TpSolution s;
      s.theta = mk_bool(true);
      s.Z = tgt;
      s.R = pred_emp();
      s.f = klam(pair_sort(unit_sort(), tgt->abst),
                 [](const Term& q) { return mk_pair(mk_proj(1, q), mk_proj(0, q)); });
      return solved(std::move(s));
    };
    out.push_back(r);
  }

  {  // bi-TP(T, Emp, D): leave the whole source as frame
    TpRule r;
    r.name = "TP-Emp_R";
    r.band = RuleBand::AdHoc;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.target->kind != PredKind::Emp) return ApplyResult::no_match();
      Pred src = S.evars.resolve_pred(p.source);
      TpSolution s;
      s.theta = mk_bool(true);
      s.Z = pred_emp();
      s.R = src;
      s.f = klam(pair_sort(src->abst, unit_sort()),
                 [](const Term& q) { return mk_pair(mk_proj(1, q), mk_proj(0, q)); });
      return solved(std::move(s));
    };
    out.push_back(r);
  }

  {  // eliminate (T1 ** T2) on the source side
    TpRule r;
    r.name = "TP*_L";
    r.band = RuleBand::AdHoc;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.source->kind != PredKind::Star) return ApplyResult::no_match();
      Pred T1 = p.source->preds[0], T2 = p.source->preds[1];
      Sort a1 = T1->abst, a2 = T2->abst;
      // the second transformation's function is a hole until its child solves
      Term f2 = S.evars.fresh(any_sort());
      Sort dsort = pair_sort(pair_sort(a1, a2), any_sort());
      Term d1 = dimage(klam(dsort,
                            [&](const Term& q) {
                              Term x2 = mk_proj(1, mk_proj(0, q));
                              Term w = mk_proj(1, q);
                              return mk_pair(mk_proj(0, mk_proj(0, q)),
                                             mk_proj(0, mk_app(f2, mk_pair(x2, w))));
                            }),
                       p.domain);
      auto c1 = S.solve({TpKind::BiTP, T1, p.target, d1});
      if (!c1) return ApplyResult::failed();
      Term d2 = dimage(klam(dsort,
                            [&](const Term& q) {
                              return mk_pair(mk_proj(1, mk_proj(0, q)), mk_proj(1, q));
                            }),
                       p.domain);
      auto c2 = S.solve({TpKind::BiTP, T2, c1->first.Z, d2});
      if (!c2) return ApplyResult::failed();
      S.evars.bind(f2->idx, c2->first.f);
      Term f1t = c1->first.f;
      Term f2t = c2->first.f;
      Sort in = pair_sort(pair_sort(a1, a2), c2->first.Z->abst);
      TpSolution s;
      s.theta = and_simp(S.evars.resolve(c1->first.theta), S.evars.resolve(c2->first.theta));
      s.Z = c2->first.Z;
      s.R = pred_star(c1->first.R, c2->first.R);
      s.f = klam(in, [&](const Term& q) {
        Term x1 = mk_proj(0, mk_proj(0, q));
        Term x2 = mk_proj(1, mk_proj(0, q));
        Term w = mk_proj(1, q);
        Term t2 = apply_simp(f2t, mk_pair(x2, w));       // (w', r2)
        return mk_let("t2", t2, [&] {
          Term t2v = mk_bvar(0, t2->sort);
          Term t1 = apply_simp(f1t, mk_pair(x1, mk_proj(0, t2v)));  // (y, r1)
          return mk_let("t1", t1,
                        mk_pair(mk_proj(0, mk_bvar(0, t1->sort)),
                                mk_pair(mk_proj(1, mk_bvar(0, t1->sort)),
                                        mk_proj(1, mk_bvar(1, t2->sort)))));
        }());
      });
      return solved(std::move(s), {c1->second, c2->second});
    };
    out.push_back(r);
  }

  {  // eliminate (U1 ** U2) on the target side
    TpRule r;
    r.name = "TP*_R";
    r.band = RuleBand::AdHoc;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.target->kind != PredKind::Star) return ApplyResult::no_match();
      Pred U1 = p.target->preds[0], U2 = p.target->preds[1];
      Sort at = p.source->abst;
      Sort dsort = pair_sort(at, pair_sort(any_sort(), any_sort()));
      Term d1 = dimage(klam(dsort,
                            [&](const Term& q) {
                              return mk_pair(mk_proj(0, q), mk_proj(0, mk_proj(1, q)));
                            }),
                       p.domain);
      auto c1 = S.solve({TpKind::BiTP, p.source, U1, d1});
      if (!c1) return ApplyResult::failed();
      Term f1t = c1->first.f;
      Term d2 = dimage(klam(dsort,
                            [&](const Term& q) {
                              Term r1 = mk_proj(
                                  1, apply_simp(f1t, mk_pair(mk_proj(0, q),
                                                             mk_proj(0, mk_proj(1, q)))));
                              return mk_pair(r1, mk_proj(1, mk_proj(1, q)));
                            }),
                       p.domain);
      auto c2 = S.solve({TpKind::BiTP, c1->first.R, U2, d2});
      if (!c2) return ApplyResult::failed();
      Term f2t = c2->first.f;
      Sort in = pair_sort(at, pair_sort(c1->first.Z->abst, c2->first.Z->abst));
      TpSolution s;
      s.theta = and_simp(S.evars.resolve(c1->first.theta), S.evars.resolve(c2->first.theta));
      s.Z = pred_star(c1->first.Z, c2->first.Z);
      s.R = c2->first.R;
      s.f = klam(in, [&](const Term& q) {
        Term x = mk_proj(0, q);
        Term w1 = mk_proj(0, mk_proj(1, q));
        Term w2 = mk_proj(1, mk_proj(1, q));
        Term t1 = apply_simp(f1t, mk_pair(x, w1));  // (y1, r')
        return mk_let("t1", t1, [&] {
          Term t1v = mk_bvar(0, t1->sort);
          Term t2 = apply_simp(f2t, mk_pair(mk_proj(1, t1v), w2));  // (y2, r)
          return mk_let("t2", t2,
                        mk_pair(mk_pair(mk_proj(0, mk_bvar(1, t1->sort)),
                                        mk_proj(0, mk_bvar(0, t2->sort))),
                                mk_proj(1, mk_bvar(0, t2->sort))));
        }());
      });
      return solved(std::move(s), {c1->second, c2->second});
    };
    out.push_back(r);
  }

  {  // injection into a sum target (TP form)
    TpRule r;
    r.name = "Inj";
    r.band = RuleBand::AdHoc;
    r.for_tp = true;
    r.for_bitp = false;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.target->kind != PredKind::Sum) return ApplyResult::no_match();
      Pred src = S.evars.resolve_pred(p.source);
      Sort sum = p.target->abst;
      TpSolution s;
      s.theta = mk_bool(true);
      s.Z = pred_emp();
      s.R = pred_emp();
      if (pred_eq(src, p.target->preds[0])) {
        s.f = klam(src->abst, [&](const Term& x) { return mk_inj1(x, sum); });
        return solved(std::move(s));
      }
      if (pred_eq(src, p.target->preds[1])) {
        s.f = klam(src->abst, [&](const Term& x) { return mk_inj2(x, sum); });
        return solved(std::move(s));
      }
      return ApplyResult::no_match();
    };
    out.push_back(r);
  }

  {  // componentwise congruence for predicate pairs (TP form)
    TpRule r;
    r.name = "Star";
    r.band = RuleBand::AdHoc;
    r.for_tp = true;
    r.for_bitp = false;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.source->kind != PredKind::Star || p.target->kind != PredKind::Star)
        return ApplyResult::no_match();
      Sort ps = p.source->abst;
      Term d1 = dimage(klam(ps, [](const Term& q) { return mk_proj(0, q); }), p.domain);
      Term d2 = dimage(klam(ps, [](const Term& q) { return mk_proj(1, q); }), p.domain);
      auto c1 = S.solve({TpKind::TP, p.source->preds[0], p.target->preds[0], d1});
      if (!c1) return ApplyResult::failed();
      auto c2 = S.solve({TpKind::TP, p.source->preds[1], p.target->preds[1], d2});
      if (!c2) return ApplyResult::failed();
      Term f1 = c1->first.f, f2 = c2->first.f;
      TpSolution s;
      s.theta = and_simp(c1->first.theta, c2->first.theta);
      s.Z = pred_emp();
      s.R = pred_emp();
      s.f = klam(ps, [&](const Term& q) {
        return mk_pair(apply_simp(f1, mk_proj(0, q)), apply_simp(f2, mk_proj(1, q)));
      });
      return solved(std::move(s), {c1->second, c2->second});
    };
    out.push_back(r);
  }

  {  // congruence for sums (TP form)
    TpRule r;
    r.name = "Sum";
    r.band = RuleBand::AdHoc;
    r.for_tp = true;
    r.for_bitp = false;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.source->kind != PredKind::Sum || p.target->kind != PredKind::Sum)
        return ApplyResult::no_match();
      auto c1 = S.solve({TpKind::TP, p.source->preds[0], p.target->preds[0],
                         simplify(mk_preimage_inj1(p.domain))});
      if (!c1) return ApplyResult::failed();
      auto c2 = S.solve({TpKind::TP, p.source->preds[1], p.target->preds[1],
                         simplify(mk_preimage_inj2(p.domain))});
      if (!c2) return ApplyResult::failed();
      Sort sum = p.target->abst;
      Sort a1 = p.source->preds[0]->abst, a2 = p.source->preds[1]->abst;
      Term f1 = c1->first.f, f2 = c2->first.f;
      TpSolution s;
      s.theta = and_simp(c1->first.theta, c2->first.theta);
      s.Z = pred_emp();
      s.R = pred_emp();
      s.f = klam(p.source->abst, [&](const Term& x) {
        return mk_sumcase(x,
                          klam(a1, [&](const Term& a) { return mk_inj1(apply_simp(f1, a), sum); }),
                          klam(a2, [&](const Term& b) { return mk_inj2(apply_simp(f2, b), sum); }));
      });
      return solved(std::move(s), {c1->second, c2->second});
    };
    out.push_back(r);
  }

  return out;
}

std::vector<TpRule> fallback_rules() {
  std::vector<TpRule> out;
  {
    TpRule r;
    r.name = "FB1";
    r.band = RuleBand::Fallback;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      Sort at = p.source->abst;
      Term d = dimage(klam(pair_sort(at, any_sort()),
                           [](const Term& q) { return mk_proj(0, q); }),
                      p.domain);
      auto c = S.solve({TpKind::TP, p.source, p.target, d});
      if (!c) return ApplyResult::failed();
      Term ft = c->first.f;
      TpSolution s;
      s.theta = c->first.theta;
      s.Z = pred_emp();
      s.R = pred_emp();
      s.f = klam(pair_sort(at, unit_sort()), [&](const Term& q) {
        return mk_pair(apply_simp(ft, mk_proj(0, q)), mk_proj(1, q));
      });
      return solved(std::move(s), {c->second});
    };
    out.push_back(r);
  }
  {
    TpRule r;
    r.name = "FB2";
    r.band = RuleBand::Fallback;
    r.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      Pred src = S.evars.resolve_pred(p.source);
      Pred tgt = S.evars.resolve_pred(p.target);
      TpSolution s;
      s.theta = mk_bool(true);
      s.Z = tgt;
      s.R = src;
      s.f = klam(pair_sort(src->abst, tgt->abst),
                 [](const Term& q) { return mk_pair(mk_proj(1, q), mk_proj(0, q)); });
      return solved(std::move(s));
    };
    out.push_back(r);
  }
  return out;
}

// --- template instantiation ------------------------------------------------------

namespace {

constexpr int RK_S0_L = 0, RK_S0_R = 1, RK_TF = 2, RK_SH = 3, RK_SD_L = 5, RK_SD_R = 6,
              RK_SD_WL = 7, RK_SD_WR = 8, RK_SD_IN = 9, RK_SD_OUT = 10, RK_SA_L = 11,
              RK_SA_R = 12, RK_S1_I = 13, RK_S1_E = 14, RK_S1p_E = 15, RK_S1p_I = 16;

TpRule base_rule(const char* name, int rank, const std::string& op) {
  TpRule r;
  r.name = name;
  r.band = RuleBand::Instantiated;
  r.template_rank = rank;
  r.op = op;
  r.detail = name;
  return r;
}

struct ScalarOpInfo {
  std::string op;
  std::string algname;
};

std::vector<TpRule> s0_rules(const Registry& reg, const PropertyInstance& inst) {
  std::vector<TpRule> out;
  const PredicateDef* d = reg.find_pred(inst.op);
  if (!d || d->sig.algebra.empty() || d->sig.scalar_sorts.size() != 1) return out;
  std::string op = inst.op;
  std::string algname = d->sig.algebra;
  Term D0 = inst.w.at("D");

  TpRule l = base_rule("S0_L", RK_S0_L, op);
  l.for_tp = true;
  l.apply = [op, algname, D0](TpSolver& S, const TpProblem& p) -> ApplyResult {
    if (!is_opapp(p.source, op)) return ApplyResult::no_match();
    const ScalarAlgebra& alg = builtin_algebra(algname);
    if (!alg.is_zero(simplify(p.source->scalars[0]), S.prover)) return ApplyResult::no_match();
    Sort xs = p.source->abst;
    bool bi = p.kind == TpKind::BiTP;
    Term cd = bi ? dimage(klam(pair_sort(xs, any_sort()),
                               [](const Term& q) {
                                 return mk_pair(mk_unit(), mk_proj(1, q));
                               }),
                          p.domain)
                 : dimage(klam(xs, [](const Term&) { return mk_unit(); }), p.domain);
    auto c = S.solve({p.kind, pred_emp(), p.target, cd});
    if (!c) return ApplyResult::failed();
    Term xsOf = bi ? dimage(klam(pair_sort(xs, any_sort()),
                                 [](const Term& q) { return mk_proj(0, q); }),
                            p.domain)
                   : p.domain;
    Term ft = c->first.f;
    TpSolution s;
    s.theta = and_simp(c->first.theta, simplify(mk_subset(xsOf, D0)));
    s.Z = c->first.Z;
    s.R = c->first.R;
    if (bi) {
      s.f = klam(pair_sort(xs, s.Z->abst), [&](const Term& q) {
        return mk_app(ft, mk_pair(mk_unit(), mk_proj(1, q)));
      });
    } else {
      s.f = klam(xs, [&](const Term&) { return mk_app(ft, mk_unit()); });
    }
    return solved(std::move(s), {c->second});
  };
  out.push_back(l);

  TpRule r = base_rule("S0_R", RK_S0_R, op);
  r.apply = [op, algname, D0](TpSolver& S, const TpProblem& p) -> ApplyResult {
    if (!is_opapp(p.target, op)) return ApplyResult::no_match();
    const ScalarAlgebra& alg = builtin_algebra(algname);
    if (!alg.is_zero(simplify(p.target->scalars[0]), S.prover)) return ApplyResult::no_match();
    auto c = S.solve({p.kind, p.source, pred_emp(), p.domain});
    if (!c) return ApplyResult::failed();
    Term y = S.evars.fresh(p.target->abst);
    Term ft = c->first.f;
    TpSolution s;
    s.theta = and_simp(c->first.theta, simplify(mk_mem(y, D0)));
    s.Z = c->first.Z;
    s.R = c->first.R;
    Sort in = pair_sort(p.source->abst, s.Z->abst);
    s.f = klam(in, [&](const Term& q) {
      return mk_pair(y, mk_proj(1, mk_app(ft, q)));
    });
    return solved(std::move(s), {c->second});
  };
  out.push_back(r);
  return out;
}

TpRule tf_rule(const PropertyInstance& inst) {
  TpRule r = base_rule("TF", RK_TF, inst.op);
  r.for_tp = true;
  r.for_bitp = false;
  std::string op = inst.op;
  Term mw = inst.w.at("m"), dw = inst.w.at("d");
  r.apply = [op, mw, dw](TpSolver& S, const TpProblem& p) -> ApplyResult {
    if (!is_opapp(p.source, op) || !is_opapp(p.target, op)) return ApplyResult::no_match();
    if (p.source->preds.size() != 1 || p.target->preds.size() != 1)
      return ApplyResult::no_match();
    if (!scalars_match(S, p.source, p.target)) return ApplyResult::no_match();
    Term cd = simplify(mk_bindset(p.domain, dw));
    auto c = S.solve({TpKind::TP, p.source->preds[0], p.target->preds[0], cd});
    if (!c) return ApplyResult::failed();
    TpSolution s;
    s.theta = c->first.theta;
    s.Z = pred_emp();
    s.R = pred_emp();
    s.f = simplify(mk_app(mw, c->first.f));
    return solved(std::move(s), {c->second});
  };
  return r;
}

std::optional<TpRule> sh_rule(const Registry& reg, const PropertyInstance& sh) {
  const PropertyInstance* tf = reg.first_prop(sh.op, PropKind::TF);
  if (!tf) return std::nullopt;
  TpRule r = base_rule("SH", RK_SH, sh.op);
  std::string op = sh.op;
  Term mw = tf->w.at("m"), dw = tf->w.at("d");
  Term sw = sh.w.at("s"), zw = sh.w.at("z");
  r.apply = [op, mw, dw, sw, zw](TpSolver& S, const TpProblem& p) -> ApplyResult {
    if (!is_opapp(p.source, op) || !is_opapp(p.target, op)) return ApplyResult::no_match();
    if (p.source->preds.size() != 1 || p.target->preds.size() != 1)
      return ApplyResult::no_match();
    if (!scalars_match(S, p.source, p.target)) return ApplyResult::no_match();
    Pred T = p.source->preds[0], U = p.target->preds[0];
    // child domain: D >>= (d . z)
    Term dz = klam(pair_sort(p.source->abst, any_sort()),
                   [&](const Term& q) { return mk_app(dw, mk_app(zw, q)); });
    Term cd = simplify(mk_bindset(p.domain, dz));
    auto c = S.solve({TpKind::BiTP, T, U, cd});
    if (!c) return ApplyResult::failed();
    Pred Zc = c->first.Z, Rc = c->first.R;
    std::vector<Term> sc = p.source->scalars;
    TpSolution s;
    s.theta = c->first.theta;
    s.Z = S.reg.make_op(op, sc, {Zc});
    s.R = S.reg.make_op(op, sc, {Rc});
    Term fc = c->first.f;
    Sort in = pair_sort(p.source->abst, s.Z->abst);
    s.f = klam(in, [&](const Term& q) {
      return mk_app(sw, simplify(mk_app(mk_app(mw, fc), mk_app(zw, q))));
    });
    return solved(std::move(s), {c->second});
  };
  return r;
}

std::vector<TpRule> sd_rules(const Registry& reg, const PropertyInstance& inst) {
  std::vector<TpRule> out;
  const PredicateDef* d = reg.find_pred(inst.op);
  if (!d || d->sig.algebra.empty() || d->sig.scalar_sorts.size() != 1) return out;
  std::string op = inst.op;
  std::string algname = d->sig.algebra;
  Term sw = inst.w.at("s"), zw = inst.w.at("z");

  struct Shape {
    const char* name;
    int rank;
    AddShape shape;
  };
  std::vector<Shape> shapes = {
      {"SD_L", RK_SD_L, AddShape::Right},  {"SD_R", RK_SD_R, AddShape::Left},
      {"SD_WL", RK_SD_WL, AddShape::SwapL}, {"SD_WR", RK_SD_WR, AddShape::SwapR},
      {"SD_IN", RK_SD_IN, AddShape::Inner}, {"SD_OUT", RK_SD_OUT, AddShape::TwoSided},
  };
  for (auto& sh : shapes) {
    TpRule r = base_rule(sh.name, sh.rank, op);
    AddShape shape = sh.shape;
    r.apply = [op, algname, sw, zw, shape](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (!is_opapp(p.source, op) || !is_opapp(p.target, op)) return ApplyResult::no_match();
      const ScalarAlgebra& alg = builtin_algebra(algname);
      Term n = simplify(p.source->scalars[0]);
      Term m = simplify(p.target->scalars[0]);
      if (has_evar(n) || has_evar(m)) return ApplyResult::no_match();
      if (!S.prover.prove_ne(n, m)) return ApplyResult::no_match();
      auto w = alg.solve_add ? alg.solve_add(n, m, shape, S.prover) : std::nullopt;
      if (!w) return ApplyResult::no_match();
      Pred T = p.source->preds[0], U = p.target->preds[0];
      auto s_at = [&](const Term& a, const Term& b) {
        return apply_simp(sw, mk_pair(a, b));
      };
      auto z_at = [&](const Term& a, const Term& b) {
        return apply_simp(zw, mk_pair(a, b));
      };
      auto Fof = [&](const Term& sc, const Pred& A) { return S.reg.make_op(op, {sc}, {A}); };
      Sort aSrc = p.source->abst;
      Sort dIn = pair_sort(aSrc, any_sort());

      if (shape == AddShape::Right) {  // SD_L: n + delta = m
        Term delta = w->w.at("delta");
        Term h = klam(dIn, [&](const Term& q) {
          Term merged = mk_app(z_at(n, delta), mk_pair(mk_proj(0, q), mk_proj(0, mk_proj(1, q))));
          return mk_pair(merged, mk_proj(1, mk_proj(1, q)));
        });
        auto c = S.solve({TpKind::BiTP, Fof(m, T), Fof(m, U), dimage(h, p.domain)});
        if (!c) return ApplyResult::failed();
        TpSolution s;
        s.theta = c->first.theta;
        s.Z = pred_star(Fof(delta, T), c->first.Z);
        s.R = c->first.R;
        s.f = compose_f(c->first.f, h, pair_sort(aSrc, s.Z->abst));
        return solved(std::move(s), {c->second});
      }
      if (shape == AddShape::Left) {  // SD_R: n = m + delta
        Term delta = w->w.at("delta");
        Term h = klam(dIn, [&](const Term& q) {
          Term sp = mk_app(s_at(m, delta), mk_proj(0, q));
          return mk_pair(mk_proj(0, sp), mk_proj(1, q));
        });
        auto c = S.solve({TpKind::BiTP, Fof(m, T), Fof(m, U), dimage(h, p.domain)});
        if (!c) return ApplyResult::failed();
        Term fc = c->first.f;
        TpSolution s;
        s.theta = c->first.theta;
        s.Z = c->first.Z;
        s.R = pred_star(Fof(delta, T), c->first.R);
        s.f = klam(pair_sort(aSrc, s.Z->abst), [&](const Term& q) {
          Term sp = mk_app(s_at(m, delta), mk_proj(0, q));
          return mk_let("sp", sp, [&] {
            Term spv = mk_bvar(0, sp->sort);
            Term yr = apply_simp(fc, mk_pair(mk_proj(0, spv), mk_proj(1, q)));
            return mk_let("yr", yr,
                          mk_pair(mk_proj(0, mk_bvar(0, yr->sort)),
                                  mk_pair(mk_proj(1, mk_bvar(1, sp->sort)),
                                          mk_proj(1, mk_bvar(0, yr->sort)))));
          }());
        });
        return solved(std::move(s), {c->second});
      }
      if (shape == AddShape::SwapL || shape == AddShape::SwapR) {
        Term g = w->w.at("gamma"), cc = w->w.at("c"), dd = w->w.at("d");
        (void)g;
        Term sum = shape == AddShape::SwapL ? alg.add_term(dd, n) : alg.add_term(n, dd);
        Term h = klam(dIn, [&](const Term& q) {
          Term merged = shape == AddShape::SwapL
                            ? mk_app(z_at(dd, n), mk_pair(mk_proj(0, mk_proj(1, q)), mk_proj(0, q)))
                            : mk_app(z_at(n, dd), mk_pair(mk_proj(0, q), mk_proj(0, mk_proj(1, q))));
          return mk_pair(merged, mk_proj(1, mk_proj(1, q)));
        });
        auto c = S.solve({TpKind::BiTP, Fof(sum, T), Fof(sum, U), dimage(h, p.domain)});
        if (!c) return ApplyResult::failed();
        Term fc = c->first.f;
        TpSolution s;
        s.theta = c->first.theta;
        s.Z = pred_star(Fof(dd, T), c->first.Z);
        s.R = pred_star(Fof(cc, U), c->first.R);
        s.f = klam(pair_sort(aSrc, s.Z->abst), [&](const Term& q) {
          Term hx = apply_simp(h, q);
          Term yr = apply_simp(fc, hx);
          return mk_let("yr", yr, [&] {
            Term yrv = mk_bvar(0, yr->sort);
            Term sp = shape == AddShape::SwapL ? mk_app(s_at(m, cc), mk_proj(0, yrv))
                                               : mk_app(s_at(cc, m), mk_proj(0, yrv));
            return mk_let("sp", sp, [&] {
              Term spv = mk_bvar(0, sp->sort);
              Term yb = shape == AddShape::SwapL ? mk_proj(0, spv) : mk_proj(1, spv);
              Term yc = shape == AddShape::SwapL ? mk_proj(1, spv) : mk_proj(0, spv);
              return mk_pair(yb, mk_pair(yc, mk_proj(1, mk_bvar(1, yr->sort))));
            }());
          }());
        });
        return solved(std::move(s), {c->second});
      }
      if (shape == AddShape::Inner) {  // n = d + m + c
        Term dd = w->w.at("delta"), cc = w->w.at("delta2");
        Term mc = alg.add_term(m, cc);
        auto c = S.solve({TpKind::BiTP, Fof(m, T), Fof(m, U),
                          dimage(klam(dIn,
                                      [&](const Term& q) {
                                        Term sp1 = mk_app(s_at(dd, mc), mk_proj(0, q));
                                        Term sp2 = mk_app(s_at(m, cc), mk_proj(1, sp1));
                                        return mk_pair(mk_proj(0, sp2), mk_proj(1, q));
                                      }),
                                 p.domain)});
        if (!c) return ApplyResult::failed();
        Term fc = c->first.f;
        TpSolution s;
        s.theta = c->first.theta;
        s.Z = c->first.Z;
        s.R = pred_star(Fof(dd, T), pred_star(Fof(cc, T), c->first.R));
        s.f = klam(pair_sort(aSrc, s.Z->abst), [&](const Term& q) {
          Term sp1 = mk_app(s_at(dd, mc), mk_proj(0, q));
          return mk_let("sp1", sp1, [&] {
            Term sp1v = mk_bvar(0, sp1->sort);
            Term sp2 = mk_app(s_at(m, cc), mk_proj(1, sp1v));
            return mk_let("sp2", sp2, [&] {
              Term sp2v = mk_bvar(0, sp2->sort);
              Term yr = apply_simp(fc, mk_pair(mk_proj(0, sp2v), mk_proj(1, q)));
              return mk_let(
                  "yr", yr,
                  mk_pair(mk_proj(0, mk_bvar(0, yr->sort)),
                          mk_pair(mk_proj(0, mk_bvar(2, sp1->sort)),
                                  mk_pair(mk_proj(1, mk_bvar(1, sp2->sort)),
                                          mk_proj(1, mk_bvar(0, yr->sort))))));
            }());
          }());
        });
        return solved(std::move(s), {c->second});
      }
      // TwoSided: d + n + c = m
      Term dd = w->w.at("delta2"), cc = w->w.at("delta");
      Term nc = alg.add_term(n, cc);
      Term h = klam(pair_sort(aSrc, any_sort()), [&](const Term& q) {
        Term xd = mk_proj(0, mk_proj(1, q));
        Term xc = mk_proj(0, mk_proj(1, mk_proj(1, q)));
        Term wz = mk_proj(1, mk_proj(1, mk_proj(1, q)));
        Term inner = mk_app(z_at(n, cc), mk_pair(mk_proj(0, q), xc));
        Term merged = mk_app(z_at(dd, nc), mk_pair(xd, inner));
        return mk_pair(merged, wz);
      });
      auto c = S.solve({TpKind::BiTP, Fof(m, T), Fof(m, U), dimage(h, p.domain)});
      if (!c) return ApplyResult::failed();
      TpSolution s;
      s.theta = c->first.theta;
      s.Z = pred_star(Fof(dd, T), pred_star(Fof(cc, T), c->first.Z));
      s.R = c->first.R;
      s.f = compose_f(c->first.f, h, pair_sort(aSrc, s.Z->abst));
      return solved(std::move(s), {c->second});
    };
    out.push_back(r);
  }
  return out;
}

std::vector<TpRule> sa_rules(const Registry& reg, const PropertyInstance& inst) {
  std::vector<TpRule> out;
  const PredicateDef* d = reg.find_pred(inst.op);
  if (!d || d->sig.algebra.empty() || d->sig.scalar_sorts.size() != 1) return out;
  std::string op = inst.op;
  std::string algname = d->sig.algebra;
  Term gw = inst.w.at("g"), hw = inst.w.at("h");

  for (bool left : {true, false}) {
    TpRule r = base_rule(left ? "SA_L" : "SA_R", left ? RK_SA_L : RK_SA_R, op);
    r.apply = [op, algname, gw, hw, left](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (!is_opapp(p.source, op) || !is_opapp(p.target, op)) return ApplyResult::no_match();
      const ScalarAlgebra& alg = builtin_algebra(algname);
      if (!alg.solve_mul) return ApplyResult::no_match();
      Term n = simplify(p.source->scalars[0]);
      Term m = simplify(p.target->scalars[0]);
      if (has_evar(n) || has_evar(m)) return ApplyResult::no_match();
      if (term_eq(n, m)) return ApplyResult::no_match();
      Pred T = p.source->preds[0], U = p.target->preds[0];
      auto Fof = [&](const Term& sc, const Pred& A) { return S.reg.make_op(op, {sc}, {A}); };
      Sort aSrc = p.source->abst;
      if (left) {  // n = m * delta: expand the source
        auto delta = alg.solve_mul(n, m, MulShape::Left, S.prover);
        if (!delta) return ApplyResult::no_match();
        Term hmd = apply_simp(hw, mk_pair(m, *delta));
        Term ad = m1_of(hmd, aSrc, any_sort());
        auto c = S.solve({TpKind::BiTP, Fof(m, Fof(*delta, T)), p.target,
                          dimage(ad, p.domain)});
        if (!c) return ApplyResult::failed();
        TpSolution s;
        s.theta = c->first.theta;
        s.Z = c->first.Z;
        s.R = c->first.R;
        s.f = compose_f(c->first.f, m1_of(hmd, aSrc, s.Z->abst), pair_sort(aSrc, s.Z->abst));
        return solved(std::move(s), {c->second});
      }
      // right: n * delta = m: expand the target
      auto delta = alg.solve_mul(n, m, MulShape::Right, S.prover);
      if (!delta) return ApplyResult::no_match();
      auto c = S.solve({TpKind::BiTP, p.source, Fof(n, Fof(*delta, U)), p.domain});
      if (!c) return ApplyResult::failed();
      Term gnd = apply_simp(gw, mk_pair(n, *delta));
      Term fc = c->first.f;
      TpSolution s;
      s.theta = c->first.theta;
      s.Z = c->first.Z;
      s.R = c->first.R;
      Sort in = pair_sort(aSrc, s.Z->abst);
      s.f = klam(in, [&](const Term& q) {
        Term yr = mk_app(fc, q);
        return mk_let("yr", yr,
                      mk_pair(apply_simp(gnd, mk_proj(0, mk_bvar(0, yr->sort))),
                              mk_proj(1, mk_bvar(0, yr->sort))));
      });
      return solved(std::move(s), {c->second});
    };
    out.push_back(r);
  }
  return out;
}

std::vector<TpRule> s1_rules(const Registry& reg, const PropertyInstance& inst) {
  std::vector<TpRule> out;
  const PredicateDef* d = reg.find_pred(inst.op);
  if (!d || d->sig.algebra.empty() || d->sig.scalar_sorts.size() != 1) return out;
  std::string op = inst.op;
  std::string algname = d->sig.algebra;
  Term gw = inst.w.at("g"), hw = inst.w.at("h");
  // operators over indexed predicate families substitute the reserved index
  // variable when the wrapper is peeled (see bigstar)
  Term isub = inst.w.count("isub") ? inst.w.at("isub") : Term{};

  TpRule i = base_rule("S1_I", RK_S1_I, op);
  i.apply = [op, algname, hw](TpSolver& S, const TpProblem& p) -> ApplyResult {
    if (!is_opapp(p.target, op) || is_opapp(p.source, op)) return ApplyResult::no_match();
    if (p.source->kind == PredKind::Emp) return ApplyResult::no_match();
    const ScalarAlgebra& alg = builtin_algebra(algname);
    Term m = simplify(p.target->scalars[0]);
    auto eps = alg.pick_identity(m, S.prover);
    if (!eps) return ApplyResult::no_match();
    Pred wrapped = S.reg.make_op(op, {*eps}, {p.source});
    auto c = S.solve({TpKind::BiTP, wrapped, p.target, p.domain});
    if (!c) return ApplyResult::failed();
    Term heps = apply_simp(hw, *eps);
    Sort aSrc = p.source->abst;
    TpSolution s;
    s.theta = c->first.theta;
    s.Z = c->first.Z;
    s.R = c->first.R;
    s.f = compose_f(c->first.f, m1_of(heps, aSrc, s.Z->abst), pair_sort(aSrc, s.Z->abst));
    return solved(std::move(s), {c->second});
  };
  out.push_back(i);

  TpRule e = base_rule("S1_E", RK_S1_E, op);
  e.apply = [op, algname, gw, isub](TpSolver& S, const TpProblem& p) -> ApplyResult {
    if (!is_opapp(p.source, op) || is_opapp(p.target, op)) return ApplyResult::no_match();
    const ScalarAlgebra& alg = builtin_algebra(algname);
    Term n = simplify(p.source->scalars[0]);
    if (!alg.is_identity(n, S.prover)) return ApplyResult::no_match();
    Term geps = apply_simp(gw, n);
    Sort aSrc = p.source->abst;
    Term ad = m1_of(geps, aSrc, any_sort());
    Pred inner = p.source->preds[0];
    if (isub) inner = pred_subst_fvar(inner, "_i", simplify(apply_simp(isub, n)));
    auto c = S.solve({TpKind::BiTP, inner, p.target, dimage(ad, p.domain)});
    if (!c) return ApplyResult::failed();
    TpSolution s;
    s.theta = c->first.theta;
    s.Z = c->first.Z;
    s.R = c->first.R;
    s.f = compose_f(c->first.f, m1_of(geps, aSrc, s.Z->abst), pair_sort(aSrc, s.Z->abst));
    return solved(std::move(s), {c->second});
  };
  out.push_back(e);
  return out;
}

std::vector<TpRule> s1p_rules(const Registry& reg, const PropertyInstance& inst) {
  std::vector<TpRule> out;
  const PredicateDef* d = reg.find_pred(inst.op);
  const PredicateDef* d2 = reg.find_pred(inst.op2);
  if (!d || !d2 || d->sig.algebra.empty()) return out;
  std::string op = inst.op, op2 = inst.op2;
  std::string algname = d->sig.algebra;
  Term fw = inst.w.at("f"), gw = inst.w.at("g"), pmap = inst.w.at("pmap");
  size_t n2 = d2->sig.scalar_sorts.size();

  auto target_scalars = [n2, pmap](TpSolver& S, const Term& eps) -> std::vector<Term> {
    Term pm = simplify(apply_simp(pmap, eps));
    std::vector<Term> scs;
    if (n2 == 1) {
      scs.push_back(pm);
    } else {
      for (size_t i = 0; i < n2; ++i) scs.push_back(simplify(mk_proj((int)i, pm)));
    }
    (void)S;
    return scs;
  };

  TpRule e = base_rule("S1'_E", RK_S1p_E, op);
  e.detail = op + "->" + op2;
  e.apply = [op, op2, algname, fw, target_scalars](TpSolver& S,
                                                   const TpProblem& p) -> ApplyResult {
    if (!is_opapp(p.source, op) || !is_opapp(p.target, op2)) return ApplyResult::no_match();
    const ScalarAlgebra& alg = builtin_algebra(algname);
    Term n = simplify(p.source->scalars[0]);
    if (has_evar(n) || !alg.is_identity(n, S.prover)) return ApplyResult::no_match();
    Pred G = S.reg.make_op(op2, target_scalars(S, n), {p.source->preds[0]});
    Term feps = apply_simp(fw, n);
    Sort aSrc = p.source->abst;
    auto c = S.solve({TpKind::BiTP, G, p.target,
                      dimage(m1_of(feps, aSrc, any_sort()), p.domain)});
    if (!c) return ApplyResult::failed();
    TpSolution s;
    s.theta = c->first.theta;
    s.Z = c->first.Z;
    s.R = c->first.R;
    s.f = compose_f(c->first.f, m1_of(feps, aSrc, s.Z->abst), pair_sort(aSrc, s.Z->abst));
    return solved(std::move(s), {c->second});
  };
  out.push_back(e);

  if (inst.w.count("pmap_inv")) {
    Term pinv = inst.w.at("pmap_inv");
    TpRule i = base_rule("S1'_I", RK_S1p_I, op);
    i.detail = op2 + "->" + op;
    i.apply = [op, op2, gw, pinv](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (!is_opapp(p.source, op2) || !is_opapp(p.target, op)) return ApplyResult::no_match();
      Term param = p.source->scalars.size() == 1 ? p.source->scalars[0]
                                                 : mk_tuple(p.source->scalars);
      Term eps = simplify(apply_simp(pinv, param));
      Pred wrapped = S.reg.make_op(op, {eps}, {p.source->preds[0]});
      Term geps = apply_simp(gw, eps);
      Sort aSrc = p.source->abst;
      auto c = S.solve({TpKind::BiTP, wrapped, p.target,
                        dimage(m1_of(geps, aSrc, any_sort()), p.domain)});
      if (!c) return ApplyResult::failed();
      TpSolution s;
      s.theta = c->first.theta;
      s.Z = c->first.Z;
      s.R = c->first.R;
      s.f = compose_f(c->first.f, m1_of(geps, aSrc, s.Z->abst), pair_sort(aSrc, s.Z->abst));
      return solved(std::move(s), {c->second});
    };
    out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<TpRule> instantiate_templates(const Registry& reg, const PropertyInstance& inst) {
  switch (inst.kind) {
    case PropKind::S0: return s0_rules(reg, inst);
    case PropKind::TF: return {tf_rule(inst)};
    case PropKind::SH: {
      auto r = sh_rule(reg, inst);
      if (r) return {*r};
      return {};
    }
    case PropKind::SD: return sd_rules(reg, inst);
    case PropKind::SA: return sa_rules(reg, inst);
    case PropKind::S1: return s1_rules(reg, inst);
    case PropKind::S1p: return s1p_rules(reg, inst);
    default: return {};  // IE and Tr feed the entailment engine, not the TP solver
  }
}

}  // namespace slr
