#include "slr/check.hpp"

#include <functional>

#include "slr/simplify.hpp"

namespace slr {

namespace {

struct Env {
  const FiniteModel& m;
  const Registry& reg;
  std::map<std::string, Value> fvars;

  EvalEnv eenv() const {
    EvalEnv e;
    e.universes = &m;
    e.fvars = &fvars;
    return e;
  }
  std::optional<Value> ev(const Term& t) const { return eval_term(t, eenv()); }
  std::optional<Value> app(const Value& f, const Value& x) const {
    return apply_value(f, x, eenv());
  }
  // Worlds for property validity: the heap carrier, the value worlds the big
  // PCM also contains (cell contents satisfy value refinements there), and
  // the sub-heaps reached by stripping shared path prefixes (element worlds
  // of the record-path reading).
  mutable std::vector<Value> worlds_cache;
  const std::vector<Value>& worlds() const {
    if (!worlds_cache.empty()) return worlds_cache;
    std::vector<Value> out = m.carrier;
    for (auto& v : m.universe(abstract_sort("val"))) out.push_back(v);
    auto push_unique = [&](const Value& v) {
      for (auto& o : out)
        if (value_eq(o, v)) return false;
      out.push_back(v);
      return true;
    };
    for (auto& w0 : m.carrier) {
      Value w = w0;
      while (w.k == VKind::Set && !w.elems.empty()) {
        bool share = true;
        const Value& k = w.elems[0].elems[0].elems.empty() ? w.elems[0] : w.elems[0].elems[0].elems[0];
        if (w.elems[0].elems[0].elems.empty()) break;
        for (auto& c : w.elems)
          if (c.elems[0].elems.empty() || !value_eq(c.elems[0].elems[0], k)) {
            share = false;
            break;
          }
        if (!share) break;
        auto s = heap_strip(k, w);
        if (!s) break;
        w = *s;
        if (!push_unique(w)) break;
        if (out.size() > 2000) break;
      }
    }
    worlds_cache = std::move(out);
    return worlds_cache;
  }
  bool valid_entail(const Assertion& h, const Assertion& g) const {
    return !violating_world(h, g).has_value();
  }
  std::optional<Value> violating_world(const Assertion& h, const Assertion& g) const {
    ForceCtx ctx{m, reg};
    ctx.fvars = m.term_env;
    for (auto& [k, v] : fvars) ctx.fvars[k] = v;
    for (auto& w : worlds())
      if (ctx.force(w, h) && !ctx.force(w, g)) return w;
    return std::nullopt;
  }
};

}  // namespace

TpCheckOutcome check_tp_solution_ex(const FiniteModel& m, const Registry& reg, const TpProblem& p,
                                    const TpSolution& s, const std::map<std::string, Value>& env) {
  TpCheckOutcome out;
  Env E{m, reg};
  E.fvars = m.term_env;
  for (auto& [k, v] : env) E.fvars[k] = v;
  try {
    auto theta = E.ev(s.theta);
    if (!theta || theta->k != VKind::Bool) {
      out.unverifiable = true;
      out.reason = "obligation unverifiable at this scale: " + show_term(s.theta);
      return out;
    }
    if (!theta->b) return out;  // hypothesis false: transformation claim is vacuous

    auto dom = E.ev(p.domain);
    if (!dom || dom->k != VKind::Set) {
      out.unverifiable = true;
      out.reason = "domain unverifiable: " + show_term(p.domain);
      return out;
    }
    auto fv = E.ev(s.f);
    if (!fv) {
      out.unverifiable = true;
      out.reason = "transformation function undefined";
      return out;
    }
    // D subset dom(f) is part of the hypothesis
    for (auto& d : dom->elems)
      if (!E.app(*fv, d)) return out;

    bool bi = p.kind == TpKind::BiTP;
    Pred src = bi ? pred_star(p.source, s.Z) : p.source;
    Pred tgt = bi ? pred_star(p.target, s.R) : p.target;
    for (auto& d : dom->elems) {
      Value fd = *E.app(*fv, d);
      Assertion h = a_pred(src, value_term(d, src->abst));
      Assertion g = a_pred(tgt, value_term(fd, tgt->abst));
      auto w = E.violating_world(h, g);
      if (w) {
        out.cex = Counterexample{m.name, *w,
                                 "x=" + show_value(d) + " f(x)=" + show_value(fd),
                                 show_assertion(h) + "  -/->  " + show_assertion(g)};
        return out;
      }
    }
  } catch (const EvalError& e) {
    out.unverifiable = true;
    out.reason = std::string("obligation unverifiable at this scale: ") + e.what();
  } catch (const ForceError& e) {
    out.unverifiable = true;
    out.reason = std::string("forcing unavailable: ") + e.what();
  }
  return out;
}

std::optional<Counterexample> check_tp_solution(const FiniteModel& m, const Registry& reg,
                                                const TpProblem& p, const TpSolution& s,
                                                const std::map<std::string, Value>& env) {
  return check_tp_solution_ex(m, reg, p, s, env).cex;
}

namespace {

// predicate pool usable as element refinements in property checks; includes
// field-wrapped variants so homomorphism checks see splittable elements
std::vector<Pred> atom_pool(const FiniteModel& m, const Registry& reg, bool rec_space) {
  std::vector<Pred> out;
  if (!rec_space) {
    for (auto& [name, _] : m.atom_interp) {
      Sort s = int_sort();
      auto it = m.atom_sorts.find(name);
      if (it != m.atom_sorts.end()) s = it->second;
      out.push_back(pred_atom(name, s));
    }
    if (out.size() > 3) out.resize(3);
  }
  if (reg.find_pred("IntV")) out.push_back(pred_atom("IntV", int_sort()));
  if (reg.find_pred("IncV")) out.push_back(pred_atom("IncV", int_sort()));
  if (reg.find_pred("Path") && reg.find_pred("IntV")) {
    Pred iv = pred_atom("IntV", int_sort());
    for (const char* f : {"a", "b"})
      out.push_back(reg.make_op("Path", {mk_list({mk_sym(f)}, abstract_sort("key"))}, {iv}));
  }
  if (out.size() > 6) out.resize(6);
  return out;
}

std::vector<std::vector<Value>> scalar_tuples(const FiniteModel& m,
                                              const std::vector<Sort>& sorts, int cap) {
  std::vector<std::vector<Value>> out = {{}};
  for (auto& s : sorts) {
    std::vector<Value> u = m.universe(s);
    if ((int)u.size() > cap) u.resize(cap);
    std::vector<std::vector<Value>> next;
    for (auto& pre : out)
      for (auto& v : u) {
        auto t = pre;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    out = std::move(next);
    if (out.size() > 64) out.resize(64);
  }
  return out;
}

std::vector<Term> scalar_terms(const std::vector<Value>& vs, const std::vector<Sort>& sorts) {
  std::vector<Term> out;
  for (size_t i = 0; i < vs.size(); ++i) out.push_back(value_term(vs[i], sorts[i]));
  return out;
}

Counterexample mk_cex(const FiniteModel& m, const Value& w, const std::string& what,
                      const std::string& assertion) {
  return Counterexample{m.name, w, what, assertion};
}

}  // namespace

std::optional<Counterexample> check_property(const FiniteModel& m, const Registry& reg,
                                             const PropertyInstance& inst) {
  const PredicateDef* dd = reg.find_pred(inst.op);
  if (!dd) return Counterexample{m.name, {}, "operator not declared: " + inst.op, ""};
  const OpSignature& sig = dd->sig;
  Env E{m, reg};
  E.fvars = m.term_env;

  auto W = [&](const char* key) -> Term {
    auto it = inst.w.find(key);
    if (it == inst.w.end()) throw std::runtime_error(std::string("missing witness ") + key);
    return it->second;
  };
  auto evw = [&](const Term& t) -> Value {
    auto v = E.ev(t);
    if (!v) throw EvalError("witness undefined: " + show_term(t));
    return *v;
  };

  auto pool = atom_pool(m, reg, dd->sig.rec_space);
  if (pool.empty()) pool.push_back(pred_atom("IntV", int_sort()));
  int abs_cap = 24;

  try {
    switch (inst.kind) {
      case PropKind::TF: {
        Value mw = evw(W("m"));
        Value dw = evw(W("d"));
        for (auto& T : pool)
          for (auto& U : pool) {
            if (!sort_eq(T->abst, U->abst)) continue;
            auto sc_tuples = scalar_tuples(m, sig.scalar_sorts, 4);
            for (auto& sc : sc_tuples) {
              std::vector<Term> scs = scalar_terms(sc, sig.scalar_sorts);
              Pred FT = reg.make_op(inst.op, scs, {T});
              Pred FU = reg.make_op(inst.op, scs, {U});
              std::vector<Value> fs = m.universe(fun_sort(T->abst, U->abst));
              if (fs.size() > 40) fs.resize(40);
              std::vector<Value> xs = m.universe(FT->abst);
              if ((int)xs.size() > abs_cap) xs.resize(abs_cap);
              for (auto& f : fs) {
                auto mf = E.app(mw, f);
                if (!mf) continue;
                for (auto& x : xs) {
                  auto mfx = E.app(*mf, x);
                  if (!mfx) continue;  // x outside dom(m(f))
                  auto dx = E.app(dw, x);
                  if (!dx || dx->k != VKind::Set) continue;
                  bool premise = true;
                  for (auto& e : dx->elems) {
                    auto fe = E.app(f, e);
                    if (!fe) { premise = false; break; }
                    if (!E.valid_entail(a_pred(T, value_term(e, T->abst)),
                                        a_pred(U, value_term(*fe, U->abst)))) {
                      premise = false;
                      break;
                    }
                  }
                  if (!premise) continue;
                  auto w = E.violating_world(a_pred(FT, value_term(x, FT->abst)),
                                             a_pred(FU, value_term(*mfx, FU->abst)));
                  if (w)
                    return mk_cex(m, *w, "Functor(" + inst.op + ") x=" + show_value(x),
                                  show_pred(FT) + " -> " + show_pred(FU));
                }
              }
            }
          }
        return std::nullopt;
      }
      case PropKind::SH: {
        Value sw = evw(W("s"));
        Value zw = evw(W("z"));
        for (auto& T : pool)
          for (auto& U : pool) {
            auto sc_tuples = scalar_tuples(m, sig.scalar_sorts, 4);
            for (auto& sc : sc_tuples) {
              std::vector<Term> scs = scalar_terms(sc, sig.scalar_sorts);
              Pred FT = reg.make_op(inst.op, scs, {T});
              Pred FU = reg.make_op(inst.op, scs, {U});
              Pred FTU = reg.make_op(inst.op, scs, {pred_star(T, U)});
              // merge direction
              std::vector<Value> xs = m.universe(pair_sort(FT->abst, FU->abst));
              if ((int)xs.size() > abs_cap) xs.resize(abs_cap);
              for (auto& x : xs) {
                auto zx = E.app(zw, x);
                if (!zx) continue;
                auto w = E.violating_world(
                    a_pred(pred_star(FT, FU), value_term(x, pair_sort(FT->abst, FU->abst))),
                    a_pred(FTU, value_term(*zx, FTU->abst)));
                if (w)
                  return mk_cex(m, *w, "SepHom(" + inst.op + ") merge x=" + show_value(x),
                                show_pred(FTU));
              }
              // split direction
              std::vector<Value> ys = m.universe(FTU->abst);
              if ((int)ys.size() > abs_cap) ys.resize(abs_cap);
              for (auto& y : ys) {
                auto sy = E.app(sw, y);
                if (!sy) continue;
                auto w = E.violating_world(
                    a_pred(FTU, value_term(y, FTU->abst)),
                    a_pred(pred_star(FT, FU), value_term(*sy, pair_sort(FT->abst, FU->abst))));
                if (w)
                  return mk_cex(m, *w, "SepHom(" + inst.op + ") split y=" + show_value(y),
                                show_pred(FTU));
              }
            }
          }
        return std::nullopt;
      }
      case PropKind::SA:
      case PropKind::SD: {
        const ScalarAlgebra& alg = builtin_algebra(inst.algebra.empty() ? sig.algebra : inst.algebra);
        Value gw = evw(W(inst.kind == PropKind::SA ? "g" : "s"));
        Value hw = evw(W(inst.kind == PropKind::SA ? "h" : "z"));
        std::vector<Value> ns = m.universe(sig.scalar_sorts[0]);
        if (ns.size() > 8) ns.resize(8);
        for (auto& T : pool)
          for (auto& n : ns)
            for (auto& mm : ns) {
              auto combined = inst.kind == PropKind::SA ? (alg.vmul ? alg.vmul(n, mm) : std::nullopt)
                                                        : (alg.vadd ? alg.vadd(n, mm) : std::nullopt);
              if (!combined) continue;
              Term tn = value_term(n, sig.scalar_sorts[0]);
              Term tm = value_term(mm, sig.scalar_sorts[0]);
              Term tc = value_term(*combined, sig.scalar_sorts[0]);
              if (inst.kind == PropKind::SA) {
                Pred nested = reg.make_op(inst.op, {tn}, {reg.make_op(inst.op, {tm}, {T})});
                Pred flat = reg.make_op(inst.op, {tc}, {T});
                std::vector<Value> xs = m.universe(nested->abst);
                if ((int)xs.size() > abs_cap) xs.resize(abs_cap);
                for (auto& x : xs) {
                  auto g2 = E.app(gw, v_pair(n, mm));
                  if (!g2) continue;
                  auto gx = E.app(*g2, x);
                  if (gx) {
                    auto w = E.violating_world(a_pred(nested, value_term(x, nested->abst)),
                                               a_pred(flat, value_term(*gx, flat->abst)));
                    if (w) return mk_cex(m, *w, "Assoc collapse", show_pred(nested));
                  }
                  auto h2 = E.app(hw, v_pair(n, mm));
                  if (!h2) continue;
                  auto hx = E.app(*h2, x);
                  if (hx) {
                    auto w = E.violating_world(a_pred(flat, value_term(x, flat->abst)),
                                               a_pred(nested, value_term(*hx, nested->abst)));
                    if (w) return mk_cex(m, *w, "Assoc expand", show_pred(flat));
                  }
                }
              } else {
                Pred whole = reg.make_op(inst.op, {tc}, {T});
                Pred left = reg.make_op(inst.op, {tn}, {T});
                Pred right = reg.make_op(inst.op, {tm}, {T});
                Pred parts = pred_star(left, right);
                std::vector<Value> xs = m.universe(whole->abst);
                if ((int)xs.size() > abs_cap) xs.resize(abs_cap);
                for (auto& x : xs) {
                  auto s2 = E.app(gw, v_pair(n, mm));
                  if (s2) {
                    auto sx = E.app(*s2, x);
                    if (sx) {
                      auto w = E.violating_world(a_pred(whole, value_term(x, whole->abst)),
                                                 a_pred(parts, value_term(*sx, parts->abst)));
                      if (w) return mk_cex(m, *w, "Dist split", show_pred(whole));
                    }
                  }
                }
                std::vector<Value> ys = m.universe(parts->abst);
                if ((int)ys.size() > abs_cap) ys.resize(abs_cap);
                for (auto& y : ys) {
                  auto z2 = E.app(hw, v_pair(n, mm));
                  if (!z2) continue;
                  auto zy = E.app(*z2, y);
                  if (!zy) continue;
                  auto w = E.violating_world(a_pred(parts, value_term(y, parts->abst)),
                                             a_pred(whole, value_term(*zy, whole->abst)));
                  if (w) return mk_cex(m, *w, "Dist merge", show_pred(whole));
                }
              }
            }
        return std::nullopt;
      }
      case PropKind::S1:
      case PropKind::S1p: {
        const ScalarAlgebra& alg = builtin_algebra(inst.algebra.empty() ? sig.algebra : inst.algebra);
        Value gw = evw(W(inst.kind == PropKind::S1 ? "g" : "f"));
        Value hw = evw(W(inst.kind == PropKind::S1 ? "h" : "g"));
        std::vector<Value> ns = m.universe(sig.scalar_sorts[0]);
        if (ns.size() > 10) ns.resize(10);
        for (auto& T : pool)
          for (auto& e : ns) {
            if (!alg.v_is_identity || !alg.v_is_identity(e)) continue;
            Term te = value_term(e, sig.scalar_sorts[0]);
            Pred Fe = reg.make_op(inst.op, {te}, {T});
            Pred target;
            if (inst.kind == PropKind::S1) {
              target = T;
              if (dd->sig.rec_space && reg.find_pred("__rec"))
                target = reg.make_op("__rec", {}, {T});
            } else {
              const PredicateDef* d2 = reg.find_pred(inst.op2);
              if (!d2) return Counterexample{m.name, {}, "S1' second operator missing", ""};
              auto pm = E.app(evw(W("pmap")), e);
              if (!pm) continue;
              std::vector<Term> scs2;
              if (d2->sig.scalar_sorts.size() == 1) {
                scs2.push_back(value_term(*pm, d2->sig.scalar_sorts[0]));
              } else {
                for (size_t i = 0; i < d2->sig.scalar_sorts.size(); ++i)
                  scs2.push_back(value_term(pm->elems[i], d2->sig.scalar_sorts[i]));
              }
              target = reg.make_op(inst.op2, scs2, {T});
            }
            std::vector<Value> xs = m.universe(Fe->abst);
            if ((int)xs.size() > abs_cap) xs.resize(abs_cap);
            for (auto& x : xs) {
              auto g1 = E.app(gw, e);
              if (g1) {
                auto gx = E.app(*g1, x);
                if (gx) {
                  auto w = E.violating_world(a_pred(Fe, value_term(x, Fe->abst)),
                                             a_pred(target, value_term(*gx, target->abst)));
                  if (w) return mk_cex(m, *w, "SUnit unwrap", show_pred(Fe));
                }
              }
            }
            std::vector<Value> ys = m.universe(target->abst);
            if ((int)ys.size() > abs_cap) ys.resize(abs_cap);
            for (auto& y : ys) {
              auto h1 = E.app(hw, e);
              if (!h1) continue;
              auto hy = E.app(*h1, y);
              if (!hy) continue;
              auto w = E.violating_world(a_pred(target, value_term(y, target->abst)),
                                         a_pred(Fe, value_term(*hy, Fe->abst)));
              if (w) return mk_cex(m, *w, "SUnit wrap", show_pred(Fe));
            }
          }
        return std::nullopt;
      }
      case PropKind::S0: {
        const ScalarAlgebra& alg = builtin_algebra(inst.algebra.empty() ? sig.algebra : inst.algebra);
        auto Dv = E.ev(W("D"));
        if (!Dv || Dv->k != VKind::Set) return std::nullopt;  // unbounded domain: not refutable here
        std::vector<Value> ns = m.universe(sig.scalar_sorts[0]);
        for (auto& T : pool)
          for (auto& z : ns) {
            if (!alg.v_is_zero || !alg.v_is_zero(z)) continue;
            Pred F0 = reg.make_op(inst.op, {value_term(z, sig.scalar_sorts[0])}, {T});
            for (auto& x : Dv->elems) {
              ForceCtx ctx{m, reg};
              ctx.fvars = m.term_env;
              if (!ctx.force(m.unit, a_pred(F0, value_term(x, F0->abst))))
                return mk_cex(m, m.unit, "SZero x=" + show_value(x), show_pred(F0));
            }
          }
        return std::nullopt;
      }
      case PropKind::IE_I:
      case PropKind::IE_E: {
        auto Dv = E.ev(W("D"));
        if (!Dv || Dv->k != VKind::Set) return std::nullopt;
        const PredicateDef* d = reg.find_pred(inst.op);
        if (!d) return Counterexample{m.name, {}, "operator not declared", ""};
        Pred P;
        if (inst.op == "Emp") P = pred_emp();
        else if (d->sig.n_preds == 0 && d->sig.scalar_sorts.empty())
          P = pred_atom(inst.op, d->sig.abst_sort ? d->sig.abst_sort({}, {}) : int_sort());
        else
          return std::nullopt;  // parameterized IE instances are exercised via rules
        for (auto& x : Dv->elems) {
          Assertion ap = a_pred(P, value_term(x, P->abst));
          if (inst.kind == PropKind::IE_I) {
            auto w = E.violating_world(ap, a_emp());
            if (w) return mk_cex(m, *w, "IdEleI", show_assertion(ap));
          } else {
            ForceCtx ctx{m, reg};
            ctx.fvars = m.term_env;
            if (!ctx.force(m.unit, ap)) return mk_cex(m, m.unit, "IdEleE", show_assertion(ap));
          }
        }
        return std::nullopt;
      }
      case PropKind::Tr: {
        Value leq = evw(W("leq"));
        const PredicateDef* d = reg.find_pred(inst.op);
        if (!d) return std::nullopt;
        for (auto& U : pool) {
          std::vector<Value> xs = m.universe(U->abst);
          if ((int)xs.size() > abs_cap) xs.resize(abs_cap);
          for (auto& x : xs)
            for (auto& y : xs) {
              auto r = E.app(leq, v_pair(x, y));
              if (!r || r->k != VKind::Bool || !r->b) continue;
              auto w = E.violating_world(a_pred(U, value_term(x, U->abst)),
                                         a_pred(U, value_term(y, U->abst)));
              if (w) return mk_cex(m, *w, "Trans", show_pred(U));
            }
        }
        return std::nullopt;
      }
    }
  } catch (const EvalError&) {
    return std::nullopt;  // checked up to the evaluable bound
  } catch (const ForceError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

ThetaVerdict eval_theta(const FiniteModel& m, const Registry& reg, const Term& theta,
                        const std::map<std::string, Value>& env) {
  (void)reg;
  Term t = simplify(theta);
  if (is_true(t)) return ThetaVerdict::True;
  if (is_false(t)) return ThetaVerdict::False;
  std::map<std::string, Value> fvars = m.term_env;
  for (auto& [k, v] : env) fvars[k] = v;

  std::set<int> evars;
  collect_evars(t, evars);
  std::vector<int> eids(evars.begin(), evars.end());
  if (eids.size() > 2) return ThetaVerdict::Unknown;

  EvalEnv e;
  e.universes = &m;
  e.fvars = &fvars;
  std::map<int, Value> ebind;
  e.evars = &ebind;

  std::function<ThetaVerdict(size_t)> go = [&](size_t i) -> ThetaVerdict {
    if (i == eids.size()) {
      try {
        auto v = eval_term(t, e);
        if (!v || v->k != VKind::Bool) return ThetaVerdict::Unknown;
        return v->b ? ThetaVerdict::True : ThetaVerdict::False;
      } catch (const EvalError&) {
        return ThetaVerdict::Unknown;
      }
    }
    // existential reading over a small universe
    std::vector<Value> dom = m.universe(int_sort());
    auto lists = m.universe(list_sort(int_sort()));
    dom.insert(dom.end(), lists.begin(), lists.end());
    dom.push_back(v_bool(false));
    dom.push_back(v_bool(true));
    dom.push_back(v_unit());
    bool unknown = false;
    for (auto& v : dom) {
      ebind[eids[i]] = v;
      ThetaVerdict r = go(i + 1);
      if (r == ThetaVerdict::True) return ThetaVerdict::True;
      if (r == ThetaVerdict::Unknown) unknown = true;
    }
    ebind.erase(eids[i]);
    return unknown ? ThetaVerdict::Unknown : ThetaVerdict::False;
  };
  return go(0);
}

}  // namespace slr
