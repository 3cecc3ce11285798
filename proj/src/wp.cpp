#include "slr/wp.hpp"

#include <chrono>

#include "slr/simplify.hpp"
#include "slr/stdlib.hpp"

namespace slr {

Prog prog_op(const std::string& op, Term arg, std::vector<Prog> subs, const std::string& loc) {
  auto n = std::make_shared<ProgNode>();
  n->op = op;
  n->arg = std::move(arg);
  n->subs = std::move(subs);
  n->loc = loc;
  return n;
}

Prog prog_seq(Prog c1, Prog c2, const std::string& loc) {
  auto n = std::make_shared<ProgNode>();
  n->kind = PKind::Seq;
  n->c1 = std::move(c1);
  n->c2 = std::move(c2);
  n->loc = loc;
  return n;
}

Prog prog_if(Term cond_arg, Prog then_b, Prog else_b, const std::string& loc) {
  auto n = std::make_shared<ProgNode>();
  n->op = "if";
  n->arg = std::move(cond_arg);
  n->subs = {std::move(then_b), std::move(else_b)};
  n->loc = loc;
  return n;
}

Prog prog_while(Term cond, Assertion invariant, Prog body, const std::string& loc) {
  auto n = std::make_shared<ProgNode>();
  n->op = "while";
  n->cond = std::move(cond);
  n->invariant = std::move(invariant);
  n->subs = {std::move(body)};
  n->arg = mk_fvar("$env", any_sort());
  n->loc = loc;
  return n;
}

Prog prog_call(const std::string& callee, Term arg, const std::string& loc) {
  auto n = std::make_shared<ProgNode>();
  n->op = "call";
  n->callee = callee;
  n->arg = std::move(arg);
  n->loc = loc;
  return n;
}

Term prog_arg_at(const Term& tmpl, const Term& env) {
  return simplify(subst_fvar(tmpl, "$env", env));
}

// --- wp rule set -----------------------------------------------------------------

void WpSet::register_rule(const WpRule& r) {
  FragmentClass c = classify(r.pre_template);
  if (c != FragmentClass::StateS && c != FragmentClass::GoalG)
    throw FragmentError("wp rule for " + r.op + " leaves the goal fragment: " +
                        show_assertion(r.pre_template));
  rules.push_back(r);
}

std::vector<const WpRule*> WpSet::rules_for(const std::string& op) const {
  std::vector<const WpRule*> out;
  for (auto& r : rules)
    if (r.op == op) out.push_back(&r);
  return out;
}

namespace {

Sort key_s() { return abstract_sort("key"); }
Sort addr_s() { return list_sort(key_s()); }

Assertion psi_hole(const Term& t) { return a_pred(pred_atom("$psi", t->sort), t); }

Term uvar(const Sort& s) { return mk_fvar("$u", s); }

}  // namespace

WpSet builtin_wp_rules() {
  WpSet w;
  Sort val = int_sort();

  {  // pure(e): the result is the evaluated argument
    WpRule r;
    r.op = "pure";
    r.pre_template = psi_hole(uvar(any_sort()));
    r.note = "value computation";
    w.register_rule(r);
  }
  {  // skip
    WpRule r;
    r.op = "skip";
    r.pre_template = psi_hole(mk_unit());
    w.register_rule(r);
  }
  {  // abort: no terminating executions
    WpRule r;
    r.op = "abort";
    r.pre_template = a_top();
    w.register_rule(r);
  }
  {  // load(addr)
    WpRule r;
    r.op = "load";
    Sort es = any_sort();
    Term x = mk_fvar("?x", es);
    Pred T = pred_atom("?P", es);
    Term addr = uvar(addr_s());
    Pred ref = pred_op("Ref", {addr}, {T}, es);
    Term v = mk_fvar("!v", val);
    Pred valp = pred_op("val", {v}, {T}, es);
    Assertion cont = a_forall(
        "!v", val,
        a_wand(a_star(a_pred(ref, x), a_pred(valp, x)), psi_hole(v)));
    r.pre_template = a_star(a_pred(ref, x), cont);
    r.note = "heap read";
    w.register_rule(r);
  }
  {  // store(addr, value)
    WpRule r;
    r.op = "store";
    Sort es = any_sort();
    Term u = uvar(pair_sort(addr_s(), val));
    Term addr = mk_proj(0, u);
    Term stored = mk_proj(1, u);
    Term x = mk_fvar("?x", es);
    Term y = mk_fvar("?y", es);
    Pred T = pred_atom("?P", es);
    Pred U = pred_atom("?Q", es);
    Pred ref_t = pred_op("Ref", {addr}, {T}, es);
    Pred val_u = pred_op("val", {stored}, {U}, es);
    Pred ref_u = pred_op("Ref", {addr}, {U}, es);
    r.pre_template = a_star(
        a_pred(ref_t, x),
        a_star(a_pred(val_u, y), a_wand(a_pred(ref_u, y), psi_hole(mk_unit()))));
    r.note = "heap write";
    w.register_rule(r);
  }
  {  // alloc(): one fresh cell, zero-initialized
    WpRule r;
    r.op = "alloc";
    Term b = mk_fvar("!b", int_sort());
    Pred ref = pred_op("Ref", {mk_list({mk_con("ik", {b}, key_s())}, key_s())},
                       {pred_atom("IntV", int_sort())}, int_sort());
    r.pre_template =
        a_forall("!b", int_sort(), a_wand(a_pred(ref, mk_int(0)), psi_hole(b)));
    r.note = "allocation quantifies over the chosen block";
    w.register_rule(r);
  }
  {  // free(addr)
    WpRule r;
    r.op = "free";
    Sort es = any_sort();
    Term x = mk_fvar("?x", es);
    Pred T = pred_atom("?P", es);
    Pred ref = pred_op("Ref", {uvar(addr_s())}, {T}, es);
    r.pre_template = a_star(a_pred(ref, x), psi_hole(mk_unit()));
    r.note = "ownership consumed";
    w.register_rule(r);
  }
  {  // if(ct, cf)(b): semantic scrutinee
    WpRule r;
    r.op = "if";
    Term P = mk_con("truthy", {uvar(any_sort())}, bool_sort());
    r.pre_template =
        a_and(a_implies(a_pure(P), a_pred(pred_atom("$wp0", any_sort()), mk_fvar("$env", any_sort()))),
              a_implies(a_pure(mk_not(P)),
                        a_pred(pred_atom("$wp1", any_sort()), mk_fvar("$env", any_sort()))));
    r.note = "pure scrutinee";
    w.register_rule(r);
  }
  {  // overload: P :: val_b(BoolV) ** ((P -> wp ct) /\ (!P -> wp cf))
    WpRule r;
    r.op = "if";
    Term P = mk_fvar("?b", bool_sort());
    Pred valb = pred_op("val", {uvar(int_sort())}, {pred_atom("BoolV", bool_sort())}, bool_sort());
    Assertion branches =
        a_and(a_implies(a_pure(P), a_pred(pred_atom("$wp0", any_sort()), mk_fvar("$env", any_sort()))),
              a_implies(a_pure(mk_not(P)),
                        a_pred(pred_atom("$wp1", any_sort()), mk_fvar("$env", any_sort()))));
    r.pre_template = a_star(a_pred(valb, P), branches);
    r.note = "boolean scrutinee matched against a value fact";
    w.register_rule(r);
  }
  return w;
}

// --- transformer -------------------------------------------------------------------

namespace {

Term rename_fvar_rigid(const Term& t, const std::string& from, const std::string& to) {
  // per-occurrence rename preserving each occurrence's sort
  std::function<Term(const Term&)> go = [&](const Term& x) -> Term {
    if (x->kind == TermKind::FVar && x->name == from) return mk_fvar(to, x->sort, true);
    if (x->args.empty()) return x;
    std::vector<Term> kids;
    kids.reserve(x->args.size());
    bool ch = false;
    for (auto& a : x->args) {
      Term k = go(a);
      ch |= k.get() != a.get();
      kids.push_back(std::move(k));
    }
    if (!ch) return x;
    auto n = std::make_shared<TermNode>(*x);
    n->args = std::move(kids);
    return n;
  };
  return go(t);
}

struct TemplateInst {
  EntailSession& ses;
  Verifier& vf;
  std::map<std::string, Term> fresh_terms;
  std::map<std::string, Pred> fresh_preds;
  std::map<std::string, std::string> fixed_names;

  const std::string& fixed_for(const std::string& n) {
    auto it = fixed_names.find(n);
    if (it == fixed_names.end())
      it = fixed_names.emplace(n, n.substr(1) + "^" + std::to_string(vf.fresh_ctr++)).first;
    return it->second;
  }

  Term inst_term(const Term& t, const Term& u, const Term& env) {
    Term r = subst_fvar(t, "$u", u);
    r = subst_fvar(r, "$env", env);
    std::set<std::string> fv;
    collect_fvars(r, fv);
    for (auto& n : fv) {
      if (n.rfind("?", 0) == 0) {
        auto it = fresh_terms.find(n);
        if (it == fresh_terms.end())
          it = fresh_terms.emplace(n, ses.evars.fresh(any_sort())).first;
        r = subst_fvar(r, n, it->second);
      } else if (n.rfind("!", 0) == 0) {
        r = rename_fvar_rigid(r, n, fixed_for(n));
      }
    }
    return r;
  }
};

}  // namespace

std::optional<Assertion> Verifier::wp(EntailSession& ses, const Prog& c, const Term& u,
                                      const PostFn& psi, VerifyReport& rep) {
  if (c->kind == PKind::Seq) {
    // wp(c1 >>= c2){psi} = wp(c1){v. wp(c2 (u,v)){psi}}
    PostFn mid = [&, u](const Term& v) -> Assertion {
      auto inner = wp(ses, c->c2, simplify(mk_pair(u, v)), psi, rep);
      if (!inner) throw FragmentError("wp failed in sequence tail");
      return *inner;
    };
    try {
      return wp(ses, c->c1, u, mid, rep);
    } catch (const FragmentError&) {
      return std::nullopt;
    }
  }

  const std::string& op = c->op;
  Term argv = c->arg ? prog_arg_at(c->arg, u) : u;

  if (op == "call") {
    auto it = procs.find(c->callee);
    if (it == procs.end()) {
      rep.blocking = "no specification for procedure " + c->callee;
      return std::nullopt;
    }
    const ProcSpec& ps = it->second;
    Assertion pre = asubst(ps.pre, ps.arg_name, argv);
    std::string rv = "ret^" + std::to_string(fresh_ctr++);
    Assertion post = asubst(asubst(ps.post, ps.arg_name, argv), "ret", mk_fvar(rv, ps.ret_sort, true));
    Assertion cont = a_forall(rv, ps.ret_sort, a_wand(post, psi(mk_fvar(rv, ps.ret_sort, true))));
    return a_star(pre, cont);
  }

  if (op == "while") {
    // {Inv} while {v. Inv(v) /\ !cond(v)}; the body triple and the exit
    // entailment are side obligations checked by verify_triple's caller
    Assertion inv_now = asubst(c->invariant, "$env", u);
    std::string ev = "loop^" + std::to_string(fresh_ctr++);
    Term evv = mk_fvar(ev, any_sort(), true);
    Assertion inv_out = asubst(c->invariant, "$env", evv);
    Term cond_out = prog_arg_at(c->cond, evv);
    Assertion cont = a_forall(
        ev, any_sort(),
        a_implies(a_pure(simplify(mk_not(cond_out))), a_wand(inv_out, psi(evv))));
    // body preservation is queued for the triple pipeline
    pending_loops.push_back(c);
    return a_star(inv_now, cont);
  }

  auto rules = wps.rules_for(op);
  if (rules.empty()) {
    rep.blocking = "operator without a wp rule: " + op;
    return std::nullopt;
  }
  std::optional<Assertion> acc;
  for (auto* r : rules) {
    TemplateInst ti{ses, *this};
    // instantiate the template bottom-up: $psi/$wpN holes and marker vars
    std::function<Assertion(const Assertion&)> go = [&](const Assertion& a) -> Assertion {
      switch (a->kind) {
        case AKind::PredApp: {
          if (a->pred->kind == PredKind::Atom && a->pred->name == "$psi")
            return psi(ti.inst_term(a->term, argv, u));
          if (a->pred->kind == PredKind::Atom && a->pred->name.rfind("$wp", 0) == 0) {
            size_t ix = (size_t)std::stoi(a->pred->name.substr(3));
            if (ix >= c->subs.size()) throw FragmentError("wp hole without sub-program");
            auto sub = wp(ses, c->subs[ix], u, psi, rep);
            if (!sub) throw FragmentError("wp failed in branch");
            return *sub;
          }
          // fresh predicate markers
          Pred p = a->pred;
          std::function<Pred(const Pred&)> pf = [&](const Pred& q) -> Pred {
            if (q->kind == PredKind::Atom && q->name.rfind("?", 0) == 0) {
              auto it = ti.fresh_preds.find(q->name);
              if (it == ti.fresh_preds.end())
                it = ti.fresh_preds.emplace(q->name, ses.evars.fresh_pred(q->abst)).first;
              return it->second;
            }
            if (q->preds.empty()) return q;
            auto n = std::make_shared<PredNode>(*q);
            for (auto& sp : n->preds) sp = pf(sp);
            return n;
          };
          p = pf(p);
          // scalar parameters may mention $u / markers
          auto n = std::make_shared<PredNode>(*p);
          for (auto& sc : n->scalars) sc = ti.inst_term(sc, argv, u);
          return a_pred(Pred(n), ti.inst_term(a->term, argv, u));
        }
        case AKind::Pure:
          return a_pure(ti.inst_term(a->term, argv, u));
        case AKind::Satisfies:
          return a_satisfies(ti.inst_term(a->term, argv, u), go(a->kids[0]));
        case AKind::Forall:
        case AKind::Exists: {
          auto n = std::make_shared<ANode>(*a);
          if (a->binder.rfind("!", 0) == 0) n->binder = ti.fixed_for(a->binder);
          n->kids = {go(a->kids[0])};
          return n;
        }
        default: {
          if (a->kids.empty()) return a;
          auto n = std::make_shared<ANode>(*a);
          for (auto& k : n->kids) k = go(k);
          return n;
        }
      }
    };
    Assertion inst;
    try {
      inst = assertion_simplify(go(r->pre_template));
    } catch (const FragmentError&) {
      return std::nullopt;
    }
    acc = acc ? a_or(*acc, inst) : inst;  // overloads combine by disjunction
  }
  return acc;
}

VerifyReport Verifier::verify_triple(const ProcSpec& spec) {
  VerifyReport rep;
  auto t0 = std::chrono::steady_clock::now();
  EntailSession ses(reg);
  pending_loops.clear();
  Term env = mk_fvar(spec.arg_name, spec.arg_sort);
  PostFn psi = [&](const Term& v) -> Assertion {
    return asubst(spec.post, "ret", v);
  };
  auto pre = wp(ses, spec.body, env, psi, rep);
  if (!pre) {
    if (rep.blocking.empty()) rep.blocking = "wp transformer failed";
    return rep;
  }
  rep.wp_pre = assertion_simplify(*pre);
  FragmentClass fc = classify(rep.wp_pre);
  if (fc != FragmentClass::StateS && fc != FragmentClass::GoalG) {
    rep.blocking = "wp output escaped the goal fragment";
    return rep;
  }
  rep.wp_ok = true;

  auto run_entail = [&](EntailSession& s2, const Assertion& h, const Assertion& g,
                        const std::string& site) {
    auto r = s2.prove_entailment(h, g);
    rep.rule_apps += r.rule_apps;
    rep.connectives += r.connectives;
    for (auto& e : r.events) rep.events.push_back(e);
    for (auto& t : r.tp_trees) rep.tp_trees.push_back(t);
    rep.biep_count += (int)r.tp_trees.size();
    if (!r.ok) {
      rep.blocking = site + ": " + r.blocking;
      return false;
    }
    if (!is_true(r.theta)) rep.obligations.push_back({site, r.theta});
    return true;
  };

  bool ok = run_entail(ses, spec.pre, rep.wp_pre, spec.name + ":requires");
  // loop side obligations: invariant preservation
  for (auto& loop : pending_loops) {
    std::string ev = "it^" + std::to_string(fresh_ctr++);
    Term itv = mk_fvar(ev, any_sort(), true);
    Assertion inv = asubst(loop->invariant, "$env", itv);
    Term guard = prog_arg_at(loop->cond, itv);
    Assertion hyp = a_and(inv, a_pure(simplify(guard)));
    EntailSession s3(reg);
    VerifyReport sub;
    PostFn keep = [&](const Term& v) { return asubst(loop->invariant, "$env", v); };
    auto body_pre = wp(s3, loop->subs[0], itv, keep, sub);
    if (!body_pre) {
      rep.blocking = spec.name + ": loop body wp failed";
      ok = false;
      break;
    }
    if (!run_entail(s3, hyp, assertion_simplify(*body_pre), spec.name + ":invariant")) {
      ok = false;
      break;
    }
  }
  rep.entailed = ok;
  Term all = mk_bool(true);
  for (auto& o : rep.obligations) all = and_simp(all, o.formula);
  rep.theta = simplify(all);
  rep.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
  return rep;
}

}  // namespace slr
