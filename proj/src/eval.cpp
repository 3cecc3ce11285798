#include "slr/eval.hpp"

#include <functional>

namespace slr {

namespace {

struct Interp {
  const EvalEnv& env;
  int fuel = 4000000;

  using R = std::optional<Value>;

  R ev(const Term& t, std::vector<Value>& bs) {
    if (fuel-- <= 0) throw EvalError("evaluation fuel exhausted");
    switch (t->kind) {
      case TermKind::BVar: {
        int i = (int)bs.size() - 1 - t->idx;
        if (i < 0) throw EvalError("loose bound variable");
        return bs[i];
      }
      case TermKind::FVar: {
        if (env.fvars) {
          auto it = env.fvars->find(t->name);
          if (it != env.fvars->end()) return it->second;
        }
        throw EvalError("unbound variable " + t->name);
      }
      case TermKind::Evar: {
        if (env.evars) {
          auto it = env.evars->find(t->idx);
          if (it != env.evars->end()) return it->second;
        }
        throw EvalError("unbound evar ?e" + std::to_string(t->idx));
      }
      case TermKind::LitBool: return v_bool(t->bval);
      case TermKind::LitInt: return v_int(t->ival);
      case TermKind::LitRat: return v_rat(t->num, t->den);
      case TermKind::LitUnit: return v_unit();
      case TermKind::LitSym: return v_sym(t->name);
      case TermKind::Lam: {
        Value v;
        v.k = VKind::Closure;
        v.clo = std::make_shared<ClosureData>(ClosureData{bs, t});
        return v;
      }
      case TermKind::App: {
        R f = ev(t->args[0], bs);
        if (!f) return std::nullopt;
        R a = ev(t->args[1], bs);
        if (!a) return std::nullopt;
        return apply(*f, *a);
      }
      case TermKind::TupleT: {
        std::vector<Value> es;
        for (auto& a : t->args) {
          R v = ev(a, bs);
          if (!v) return std::nullopt;
          es.push_back(std::move(*v));
        }
        return v_tuple(std::move(es));
      }
      case TermKind::Proj: {
        R v = ev(t->args[0], bs);
        if (!v) return std::nullopt;
        if (v->k != VKind::Tuple || t->idx >= (int)v->elems.size())
          throw EvalError("projection of non-tuple value");
        return v->elems[t->idx];
      }
      case TermKind::ListLit: {
        std::vector<Value> es;
        for (auto& a : t->args) {
          R v = ev(a, bs);
          if (!v) return std::nullopt;
          es.push_back(std::move(*v));
        }
        return v_list(std::move(es));
      }
      case TermKind::SetLit: {
        std::vector<Value> es;
        for (auto& a : t->args) {
          R v = ev(a, bs);
          if (!v) return std::nullopt;
          es.push_back(std::move(*v));
        }
        return v_set(std::move(es));
      }
      case TermKind::Let: {
        R b = ev(t->args[0], bs);
        if (!b) return std::nullopt;
        bs.push_back(std::move(*b));
        R r = ev(t->args[1], bs);
        bs.pop_back();
        return r;
      }
      case TermKind::If: {
        R c = ev(t->args[0], bs);
        if (!c) return std::nullopt;
        if (c->k != VKind::Bool) throw EvalError("if condition not bool");
        return ev(t->args[c->b ? 1 : 2], bs);
      }
      case TermKind::Con:
        return con(t, bs);
    }
    throw EvalError("unreachable");
  }

  R apply(const Value& f, const Value& a) {
    if (f.k == VKind::Closure) {
      std::vector<Value> bs = f.clo->env;
      bs.push_back(a);
      return ev(f.clo->lam->args[0], bs);
    }
    if (f.k == VKind::Fun) {
      for (auto& [x, y] : f.graph->entries)
        if (value_eq(x, a)) return y;
      return std::nullopt;
    }
    throw EvalError("application of non-function value");
  }

  long long as_int(const Value& v) {
    if (v.k != VKind::Int) throw EvalError("expected integer value");
    return v.i;
  }

  R con(const Term& t, std::vector<Value>& bs) {
    const std::string& op = t->name;
    auto arg = [&](size_t i) { return ev(t->args[i], bs); };

    if (op == "undef") return std::nullopt;
    if (op == "and" || op == "or" || op == "imp") {
      R a = arg(0), b = arg(1);
      auto tb = [](const R& v) { return v && v->k == VKind::Bool && v->b; };
      auto fb = [](const R& v) { return v && v->k == VKind::Bool && !v->b; };
      if (op == "and") {
        if (fb(a) || fb(b)) return v_bool(false);
        if (tb(a) && tb(b)) return v_bool(true);
        return std::nullopt;
      }
      if (op == "or") {
        if (tb(a) || tb(b)) return v_bool(true);
        if (fb(a) && fb(b)) return v_bool(false);
        return std::nullopt;
      }
      if (fb(a) || tb(b)) return v_bool(true);
      if (tb(a) && fb(b)) return v_bool(false);
      return std::nullopt;
    }
    if (op == "not") {
      R a = arg(0);
      if (!a) return std::nullopt;
      if (a->k != VKind::Bool) throw EvalError("not of non-bool");
      return v_bool(!a->b);
    }
    if (op == "eq") {
      R a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      if (a->k == VKind::Closure || b->k == VKind::Closure) {
        if (a->k == b->k && a->clo.get() == b->clo.get()) return v_bool(true);
        throw EvalError("equality of function values is undecidable here");
      }
      return v_bool(value_eq(*a, *b));
    }
    if (op == "le" || op == "lt") {
      R a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      bool le = rat_le(*a, *b);
      bool eq = value_eq(*a, *b);
      return v_bool(op == "le" ? le : (le && !eq));
    }
    if (op == "add" || op == "sub" || op == "mul") {
      R a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      if (a->k == VKind::Int && b->k == VKind::Int) {
        if (op == "add") return v_int(a->i + b->i);
        if (op == "sub") return v_int(a->i - b->i);
        return v_int(a->i * b->i);
      }
      if ((a->k == VKind::Rat || a->k == VKind::Int) && (b->k == VKind::Rat || b->k == VKind::Int)) {
        auto norm = [](const Value& v) { return v.k == VKind::Int ? v_rat(v.i, 1) : v; };
        Value x = norm(*a), y = norm(*b);
        if (op == "add") return rat_add(x, y);
        if (op == "sub") return rat_add(x, v_rat(-y.num, y.den));
        return rat_mul(x, y);
      }
      throw EvalError(op + " on non-numeric values");
    }
    if (op == "forall" || op == "exists") {
      if (!env.universes) throw EvalError("quantifier needs a universe");
      const Term& lam = t->args[0];
      std::vector<Value> dom = env.universes->universe(lam->binder_sort);
      bool saw_undef = false;
      for (auto& v : dom) {
        std::vector<Value> bs2 = bs;
        bs2.push_back(v);
        R r = ev(lam->args[0], bs2);
        if (!r) { saw_undef = true; continue; }
        if (r->k != VKind::Bool) throw EvalError("quantifier body not bool");
        if (op == "forall" && !r->b) return v_bool(false);
        if (op == "exists" && r->b) return v_bool(true);
      }
      if (saw_undef) return std::nullopt;
      return v_bool(op == "forall");
    }
    if (op == "mem") {
      R x = arg(0), s = arg(1);
      if (!x || !s) return std::nullopt;
      if (s->k != VKind::Set) throw EvalError("mem of non-set");
      for (auto& e : s->elems)
        if (value_eq(e, *x)) return v_bool(true);
      return v_bool(false);
    }
    if (op == "subset") {
      R a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      for (auto& e : a->elems) {
        bool in = false;
        for (auto& f : b->elems)
          if (value_eq(e, f)) { in = true; break; }
        if (!in) return v_bool(false);
      }
      return v_bool(true);
    }
    if (op == "union" || op == "inter" || op == "setminus") {
      R a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      std::vector<Value> es;
      if (op == "union") {
        es = a->elems;
        es.insert(es.end(), b->elems.begin(), b->elems.end());
      } else if (op == "inter") {
        for (auto& e : a->elems)
          for (auto& f : b->elems)
            if (value_eq(e, f)) es.push_back(e);
      } else {
        for (auto& e : a->elems) {
          bool in = false;
          for (auto& f : b->elems)
            if (value_eq(e, f)) { in = true; break; }
          if (!in) es.push_back(e);
        }
      }
      return v_set(std::move(es));
    }
    if (op == "map") {
      R f = arg(0), l = arg(1);
      if (!f || !l) return std::nullopt;
      std::vector<Value> es;
      for (auto& e : l->elems) {
        R r = apply(*f, e);
        if (!r) return std::nullopt;
        es.push_back(std::move(*r));
      }
      return v_list(std::move(es));
    }
    if (op == "setof") {
      R l = arg(0);
      if (!l) return std::nullopt;
      return v_set(l->elems);
    }
    if (op == "zip") {
      R a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      size_t n = std::min(a->elems.size(), b->elems.size());
      std::vector<Value> es;
      for (size_t i = 0; i < n; ++i) es.push_back(v_pair(a->elems[i], b->elems[i]));
      return v_list(std::move(es));
    }
    if (op == "unzip") {
      R l = arg(0);
      if (!l) return std::nullopt;
      std::vector<Value> xs, ys;
      for (auto& e : l->elems) {
        if (e.k != VKind::Tuple || e.elems.size() != 2) throw EvalError("unzip of non-pairs");
        xs.push_back(e.elems[0]);
        ys.push_back(e.elems[1]);
      }
      return v_pair(v_list(std::move(xs)), v_list(std::move(ys)));
    }
    if (op == "append") {
      R a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      std::vector<Value> es = a->elems;
      es.insert(es.end(), b->elems.begin(), b->elems.end());
      return v_list(std::move(es));
    }
    if (op == "len") {
      R l = arg(0);
      if (!l) return std::nullopt;
      return v_int((long long)l->elems.size());
    }
    if (op == "lslice") {
      R l = arg(0), i = arg(1), j = arg(2);
      if (!l || !i || !j) return std::nullopt;
      long long n = (long long)l->elems.size();
      long long lo = std::clamp(as_int(*i), 0LL, n), hi = std::clamp(as_int(*j), 0LL, n);
      std::vector<Value> es;
      for (long long k = lo; k < hi; ++k) es.push_back(l->elems[k]);
      return v_list(std::move(es));
    }
    if (op == "idx") {
      R l = arg(0), i = arg(1);
      if (!l || !i) return std::nullopt;
      long long k = as_int(*i);
      if (k < 0 || k >= (long long)l->elems.size()) return std::nullopt;
      return l->elems[k];
    }
    if (op == "replicate") {
      R x = arg(0), n = arg(1);
      if (!x || !n) return std::nullopt;
      long long k = as_int(*n);
      if (k > 10000) throw EvalError("replicate too large");
      std::vector<Value> es((size_t)std::max(0LL, k), *x);
      return v_list(std::move(es));
    }
    if (op == "cons") {
      R x = arg(0), l = arg(1);
      if (!x || !l) return std::nullopt;
      std::vector<Value> es = {*x};
      es.insert(es.end(), l->elems.begin(), l->elems.end());
      return v_list(std::move(es));
    }
    if (op == "image" || op == "bindset") {
      R f = op == "image" ? arg(0) : arg(1);
      R d = op == "image" ? arg(1) : arg(0);
      if (!f || !d) return std::nullopt;
      std::vector<Value> es;
      for (auto& e : d->elems) {
        R r = apply(*f, e);
        if (!r) continue;  // partial image: skip points outside dom(f)
        if (op == "image") {
          es.push_back(std::move(*r));
        } else {
          if (r->k != VKind::Set) throw EvalError("bindset body not a set");
          es.insert(es.end(), r->elems.begin(), r->elems.end());
        }
      }
      return v_set(std::move(es));
    }
    if (op == "singleton") {
      R x = arg(0);
      if (!x) return std::nullopt;
      return v_set({*x});
    }
    if (op == "the_elem") {
      R s = arg(0);
      if (!s) return std::nullopt;
      if (s->elems.size() != 1) return std::nullopt;
      return s->elems[0];
    }
    if (op == "mapget") {
      R m = arg(0), k = arg(1);
      if (!m || !k) return std::nullopt;
      for (auto& e : m->elems)
        if (e.k == VKind::Tuple && e.elems.size() == 2 && value_eq(e.elems[0], *k))
          return e.elems[1];
      return std::nullopt;
    }
    if (op == "maprestrict") {
      R m = arg(0), ks = arg(1);
      if (!m || !ks) return std::nullopt;
      std::vector<Value> es;
      for (auto& e : m->elems) {
        if (e.k != VKind::Tuple || e.elems.size() != 2) throw EvalError("maprestrict of non-map");
        for (auto& k : ks->elems)
          if (value_eq(e.elems[0], k)) { es.push_back(e); break; }
      }
      return v_set(std::move(es));
    }
    if (op == "inj1" || op == "inj2") {
      R x = arg(0);
      if (!x) return std::nullopt;
      return op == "inj1" ? v_inj1(*x) : v_inj2(*x);
    }
    if (op == "sumcase") {
      R s = arg(0);
      if (!s) return std::nullopt;
      if (s->k != VKind::Tuple || s->elems.size() != 2 || s->elems[0].k != VKind::Sym)
        throw EvalError("sumcase of non-sum value");
      R f = s->elems[0].sym == "inj1" ? arg(1) : arg(2);
      if (!f) return std::nullopt;
      return apply(*f, s->elems[1]);
    }
    if (op == "preimage_inj1" || op == "preimage_inj2") {
      R d = arg(0);
      if (!d) return std::nullopt;
      const char* want = op == "preimage_inj1" ? "inj1" : "inj2";
      std::vector<Value> es;
      for (auto& e : d->elems)
        if (e.k == VKind::Tuple && e.elems.size() == 2 && e.elems[0].k == VKind::Sym &&
            e.elems[0].sym == want)
          es.push_back(e.elems[1]);
      return v_set(std::move(es));
    }
    if (op == "in_dom") {
      R x = arg(0), f = arg(1);
      if (!x || !f) return std::nullopt;
      return v_bool(apply(*f, *x).has_value());
    }
    if (op == "subset_dom") {
      R d = arg(0), f = arg(1);
      if (!d || !f) return std::nullopt;
      for (auto& e : d->elems)
        if (!apply(*f, e)) return v_bool(false);
      return v_bool(true);
    }
    if (op == "ivl") {
      R a = arg(0), b = arg(1);
      if (!a || !b) return std::nullopt;
      return v_pair(*a, *b);
    }
    if (op == "ivl_lo" || op == "ivl_hi") {
      R v = arg(0);
      if (!v) return std::nullopt;
      return v->elems[op == "ivl_lo" ? 0 : 1];
    }
    if (op == "arrow") {
      R a = arg(0), n = arg(1), b = arg(2);
      if (!a || !n || !b) return std::nullopt;
      return v_tuple({*a, *n, *b});
    }
    if (op == "arrow_src" || op == "arrow_len" || op == "arrow_dst") {
      R v = arg(0);
      if (!v) return std::nullopt;
      return v->elems[op == "arrow_src" ? 0 : op == "arrow_len" ? 1 : 2];
    }
    if (op == "truthy") {
      R v = arg(0);
      if (!v) return std::nullopt;
      if (v->k == VKind::Bool) return *v;
      if (v->k == VKind::Int) return v_bool(v->i != 0);
      throw EvalError("truthy on non-scalar value");
    }
    if (op == "ik" || op == "ki") {
      return arg(0);  // keys embed integers transparently
    }
    if (op == "l2s") {
      R l = arg(0);
      if (!l) return std::nullopt;
      if (l->k != VKind::List) throw EvalError("l2s of non-list");
      if (l->elems.empty()) return v_inj1(v_unit());
      return v_inj2(v_pair(l->elems[0], v_list({l->elems.begin() + 1, l->elems.end()})));
    }
    if (op == "suffixes") {
      R l = arg(0);
      if (!l) return std::nullopt;
      std::vector<Value> out;
      for (size_t i = 1; i <= l->elems.size(); ++i)
        out.push_back(v_list({l->elems.begin() + i, l->elems.end()}));
      return v_set(std::move(out));
    }
    if (op == "univ_set") {
      if (!env.universes) throw EvalError("univ_set needs a universe");
      Sort es = t->sort->kind == SortKind::Set ? t->sort->args[0] : any_sort();
      return v_set(env.universes->universe(es));
    }
    throw EvalError("unknown symbol " + op);
  }
};

}  // namespace

std::optional<Value> eval_term(const Term& t, const EvalEnv& env) {
  Interp in{env};
  std::vector<Value> bs;
  return in.ev(t, bs);
}

bool eval_bool(const Term& t, const EvalEnv& env) {
  auto v = eval_term(t, env);
  if (!v) throw EvalError("bool term evaluated to undefined: " + show_term(t));
  if (v->k != VKind::Bool) throw EvalError("term not bool: " + show_term(t));
  return v->b;
}

std::optional<Value> apply_value(const Value& f, const Value& arg, const EvalEnv& env) {
  Interp in{env};
  return in.apply(f, arg);
}

Value closure_of(const Term& lam) {
  Value v;
  v.k = VKind::Closure;
  v.clo = std::make_shared<ClosureData>(ClosureData{{}, lam});
  return v;
}

}  // namespace slr
