#include "slr/stdlib.hpp"

#include <stdexcept>

#include "slr/derive.hpp"
#include "slr/force.hpp"
#include "slr/simplify.hpp"
#include "slr/tpsolver.hpp"

namespace slr {

Sort world_sort() { return abstract_sort("world"); }
Sort val_sort() { return abstract_sort("val"); }
Sort key_sort() { return abstract_sort("key"); }
Sort path_sorts() { return list_sort(key_sort()); }

Term key_int(const Term& i) { return mk_con("ik", {i}, key_sort()); }
Term key_field(const std::string& name) { return mk_sym(name); }

Term addr_of(std::initializer_list<Term> keys) {
  std::vector<Term> ks;
  for (auto& k : keys) ks.push_back(k);
  return mk_list(std::move(ks), key_sort());
}

namespace {

// --- record-path world reading -------------------------------------------------

bool single_full_cell(const Value& w, Value& out_val) {
  if (w.k != VKind::Set || w.elems.size() != 1) return false;
  const Value& c = w.elems[0];
  if (!c.elems[0].elems.empty()) return false;
  if (!value_eq(c.elems[1].elems[0], v_rat(1, 1))) return false;
  out_val = c.elems[1].elems[1];
  return true;
}

bool rec_spatial_head(const Pred& p) {
  switch (p->kind) {
    case PredKind::Emp:
    case PredKind::Defined:  // definition bodies speak about sub-heaps directly
      return true;
    case PredKind::OpApp: {
      static const std::set<std::string> sp = {"Ref",  "Path", "Slice", "perm", "bigstar",
                                               "List", "Lseg", "Node",  "Cell"};
      return sp.count(p->name) > 0;
    }
    default:
      return false;
  }
}

// An element of a container either contributes sub-heap structure (spatial
// operators, connectives) or sits in one fully-owned cell whose value refines
// the element predicate. The connective cases recurse here so both readings
// stay aligned.
bool force_rec(ForceCtx& ctx, const Value& w, const Pred& p, const Value& x) {
  switch (p->kind) {
    case PredKind::Star: {
      if (x.k != VKind::Tuple || x.elems.size() != 2) return false;
      for (auto& [w1, w2] : ctx.m.splits(w))
        if (force_rec(ctx, w1, p->preds[0], x.elems[0]) &&
            force_rec(ctx, w2, p->preds[1], x.elems[1]))
          return true;
      return false;
    }
    case PredKind::Sum: {
      if (x.k != VKind::Tuple || x.elems.size() != 2 || x.elems[0].k != VKind::Sym) return false;
      if (x.elems[0].sym == "inj1") return force_rec(ctx, w, p->preds[0], x.elems[1]);
      return force_rec(ctx, w, p->preds[1], x.elems[1]);
    }
    default:
      break;
  }
  if (rec_spatial_head(p)) return ctx.force_pred(w, p, x);
  Value v;
  if (!single_full_cell(w, v)) return false;
  return ctx.force_pred(v, p, x);
}

std::optional<Value> strip_addr(const Value& addr, const Value& w) {
  Value cur = w;
  for (auto& k : addr.elems) {
    auto s = heap_strip(k, cur);
    if (!s) return std::nullopt;
    cur = *s;
  }
  return cur;
}

// partition w by the integer first key; all cells must fall in [lo,hi)
std::optional<std::map<long long, Value>> partition_by_index(const Value& w, long long lo,
                                                             long long hi) {
  if (w.k != VKind::Set) return std::nullopt;
  std::map<long long, std::vector<Value>> cells;
  for (auto& c : w.elems) {
    const auto& path = c.elems[0].elems;
    if (path.empty() || path[0].k != VKind::Int) return std::nullopt;
    long long k = path[0].i;
    if (k < lo || k >= hi) return std::nullopt;
    cells[k].push_back(v_pair(v_list({path.begin() + 1, path.end()}), c.elems[1]));
  }
  std::map<long long, Value> out;
  for (long long k = lo; k < hi; ++k) {
    auto it = cells.find(k);
    out[k] = it == cells.end() ? v_set({}) : v_set(it->second);
  }
  return out;
}

// --- witness-term helpers --------------------------------------------------------

Term W(const std::string& v, const Sort& s, const std::function<Term(const Term&)>& b) {
  return lam_of(v, s, b(mk_fvar(v, s)));
}

Sort ivl_sort() { return scalar_sort("interval"); }
Sort larrow_sort() { return scalar_sort("larrow"); }

Term id_lam(const Sort& s) { return W("x", s, [](const Term& x) { return x; }); }

Term scalar_pair_const_id(const Sort& sc) {
  return W("nm", pair_sort(sc, sc), [&](const Term&) { return id_lam(any_sort()); });
}

// --- property construction shorthands ---------------------------------------------

PropertyInstance prop(PropKind k, const std::string& op, std::map<std::string, Term> w,
                      const std::string& algebra = "") {
  PropertyInstance p;
  p.kind = k;
  p.op = op;
  p.w = std::move(w);
  p.algebra = algebra;
  return p;
}

void must_register(Registry& reg, PropertyInstance p, bool check) {
  auto r = reg.register_property(std::move(p), check);
  if (std::holds_alternative<Counterexample>(r)) {
    const auto& c = std::get<Counterexample>(r);
    throw std::runtime_error("stdlib property refused by oracle on " + c.model + ": " + c.detail +
                             " | " + c.assertion);
  }
}

}  // namespace

Registry make_base_registry() {
  Registry reg;
  reg.adhoc = core_adhoc_rules();
  reg.fallback = fallback_rules();
  return reg;
}

Pred mk_ref(const Registry& reg, const Term& addr, const Pred& t) {
  return reg.make_op("Ref", {addr}, {t});
}
Pred mk_path(const Registry& reg, const Term& path, const Pred& t) {
  return reg.make_op("Path", {path}, {t});
}
Pred mk_field(const Registry& reg, const std::string& field, const Pred& t) {
  return mk_path(reg, mk_list({key_field(field)}, key_sort()), t);
}
Pred mk_slice(const Registry& reg, const Term& ivl, const Pred& t) {
  return reg.make_op("Slice", {ivl}, {t});
}
Pred mk_perm(const Registry& reg, const Term& q, const Pred& t) {
  return reg.make_op("perm", {q}, {t});
}
Pred mk_val(const Registry& reg, const Term& v, const Pred& t) {
  return reg.make_op("val", {v}, {t});
}
Pred mk_bigstar(const Registry& reg, const Term& idxset, const Pred& t) {
  return reg.make_op("bigstar", {idxset}, {t});
}
Pred mk_list_pred(const Registry& reg, const Pred& t) { return reg.make_op("List", {}, {t}); }
Pred mk_lseg(const Registry& reg, const Term& arrow, const Pred& t) {
  return reg.make_op("Lseg", {arrow}, {t});
}
Pred mk_intv(const Registry& reg) {
  (void)reg;
  return pred_atom("IntV", int_sort());
}

void stdlib_load(Registry& reg, const StdlibOptions& opts) {
  if (reg.adhoc.empty()) reg.adhoc = core_adhoc_rules();
  if (reg.fallback.empty()) reg.fallback = fallback_rules();
  reg.perm_relaxed = opts.perm_relaxed;
  bool chk = opts.oracle_check;

  // ---- Emp / Id / base value refinements -------------------------------------

  {
    PredicateDef d;
    d.sig.name = "Emp";
    d.sig.abst_sort = [](auto&, auto&) { return unit_sort(); };
    reg.add_pred(d);
    Term D = mk_setlit({mk_unit()}, unit_sort());
    must_register(reg, prop(PropKind::IE_I, "Emp", {{"D", D}}), chk);
    must_register(reg, prop(PropKind::IE_E, "Emp", {{"D", D}}), chk);
  }
  {
    PredicateDef d;
    d.sig.name = "Id";
    d.sig.abst_sort = [](auto&, auto&) { return world_sort(); };
    reg.add_pred(d);
    Term leq = W("p", pair_sort(any_sort(), any_sort()), [](const Term& p) {
      return mk_eq(mk_proj(0, p), mk_proj(1, p));
    });
    must_register(reg, prop(PropKind::Tr, "Id", {{"leq", leq}}), chk);
  }
  {
    PredicateDef d;
    d.sig.name = "IntV";
    d.sig.abst_sort = [](auto&, auto&) { return int_sort(); };
    d.is_atom = true;
    d.native = [](ForceCtx&, const std::vector<Value>&, const std::vector<Pred>&, const Value& x,
                  const Value& w) { return w.k == VKind::Int && value_eq(w, x); };
    reg.add_pred(d);
  }
  {
    // shifted value refinement; distinguishes functor mappers in oracle checks
    PredicateDef d;
    d.sig.name = "IncV";
    d.sig.abst_sort = [](auto&, auto&) { return int_sort(); };
    d.is_atom = true;
    d.native = [](ForceCtx&, const std::vector<Value>&, const std::vector<Pred>&, const Value& x,
                  const Value& w) { return w.k == VKind::Int && x.k == VKind::Int && w.i == x.i + 1; };
    reg.add_pred(d);
  }
  {
    PredicateDef d;
    d.sig.name = "BoolV";
    d.sig.abst_sort = [](auto&, auto&) { return bool_sort(); };
    d.is_atom = true;
    d.native = [](ForceCtx&, const std::vector<Value>&, const std::vector<Pred>&, const Value& x,
                  const Value& w) {
      // program booleans are 0/1 cell values
      return w.k == VKind::Int && x.k == VKind::Bool && ((w.i != 0) == x.b);
    };
    reg.add_pred(d);
  }
  {
    PredicateDef d;
    d.sig.name = "Null";
    d.sig.abst_sort = [](auto&, auto&) { return unit_sort(); };
    d.is_atom = true;
    d.native = [](ForceCtx&, const std::vector<Value>&, const std::vector<Pred>&, const Value& x,
                  const Value& w) { return w.k == VKind::Int && w.i == 0 && x.k == VKind::Unit; };
    reg.add_pred(d);
  }

  {
    // internal: reads its argument in record-path element space; used by the
    // oracle to state unit laws of rec-space operators over matching readings
    PredicateDef d;
    d.sig.name = "__rec";
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return a[0]; };
    d.native = [](ForceCtx& ctx, const std::vector<Value>&, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) { return force_rec(ctx, w, ps[0], x); };
    reg.add_pred(d);
  }

  // ---- val --------------------------------------------------------------------

  {
    PredicateDef d;
    d.sig.name = "val";
    d.sig.scalar_sorts = {any_sort()};
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return a[0]; };
    d.native = [](ForceCtx& ctx, const std::vector<Value>& sc, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) {
      return value_eq(w, ctx.m.unit) && ctx.force_pred(sc[0], ps[0], x);
    };
    reg.add_pred(d);
    Term m = W("f", fun_sort(any_sort(), any_sort()), [](const Term& f) { return f; });
    Term dd = W("x", any_sort(), [](const Term& x) { return mk_setlit({x}, any_sort()); });
    must_register(reg, prop(PropKind::TF, "val", {{"m", m}, {"d", dd}}), chk);
    must_register(reg, prop(PropKind::SH, "val", {{"s", id_lam(any_sort())}, {"z", id_lam(any_sort())}}), chk);
  }

  // ---- Ref ----------------------------------------------------------------------

  {
    PredicateDef d;
    d.sig.name = "Ref";
    d.sig.rec_space = true;
    d.sig.scalar_sorts = {path_sorts()};
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return a[0]; };
    d.sig.collapses_empty = true;  // an empty record at an address owns nothing
    d.sig.empty_embed = [](auto&, const Term&) { return mk_unit(); };
    d.native = [](ForceCtx& ctx, const std::vector<Value>& sc, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) {
      auto inner = strip_addr(sc[0], w);
      if (!inner) return false;
      return force_rec(ctx, *inner, ps[0], x);
    };
    reg.add_pred(d);
    Term m = W("f", fun_sort(any_sort(), any_sort()), [](const Term& f) { return f; });
    Term dd = W("x", any_sort(), [](const Term& x) { return mk_setlit({x}, any_sort()); });
    must_register(reg, prop(PropKind::TF, "Ref", {{"m", m}, {"d", dd}}), chk);
    must_register(reg, prop(PropKind::SH, "Ref",
                            {{"s", id_lam(any_sort())}, {"z", id_lam(any_sort())}}),
                  chk);
  }

  // ---- Path (record fields; concatenation monoid as the scalar product) ----------

  {
    PredicateDef d;
    d.sig.name = "Path";
    d.sig.rec_space = true;
    d.sig.scalar_sorts = {path_sorts()};
    d.sig.algebra = "path";
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return a[0]; };
    d.sig.collapses_empty = true;
    d.sig.empty_embed = [](auto&, const Term&) { return mk_unit(); };
    d.native = [](ForceCtx& ctx, const std::vector<Value>& sc, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) {
      auto inner = strip_addr(sc[0], w);
      if (!inner) return false;
      return force_rec(ctx, *inner, ps[0], x);
    };
    reg.add_pred(d);
    Term mw = W("f", fun_sort(any_sort(), any_sort()), [](const Term& f) { return f; });
    Term dw = W("x", any_sort(), [](const Term& x) { return mk_setlit({x}, any_sort()); });
    must_register(reg, prop(PropKind::TF, "Path", {{"m", mw}, {"d", dw}}), chk);
    Term sid = W("e", path_sorts(), [&](const Term&) { return id_lam(any_sort()); });
    must_register(reg, prop(PropKind::SA, "Path",
                            {{"g", scalar_pair_const_id(path_sorts())},
                             {"h", scalar_pair_const_id(path_sorts())}},
                            "path"),
                  chk);
    must_register(reg, prop(PropKind::S1, "Path", {{"g", sid}, {"h", sid}}, "path"), chk);
    must_register(reg, prop(PropKind::SH, "Path",
                            {{"s", id_lam(any_sort())}, {"z", id_lam(any_sort())}}),
                  chk);
  }

  // ---- Slice ----------------------------------------------------------------------

  {
    PredicateDef d;
    d.sig.name = "Slice";
    d.sig.rec_space = true;
    d.sig.scalar_sorts = {ivl_sort()};
    d.sig.algebra = "interval";
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return list_sort(a[0]); };
    d.sig.collapses_empty = true;
    d.sig.empty_embed = [](const std::vector<Term>&, const Term& src) {
      return mk_replicate(mk_unit(), mk_len(src));
    };
    d.native = [](ForceCtx& ctx, const std::vector<Value>& sc, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) {
      long long lo = sc[0].elems[0].i, hi = sc[0].elems[1].i;
      if (x.k != VKind::List || (long long)x.elems.size() != hi - lo) return false;
      auto parts = partition_by_index(w, lo, hi);
      if (!parts) return false;
      for (long long k = lo; k < hi; ++k)
        if (!force_rec(ctx, (*parts)[k], ps[0], x.elems[k - lo])) return false;
      return true;
    };
    reg.add_pred(d);

    Term m = W("f", fun_sort(any_sort(), any_sort()), [](const Term& f) {
      return W("l", list_sort(any_sort()), [&](const Term& l) { return mk_map(f, l); });
    });
    Term dd = W("l", list_sort(any_sort()), [](const Term& l) { return mk_setof(l); });
    must_register(reg, prop(PropKind::TF, "Slice", {{"m", m}, {"d", dd}}), chk);

    Term sh_s = W("l", list_sort(pair_sort(any_sort(), any_sort())),
                  [](const Term& l) { return mk_unzip(l); });
    Term sh_z = W("p", pair_sort(list_sort(any_sort()), list_sort(any_sort())),
                  [](const Term& p) { return mk_zip(mk_proj(0, p), mk_proj(1, p)); });
    must_register(reg, prop(PropKind::SH, "Slice", {{"s", sh_s}, {"z", sh_z}}), chk);

    Sort ivp = pair_sort(ivl_sort(), ivl_sort());
    Term sd_s = W("nm", ivp, [&](const Term& nm) {
      Term n = mk_proj(0, nm), mm = mk_proj(1, nm);
      return W("l", list_sort(any_sort()), [&](const Term& l) {
        Term k = mk_sub(ivl_hi(n), ivl_lo(n));
        Term pairr = mk_pair(mk_lslice(l, mk_int(0), k), mk_lslice(l, k, mk_len(l)));
        return mk_if(mk_eq(ivl_hi(n), ivl_lo(mm)), pairr, mk_undef(pairr->sort));
      });
    });
    Term sd_z = W("nm", ivp, [&](const Term& nm) {
      Term n = mk_proj(0, nm), mm = mk_proj(1, nm);
      return W("p", pair_sort(list_sort(any_sort()), list_sort(any_sort())), [&](const Term& p) {
        Term app = mk_append(mk_proj(0, p), mk_proj(1, p));
        return mk_if(mk_eq(ivl_hi(n), ivl_lo(mm)), app, mk_undef(app->sort));
      });
    });
    must_register(reg, prop(PropKind::SD, "Slice", {{"s", sd_s}, {"z", sd_z}}, "interval"), chk);

    Term D0 = mk_setlit({mk_list({}, any_sort())}, list_sort(any_sort()));
    must_register(reg, prop(PropKind::S0, "Slice", {{"D", D0}}, "interval"), chk);

    Term f1 = W("e", ivl_sort(), [&](const Term&) {
      return W("l", list_sort(any_sort()), [](const Term& l) { return mk_idx(l, mk_int(0)); });
    });
    Term g1 = W("e", ivl_sort(), [&](const Term&) {
      return W("x", any_sort(), [](const Term& x) { return mk_list({x}, any_sort()); });
    });
    Term pmap = W("e", ivl_sort(), [&](const Term& e) {
      return mk_list({key_int(ivl_lo(e))}, key_sort());
    });
    Term pmap_inv = W("a", path_sorts(), [&](const Term& a) {
      Term k = mk_con("ki", {mk_idx(a, mk_int(0))}, int_sort());
      return mk_ivl(k, mk_add(k, mk_int(1)));
    });
    PropertyInstance s1p = prop(PropKind::S1p, "Slice",
                                {{"f", f1}, {"g", g1}, {"pmap", pmap}, {"pmap_inv", pmap_inv}},
                                "interval");
    s1p.op2 = "Ref";
    must_register(reg, s1p, chk);
  }

  // ---- permission modality ----------------------------------------------------------

  {
    PredicateDef d;
    d.sig.name = "perm";
    d.sig.rec_space = true;
    d.sig.scalar_sorts = {rat_sort()};
    d.sig.algebra = "nnrat";
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return a[0]; };
    d.sig.collapses_empty = true;
    d.sig.empty_embed = [](auto&, const Term&) { return mk_unit(); };
    d.native = [](ForceCtx& ctx, const std::vector<Value>& sc, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) {
      const Value& n = sc[0];
      if (n.k != VKind::Rat && n.k != VKind::Int) return false;
      long long num = n.k == VKind::Int ? n.i : n.num;
      if (num == 0) return value_eq(w, ctx.m.unit);
      Value inv = v_rat(n.k == VKind::Int ? 1 : n.den, num);
      auto scaled = heap_scale(inv, w);
      if (!scaled) return false;
      return force_rec(ctx, *scaled, ps[0], x);
    };
    reg.add_pred(d);
    Term m = W("f", fun_sort(any_sort(), any_sort()), [](const Term& f) { return f; });
    Term dd = W("x", any_sort(), [](const Term& x) { return mk_setlit({x}, any_sort()); });
    must_register(reg, prop(PropKind::TF, "perm", {{"m", m}, {"d", dd}}), chk);
    must_register(reg, prop(PropKind::SH, "perm",
                            {{"s", id_lam(any_sort())}, {"z", id_lam(any_sort())}}),
                  chk);
    must_register(reg, prop(PropKind::SA, "perm",
                            {{"g", scalar_pair_const_id(rat_sort())},
                             {"h", scalar_pair_const_id(rat_sort())}},
                            "nnrat"),
                  chk);
    Sort rp = pair_sort(rat_sort(), rat_sort());
    Term sd_s = W("nm", rp, [&](const Term&) {
      return W("x", any_sort(), [](const Term& x) { return mk_pair(x, x); });
    });
    Term sd_z = W("nm", rp, [&](const Term&) {
      return W("p", pair_sort(any_sort(), any_sort()), [](const Term& p) {
        Term fst = mk_proj(0, p);
        return mk_if(mk_eq(mk_proj(0, p), mk_proj(1, p)), fst, mk_undef(fst->sort));
      });
    });
    must_register(reg, prop(PropKind::SD, "perm", {{"s", sd_s}, {"z", sd_z}}, "nnrat"), chk);
    Term se = W("e", rat_sort(), [&](const Term&) { return id_lam(any_sort()); });
    must_register(reg, prop(PropKind::S1, "perm", {{"g", se}, {"h", se}}, "nnrat"), chk);
    must_register(reg, prop(PropKind::S0, "perm",
                            {{"D", mk_con("univ_set", {}, set_sort(any_sort()))}}, "nnrat"),
                  chk);
  }

  // ---- finite separating quantifier ---------------------------------------------------

  {
    PredicateDef d;
    d.sig.name = "bigstar";
    d.sig.rec_space = true;
    d.sig.scalar_sorts = {set_sort(int_sort())};
    d.sig.algebra = "finset";
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) {
      return set_sort(pair_sort(int_sort(), a[0]));
    };
    d.sig.collapses_empty = true;
    d.sig.empty_embed = [](const std::vector<Term>& sc, const Term&) {
      Term mkpair = W("i", int_sort(), [](const Term& i) { return mk_pair(i, mk_unit()); });
      return mk_image(mkpair, sc[0]);
    };
    // iterated separating conjunction of the indexed family: the family
    // member for index i is the predicate argument with the reserved `_i`
    // variable instantiated.
    d.native = [](ForceCtx& ctx, const std::vector<Value>& sc, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) {
      const Value& I = sc[0];
      if (I.k != VKind::Set || x.k != VKind::Set) return false;
      if (x.elems.size() != I.elems.size()) return false;
      std::map<long long, Value> xm;
      for (auto& e : x.elems) {
        if (e.k != VKind::Tuple || e.elems.size() != 2 || e.elems[0].k != VKind::Int) return false;
        xm[e.elems[0].i] = e.elems[1];
      }
      std::function<bool(size_t, const Value&)> go = [&](size_t k, const Value& h) -> bool {
        if (k == I.elems.size()) return value_eq(h, ctx.m.unit);
        long long i = I.elems[k].i;
        auto xit = xm.find(i);
        if (xit == xm.end()) return false;
        Pred inst = pred_subst_fvar(ps[0], "_i", mk_int(i));
        for (auto& [w1, w2] : ctx.m.splits(h))
          if (force_rec(ctx, w1, inst, xit->second) && go(k + 1, w2)) return true;
        return false;
      };
      for (auto& i : I.elems)
        if (i.k != VKind::Int) return false;
      return go(0, w);
    };
    reg.add_pred(d);

    Sort iset = set_sort(int_sort());
    Sort ip = pair_sort(iset, iset);
    Term dis = W("IJ", ip, [&](const Term& IJ) {
      return W("m", any_sort(), [&](const Term& m) {
        return mk_pair(mk_maprestrict(m, mk_proj(0, IJ)), mk_maprestrict(m, mk_proj(1, IJ)));
      });
    });
    Term join = W("IJ", ip, [&](const Term&) {
      return W("p", pair_sort(any_sort(), any_sort()),
               [](const Term& p) { return mk_union(mk_proj(0, p), mk_proj(1, p)); });
    });
    must_register(reg, prop(PropKind::SD, "bigstar", {{"s", dis}, {"z", join}}, "finset"), chk);
    Term g1 = W("e", iset, [&](const Term& e) {
      return W("m", any_sort(), [&](const Term& m) { return mk_mapget(m, mk_the_elem(e)); });
    });
    Term h1 = W("e", iset, [&](const Term& e) {
      return W("v", any_sort(),
               [&](const Term& v) { return mk_singleton(mk_pair(mk_the_elem(e), v)); });
    });
    Term isub = W("e", iset, [&](const Term& e) { return mk_the_elem(e); });
    must_register(reg, prop(PropKind::S1, "bigstar", {{"g", g1}, {"h", h1}, {"isub", isub}},
                            "finset"),
                  chk);
    Term D0 = mk_setlit({mk_setlit({}, pair_sort(int_sort(), any_sort()))},
                        set_sort(pair_sort(int_sort(), any_sort())));
    must_register(reg, prop(PropKind::S0, "bigstar", {{"D", D0}}, "finset"), chk);
  }

  // ---- Cell / List (recursive) ----------------------------------------------------------

  {
    PredicateDef d;
    d.sig.name = "Cell";
    d.sig.rec_space = true;
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return a[0]; };
    OpDefinition def;
    def.pred_params = {"@T"};
    def.binder = "@x";
    Sort es = any_sort();
    Term av = mk_fvar("@a", int_sort());
    def.body = a_exists(
        "@a", int_sort(),
        a_pred(pred_op("Ref", {mk_list({key_int(av)}, key_sort())}, {pred_atom("@T", es)}, es),
               mk_fvar("@x", es)));
    d.def = def;
    reg.add_pred(d);
  }
  {
    PredicateDef d;
    d.sig.name = "List";
    d.sig.rec_space = true;
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return list_sort(a[0]); };
    OpDefinition def;
    def.pred_params = {"@T"};
    def.binder = "@x";
    Sort es = any_sort();
    Pred elemT = pred_atom("@T", es);
    Pred cellT = pred_op("Cell", {}, {elemT}, es);
    Pred listT = pred_op("List", {}, {elemT}, list_sort(es));
    Pred step = pred_sum(pred_emp(), pred_star(cellT, listT));
    Term xv = mk_fvar("@x", list_sort(es));
    Term tagged = mk_con("l2s", {xv}, step->abst);
    def.body = a_pred(step, tagged);
    d.def = def;
    reg.add_pred(d);
  }

  // ---- linked list segments --------------------------------------------------------------

  {
    PredicateDef d;
    d.sig.name = "Node";
    d.sig.rec_space = true;
    d.sig.scalar_sorts = {int_sort(), int_sort()};
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return a[0]; };
    d.native = [](ForceCtx& ctx, const std::vector<Value>& sc, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) {
      long long a = sc[0].i, b = sc[1].i;
      if (a == 0) return false;
      if (w.k != VKind::Set || w.elems.size() != 2) return false;
      Value data = v_list({v_int(a), v_sym("data")});
      Value next = v_list({v_int(a), v_sym("next")});
      std::optional<Value> dv, nv;
      for (auto& c : w.elems) {
        if (!value_eq(c.elems[1].elems[0], v_rat(1, 1))) return false;
        if (value_eq(c.elems[0], data)) dv = c.elems[1].elems[1];
        if (value_eq(c.elems[0], next)) nv = c.elems[1].elems[1];
      }
      if (!dv || !nv) return false;
      if (nv->k != VKind::Int || nv->i != b) return false;
      return ctx.force_pred(*dv, ps[0], x);
    };
    reg.add_pred(d);
  }
  {
    PredicateDef d;
    d.sig.name = "Lseg";
    d.sig.rec_space = true;
    d.sig.scalar_sorts = {larrow_sort()};
    d.sig.algebra = "larrow";
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return list_sort(a[0]); };
    d.native = [](ForceCtx& ctx, const std::vector<Value>& sc, const std::vector<Pred>& ps,
                  const Value& x, const Value& w) {
      std::function<bool(long long, long long, long long, const Value&, size_t)> go =
          [&](long long a, long long n, long long b, const Value& h, size_t xi) -> bool {
        if (n == 0) return a == b && xi == x.elems.size() && value_eq(h, ctx.m.unit);
        if (a == 0 || xi >= x.elems.size()) return false;
        Value data = v_list({v_int(a), v_sym("data")});
        Value next = v_list({v_int(a), v_sym("next")});
        std::optional<Value> dv, nv;
        std::vector<Value> rest;
        for (auto& c : h.elems) {
          if (value_eq(c.elems[0], data)) {
            if (!value_eq(c.elems[1].elems[0], v_rat(1, 1))) return false;
            dv = c.elems[1].elems[1];
          } else if (value_eq(c.elems[0], next)) {
            if (!value_eq(c.elems[1].elems[0], v_rat(1, 1))) return false;
            nv = c.elems[1].elems[1];
          } else {
            rest.push_back(c);
          }
        }
        if (!dv || !nv || nv->k != VKind::Int) return false;
        if (!ctx.force_pred(*dv, ps[0], x.elems[xi])) return false;
        return go(nv->i, n - 1, b, v_set(rest), xi + 1);
      };
      if (x.k != VKind::List) return false;
      const Value& ar = sc[0];
      if (ar.elems[1].i != (long long)x.elems.size()) return false;
      return go(ar.elems[0].i, ar.elems[1].i, ar.elems[2].i, w, 0);
    };
    reg.add_pred(d);

    Sort ap = pair_sort(larrow_sort(), larrow_sort());
    auto alen = [](const Term& t) { return mk_con("arrow_len", {t}, int_sort()); };
    auto adst = [](const Term& t) { return mk_con("arrow_dst", {t}, int_sort()); };
    auto asrc = [](const Term& t) { return mk_con("arrow_src", {t}, int_sort()); };
    Term sd_s = W("nm", ap, [&](const Term& nm) {
      Term n = mk_proj(0, nm), mm = mk_proj(1, nm);
      return W("l", list_sort(any_sort()), [&](const Term& l) {
        Term k = alen(n);
        Term pr = mk_pair(mk_lslice(l, mk_int(0), k), mk_lslice(l, k, mk_len(l)));
        return mk_if(mk_eq(adst(n), asrc(mm)), pr, mk_undef(pr->sort));
      });
    });
    Term sd_z = W("nm", ap, [&](const Term& nm) {
      Term n = mk_proj(0, nm), mm = mk_proj(1, nm);
      return W("p", pair_sort(list_sort(any_sort()), list_sort(any_sort())), [&](const Term& p) {
        Term app = mk_append(mk_proj(0, p), mk_proj(1, p));
        return mk_if(mk_eq(adst(n), asrc(mm)), app, mk_undef(app->sort));
      });
    });
    must_register(reg, prop(PropKind::SD, "Lseg", {{"s", sd_s}, {"z", sd_z}}, "larrow"), chk);
    Term D0 = mk_setlit({mk_list({}, any_sort())}, list_sort(any_sort()));
    must_register(reg, prop(PropKind::S0, "Lseg", {{"D", D0}}, "larrow"), chk);
    Term f1 = W("e", larrow_sort(), [&](const Term&) {
      return W("l", list_sort(any_sort()), [](const Term& l) { return mk_idx(l, mk_int(0)); });
    });
    Term g1 = W("e", larrow_sort(), [&](const Term&) {
      return W("x", any_sort(), [](const Term& x) { return mk_list({x}, any_sort()); });
    });
    Term pmap = W("e", larrow_sort(),
                  [&](const Term& e) { return mk_pair(asrc(e), adst(e)); });
    Term pmap_inv = W("p", pair_sort(int_sort(), int_sort()), [&](const Term& p) {
      return mk_con("arrow", {mk_proj(0, p), mk_int(1), mk_proj(1, p)}, larrow_sort());
    });
    PropertyInstance s1p = prop(PropKind::S1p, "Lseg",
                                {{"f", f1}, {"g", g1}, {"pmap", pmap}, {"pmap_inv", pmap_inv}},
                                "larrow");
    s1p.op2 = "Node";
    must_register(reg, s1p, chk);

    // the cut direction introduces the midpoint itself (App.-I style)
    TpRule cut;
    cut.name = "LsegCut";
    cut.band = RuleBand::AdHoc;
    cut.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.source->kind != PredKind::OpApp || p.source->name != "Lseg") return ApplyResult::no_match();
      if (p.target->kind != PredKind::OpApp || p.target->name != "Lseg") return ApplyResult::no_match();
      Term n = simplify(p.source->scalars[0]);
      Term m = simplify(S.evars.resolve(p.target->scalars[0]));
      auto alen = [](const Term& t) { return simplify(mk_con("arrow_len", {t}, int_sort())); };
      auto adst = [](const Term& t) { return simplify(mk_con("arrow_dst", {t}, int_sort())); };
      auto asrc = [](const Term& t) { return simplify(mk_con("arrow_src", {t}, int_sort())); };
      if (has_evar(n)) return ApplyResult::no_match();
      if (!S.unify_terms(asrc(n), asrc(m))) return ApplyResult::no_match();
      Term nl = alen(n), ml = alen(m);
      if (term_eq(nl, ml)) return ApplyResult::no_match();  // handled by ID/SH route
      if (!S.prover.prove(mk_le(ml, nl))) return ApplyResult::no_match();
      Term mid = S.evars.resolve(adst(m));  // may stay an evar: the cut point
      Term cut_arrow =
          mk_con("arrow", {asrc(n), ml, mid}, scalar_sort("larrow"));
      Term rest_arrow =
          mk_con("arrow", {mid, simplify(mk_sub(nl, ml)), adst(n)}, scalar_sort("larrow"));
      Pred T = p.source->preds[0];
      Pred csrc = S.reg.make_op("Lseg", {cut_arrow}, {T});
      Sort aSrc = p.source->abst;
      Term h = klam(pair_sort(aSrc, any_sort()), [&](const Term& q) {
        return mk_pair(mk_lslice(mk_proj(0, q), mk_int(0), ml), mk_proj(1, q));
      });
      auto c = S.solve({TpKind::BiTP, csrc, p.target, simplify(mk_image(h, p.domain))});
      if (!c) return ApplyResult::failed();
      Term fc = c->first.f;
      TpSolution s;
      s.theta = c->first.theta;
      s.Z = c->first.Z;
      s.R = pred_star(S.reg.make_op("Lseg", {S.evars.resolve(rest_arrow)}, {T}), c->first.R);
      s.f = klam(pair_sort(aSrc, s.Z->abst), [&](const Term& q) {
        Term x = mk_proj(0, q);
        Term yr = apply_simp(fc, mk_pair(mk_lslice(x, mk_int(0), ml), mk_proj(1, q)));
        return mk_let("yr", yr,
                      mk_pair(mk_proj(0, mk_bvar(0, yr->sort)),
                              mk_pair(mk_lslice(x, ml, mk_len(x)),
                                      mk_proj(1, mk_bvar(0, yr->sort)))));
      });
      return ApplyResult::solved_with(std::move(s), {c->second});
    };
    reg.add_adhoc(cut);
  }

  {
    // address extension: a reference to a compound object serves a reference
    // to a member located by the path suffix
    TpRule sub;
    sub.name = "RefSub";
    sub.band = RuleBand::AdHoc;
    sub.apply = [](TpSolver& S, const TpProblem& p) -> ApplyResult {
      if (p.source->kind != PredKind::OpApp || p.source->name != "Ref")
        return ApplyResult::no_match();
      if (p.target->kind != PredKind::OpApp || p.target->name != "Ref")
        return ApplyResult::no_match();
      Term ps = simplify(p.source->scalars[0]);
      Term pt = simplify(S.evars.resolve(p.target->scalars[0]));
      if (has_evar(ps) || has_evar(pt)) return ApplyResult::no_match();
      const ScalarAlgebra& path = builtin_algebra("path");
      auto q = path.solve_mul(ps, pt, MulShape::Right, S.prover);
      if (!q || (*q)->kind != TermKind::ListLit || (*q)->args.empty())
        return ApplyResult::no_match();
      Pred inner = S.reg.make_op("Path", {*q}, {p.target->preds[0]});
      auto c = S.solve({TpKind::BiTP, p.source->preds[0], inner, p.domain});
      if (!c) return ApplyResult::failed();
      TpSolution s;
      s.theta = c->first.theta;
      s.f = c->first.f;
      s.Z = S.reg.make_op("Ref", {ps}, {c->first.Z});
      s.R = S.reg.make_op("Ref", {ps}, {c->first.R});
      return ApplyResult::solved_with(std::move(s), {c->second});
    };
    reg.add_adhoc(sub);
  }

  // ---- Array (whole-array wrapper over Slice) ------------------------------------------

  {
    PredicateDef d;
    d.sig.name = "Array";
    d.sig.rec_space = true;
    d.sig.n_preds = 1;
    d.sig.abst_sort = [](auto&, const std::vector<Sort>& a) { return list_sort(a[0]); };
    OpDefinition def;
    def.pred_params = {"@T"};
    def.binder = "@x";
    Sort es = any_sort();
    Term xv = mk_fvar("@x", list_sort(es));
    def.body = a_pred(
        pred_op("Slice", {mk_ivl(mk_int(0), mk_len(xv))}, {pred_atom("@T", es)}, list_sort(es)),
        xv);
    d.def = def;
    reg.add_pred(d);
  }

  // ---- derived instances ------------------------------------------------------------------

  if (opts.derive) {
    // Cell: container of one anonymous reference
    Term m = W("f", fun_sort(any_sort(), any_sort()), [](const Term& f) { return f; });
    Term dd = W("x", any_sort(), [](const Term& x) { return mk_setlit({x}, any_sort()); });
    auto cell = derive_functor(reg, "Cell", m, dd);
    if (!cell.ok) throw std::runtime_error("stdlib: Cell functor derivation failed: " + cell.error);
    must_register(reg, cell.instance, chk);

    auto arr = derive_functor(
        reg, "Array",
        W("f", fun_sort(any_sort(), any_sort()),
          [](const Term& f) {
            return W("l", list_sort(any_sort()), [&](const Term& l) { return mk_map(f, l); });
          }),
        W("l", list_sort(any_sort()), [](const Term& l) { return mk_setof(l); }));
    if (!arr.ok) throw std::runtime_error("stdlib: Array functor derivation failed: " + arr.error);
    must_register(reg, arr.instance, chk);

    WfOrder ord;  // strict suffixes of a list
    ord.pre = W("l", list_sort(any_sort()), [](const Term& l) {
      return mk_con("suffixes", {l}, set_sort(l->sort));
    });
    auto lst = derive_recursive(
        reg, "List", PropKind::TF,
        {{"m", W("f", fun_sort(any_sort(), any_sort()),
                 [](const Term& f) {
                   return W("l", list_sort(any_sort()),
                            [&](const Term& l) { return mk_map(f, l); });
                 })},
         {"d", W("l", list_sort(any_sort()), [](const Term& l) { return mk_setof(l); })}},
        ord);
    if (!lst.ok) throw std::runtime_error("stdlib: List functor derivation failed: " + lst.error);
    must_register(reg, lst.instance, chk);
  }
}

std::vector<CatalogRow> catalog_report(const Registry& reg) {
  std::vector<CatalogRow> out;
  for (auto& [name, def] : reg.preds) {
    CatalogRow row;
    row.name = name;
    std::vector<Sort> absts(def.sig.n_preds, any_sort());
    std::vector<Term> scs;
    try {
      row.abst = show_sort(def.sig.abst_sort ? def.sig.abst_sort(scs, absts) : any_sort());
    } catch (...) {
      row.abst = "?";
    }
    for (auto& p : reg.props)
      if (p.op == name)
        row.properties.push_back(std::string(prop_kind_name(p.kind)) +
                                 (p.prov == Provenance::Derived ? "(derived)" : ""));
    for (auto& r : reg.instantiated)
      if (r.op == name) row.rules++;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace slr
