#include "slr/semantics.hpp"

#include "slr/simplify.hpp"

namespace slr {

namespace {

struct Exec {
  const ExecConfig& cfg;
  int fuel;

  std::optional<Value> evalt(const Term& t, const Value& env) {
    Term inst = subst_fvar(t, "$env", value_term(env, any_sort()));
    EvalEnv e;
    try {
      return eval_term(simplify(inst), e);
    } catch (const EvalError&) {
      return std::nullopt;
    }
  }

  // heap primitives; addresses are key lists
  std::optional<Value> lookup(const Value& h, const Value& addr) {
    for (auto& c : h.elems)
      if (value_eq(c.elems[0], addr)) return c.elems[1].elems[1];
    return std::nullopt;
  }
  bool full_perm(const Value& h, const Value& addr) {
    for (auto& c : h.elems)
      if (value_eq(c.elems[0], addr)) return value_eq(c.elems[1].elems[0], v_rat(1, 1));
    return false;
  }
  Value update(const Value& h, const Value& addr, const Value& v) {
    std::vector<Value> cells;
    for (auto& c : h.elems)
      cells.push_back(value_eq(c.elems[0], addr) ? v_pair(addr, v_pair(c.elems[1].elems[0], v))
                                                 : c);
    return v_set(std::move(cells));
  }
  Value remove(const Value& h, const Value& addr) {
    std::vector<Value> cells;
    for (auto& c : h.elems)
      if (!value_eq(c.elems[0], addr)) cells.push_back(c);
    return v_set(std::move(cells));
  }
  bool block_used(const Value& h, long long b) {
    for (auto& c : h.elems) {
      const auto& p = c.elems[0].elems;
      if (!p.empty() && p[0].k == VKind::Int && p[0].i == b) return true;
    }
    return false;
  }

  std::vector<std::pair<Value, Value>> run(const Prog& c, const Value& u, const Value& h) {
    if (fuel-- <= 0) return {};
    if (c->kind == PKind::Seq) {
      std::vector<std::pair<Value, Value>> out;
      for (auto& [v, h1] : run(c->c1, u, h))
        for (auto& r : run(c->c2, v_pair(u, v), h1)) out.push_back(r);
      return out;
    }
    const std::string& op = c->op;
    auto need = [&](const std::optional<Value>& v) { return v.has_value(); };

    if (op == "skip") return {{v_unit(), h}};
    if (op == "abort") return {};
    if (op == "pure") {
      auto v = evalt(c->arg, u);
      if (!need(v)) return {};
      return {{*v, h}};
    }
    if (op == "load") {
      auto a = evalt(c->arg, u);
      if (!need(a)) return {};
      auto v = lookup(h, *a);
      if (!need(v)) return {};
      return {{*v, h}};
    }
    if (op == "store") {
      auto p = evalt(c->arg, u);
      if (!need(p) || p->k != VKind::Tuple) return {};
      const Value& addr = p->elems[0];
      if (!full_perm(h, addr)) return {};
      return {{v_unit(), update(h, addr, p->elems[1])}};
    }
    if (op == "alloc") {
      std::vector<std::pair<Value, Value>> out;
      for (long long b = 0; b < cfg.alloc_blocks; ++b) {
        if (block_used(h, b)) continue;
        Value cell = heap_cell({v_int(b)}, v_rat(1, 1), v_int(0));
        auto h2 = heap_star(h, cell, cfg.perm_cap);
        if (h2) out.push_back({v_int(b), *h2});
      }
      return out;
    }
    if (op == "free") {
      auto a = evalt(c->arg, u);
      if (!need(a)) return {};
      if (!full_perm(h, *a)) return {};
      return {{v_unit(), remove(h, *a)}};
    }
    if (op == "if") {
      auto b = evalt(c->arg, u);
      if (!need(b)) return {};
      bool taken = (b->k == VKind::Bool && b->b) || (b->k == VKind::Int && b->i != 0);
      return run(c->subs[taken ? 0 : 1], u, h);
    }
    if (op == "while") {
      auto b = evalt(c->cond, u);
      if (!need(b)) return {};
      bool taken = (b->k == VKind::Bool && b->b) || (b->k == VKind::Int && b->i != 0);
      if (!taken) return {{u, h}};
      std::vector<std::pair<Value, Value>> out;
      for (auto& [v, h1] : run(c->subs[0], u, h))
        for (auto& r : run(c, v, h1)) out.push_back(r);
      return out;
    }
    if (op == "call") {
      if (!cfg.procs) return {};
      auto it = cfg.procs->find(c->callee);
      if (it == cfg.procs->end() || !it->second.body) return {};
      auto a = evalt(c->arg, u);
      if (!need(a)) return {};
      return run(it->second.body, *a, h);
    }
    return {};
  }
};

}  // namespace

std::vector<std::pair<Value, Value>> exec_program(const ExecConfig& cfg, const Prog& c,
                                                  const Value& u, const Value& heap) {
  Exec e{cfg, cfg.fuel};
  return e.run(c, u, heap);
}

}  // namespace slr
