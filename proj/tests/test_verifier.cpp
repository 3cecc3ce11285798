#include "doctest.h"
#include "slr/check.hpp"
#include "slr/semantics.hpp"
#include "slr/stdlib.hpp"
#include "slr/simplify.hpp"

using namespace slr;

namespace {
Registry& R() {
  static Registry reg = [] {
    Registry r = make_base_registry();
    stdlib_load(r, {false, true});
    return r;
  }();
  return reg;
}

Sort key_s() { return abstract_sort("key"); }
Sort addr_s() { return list_sort(key_s()); }

Term lit_addr(long long b) { return mk_list({mk_con("ik", {mk_int(b)}, key_s())}, key_s()); }

Term env() { return mk_fvar("$env", any_sort()); }

// validates a triple exhaustively against the executable semantics: every
// pre-state in the model satisfying `pre` must land in `post`
int triples_hold(const Registry& reg, const FiniteModel& m, const ProcSpec& spec,
                 const std::map<std::string, ProcSpec>& procs, const Value& args) {
  ExecConfig cfg;
  cfg.procs = &procs;
  cfg.alloc_blocks = 3;
  int checked = 0;
  for (auto& w : m.carrier) {
    bool ok;
    try {
      ok = force(m, reg, w, spec.pre, {{spec.arg_name, args}});
    } catch (...) {
      continue;
    }
    if (!ok) continue;
    for (auto& [v, w2] : exec_program(cfg, spec.body, args, w)) {
      std::map<std::string, Value> env2 = {{spec.arg_name, args}, {"ret", v}};
      Assertion post = spec.post;
      CHECK(force(m, reg, w2, post, env2));
      ++checked;
    }
  }
  return checked;
}
}  // namespace

TEST_CASE("wp of load produces the reference-and-continuation shape") {
  Registry& reg = R();
  WpSet w = builtin_wp_rules();
  Verifier vf(reg, w);
  EntailSession ses(reg);
  VerifyReport rep;
  Prog ld = prog_op("load", lit_addr(0));
  Assertion post = a_pred(pred_atom("IntV", int_sort()), mk_fvar("out", int_sort()));
  auto pre = vf.wp(ses, ld, mk_unit(), [&](const Term& v) { return asubst(post, "out", v); }, rep);
  REQUIRE(pre.has_value());
  std::string s = show_assertion(*pre);
  CHECK(s.find("Ref") != std::string::npos);
  CHECK(s.find("-*") != std::string::npos);
  CHECK(s.find("val") != std::string::npos);
  CHECK(classify(*pre) == FragmentClass::GoalG);
}

TEST_CASE("wp rule registration enforces the goal fragment") {
  WpSet w;
  WpRule bad;
  bad.op = "weird";
  bad.pre_template = a_not(a_emp());
  CHECK_THROWS_AS(w.register_rule(bad), FragmentError);
  WpRule fine;
  fine.op = "weird";
  fine.pre_template = a_star(a_emp(), a_pred(pred_atom("$psi", unit_sort()), mk_unit()));
  w.register_rule(fine);
  CHECK(w.rules_for("weird").size() == 1);
  // a second rule for the same operator overloads it
  w.register_rule(fine);
  CHECK(w.rules_for("weird").size() == 2);
}

TEST_CASE("swap verifies with a pure-true obligation") {
  Registry& reg = R();
  WpSet w = builtin_wp_rules();
  Verifier vf(reg, w);
  // args = (p, q): two one-cell references
  Sort as = pair_sort(addr_s(), addr_s());
  Term p = mk_proj(0, mk_fvar("args", as));
  Term q = mk_proj(1, mk_fvar("args", as));
  Pred iv = pred_atom("IntV", int_sort());
  Term x = mk_fvar("x", int_sort());
  Term y = mk_fvar("y", int_sort());

  // let a = load p; let b = load q; store(p, b); store(q, a)
  Term envv = env();
  Prog body = prog_seq(
      prog_op("load", mk_proj(0, envv)),                         // env = args
      prog_seq(prog_op("load", mk_proj(1, mk_proj(0, envv))),    // env = (args, a)
               prog_seq(prog_op("store", mk_pair(mk_proj(0, mk_proj(0, mk_proj(0, envv))),
                                                 mk_proj(1, envv))),  // env = ((args,a),b)
                        prog_op("store",
                                mk_pair(mk_proj(1, mk_proj(0, mk_proj(0, mk_proj(0, envv)))),
                                        mk_proj(1, mk_proj(0, mk_proj(0, envv))))))));

  ProcSpec spec;
  spec.name = "swap";
  spec.arg_sort = as;
  spec.pre = a_star(a_pred(reg.make_op("Ref", {p}, {iv}), x),
                    a_pred(reg.make_op("Ref", {q}, {iv}), y));
  spec.post = a_star(a_pred(reg.make_op("Ref", {p}, {iv}), y),
                     a_pred(reg.make_op("Ref", {q}, {iv}), x));
  spec.ret_sort = unit_sort();
  spec.body = body;

  auto rep = vf.verify_triple(spec);
  REQUIRE_MESSAGE(rep.wp_ok, rep.blocking);
  REQUIRE_MESSAGE(rep.entailed, rep.blocking);
  CHECK(is_true(rep.theta));

  // exhaustive desk-scale validation against the executable semantics
  FiniteModel m = make_heap_model(2, 1);
  std::map<std::string, ProcSpec> procs;
  std::map<std::string, Value> unused;
  Value args = v_pair(v_list({v_int(0)}), v_list({v_int(1)}));
  int runs = 0;
  ExecConfig cfg;
  for (auto& w0 : m.carrier) {
    bool sat = false;
    for (int xv = 0; xv <= 1 && !sat; ++xv)
      for (int yv = 0; yv <= 1 && !sat; ++yv)
        if (force(m, reg, w0, spec.pre,
                  {{"args", args}, {"x", v_int(xv)}, {"y", v_int(yv)}})) {
          sat = true;
          for (auto& [v, w2] : exec_program(cfg, body, args, w0)) {
            CHECK(force(m, reg, w2, spec.post,
                        {{"args", args}, {"x", v_int(xv)}, {"y", v_int(yv)}}));
            ++runs;
          }
        }
  }
  CHECK(runs > 0);
}

TEST_CASE("record field store through nested paths") {
  Registry& reg = R();
  WpSet w = builtin_wp_rules();
  Verifier vf(reg, w);
  Pred iv = pred_atom("IntV", int_sort());
  // state: Ref[b]({a: {b: IntV}}); program stores 1 at address b.a.b
  Term base = mk_list({mk_con("ik", {mk_int(1)}, key_s())}, key_s());
  Term full = mk_append(base, mk_list({mk_sym("a"), mk_sym("b")}, key_s()));
  Prog body = prog_op("store", mk_pair(simplify(full), mk_int(1)));

  ProcSpec spec;
  spec.name = "set_ab";
  spec.arg_sort = unit_sort();
  spec.pre = a_pred(reg.make_op("Ref", {base}, {mk_field(reg, "a", mk_field(reg, "b", iv))}),
                    mk_fvar("x", int_sort()));
  spec.post = a_pred(reg.make_op("Ref", {simplify(full)}, {iv}), mk_int(1));
  spec.ret_sort = unit_sort();
  spec.body = body;
  auto rep = vf.verify_triple(spec);
  REQUIRE_MESSAGE(rep.wp_ok, rep.blocking);
  REQUIRE_MESSAGE(rep.entailed, rep.blocking);
}

TEST_CASE("wp definition check per rule on the finite semantics") {
  Registry& reg = R();
  FiniteModel m = make_heap_model(2, 1);
  ExecConfig cfg;
  Pred iv = pred_atom("IntV", int_sort());

  SUBCASE("load") {
    // phi = x :: Ref[0](IntV) ** ALL v. (... -* psi(v)) with psi(v) = v :: val_v(IntV)... use
    // concrete x and psi(v) := x :: Ref[0](IntV) (frame retained)
    Prog ld = prog_op("load", lit_addr(0));
    for (int xv = 0; xv <= 1; ++xv) {
      Assertion phi = a_pred(reg.make_op("Ref", {lit_addr(0)}, {iv}), mk_int(xv));
      for (auto& s : m.carrier) {
        if (!force(m, reg, s, phi)) continue;
        auto outs = exec_program(cfg, ld, v_unit(), s);
        REQUIRE(!outs.empty());
        for (auto& [v, s2] : outs) {
          CHECK(value_eq(v, v_int(xv)));  // the loaded value refines x
          CHECK(value_eq(s2, s));
        }
      }
    }
  }
  SUBCASE("store") {
    Prog st = prog_op("store", mk_pair(lit_addr(0), mk_int(1)));
    Assertion phi = a_pred(reg.make_op("Ref", {lit_addr(0)}, {iv}), mk_fvar("x", int_sort()));
    Assertion psi = a_pred(reg.make_op("Ref", {lit_addr(0)}, {iv}), mk_int(1));
    for (auto& s : m.carrier) {
      if (!force(m, reg, s, phi, {{"x", v_int(0)}})) continue;
      for (auto& [v, s2] : exec_program(cfg, st, v_unit(), s)) CHECK(force(m, reg, s2, psi));
    }
  }
  SUBCASE("alloc and free round trip") {
    Prog prog = prog_seq(prog_op("alloc", mk_unit()),
                         prog_op("free", mk_list({mk_con("ik", {mk_proj(1, env())}, key_s())},
                                                 key_s())));
    for (auto& s : m.carrier) {
      for (auto& [v, s2] : exec_program(cfg, prog, v_unit(), s)) CHECK(value_eq(s2, s));
    }
  }
}

TEST_CASE("if rule splits on the scrutinee") {
  Registry& reg = R();
  WpSet w = builtin_wp_rules();
  Verifier vf(reg, w);
  Pred iv = pred_atom("IntV", int_sort());
  // if (flag) { store(p, 1) } else { store(p, 0) }; post: Ref holds flag
  Term flag = mk_proj(1, mk_fvar("args", pair_sort(addr_s(), int_sort())));
  Term p = mk_proj(0, mk_fvar("args", pair_sort(addr_s(), int_sort())));
  Prog body = prog_if(mk_proj(1, env()), prog_op("store", mk_pair(mk_proj(0, env()), mk_int(1))),
                      prog_op("store", mk_pair(mk_proj(0, env()), mk_int(0))));
  ProcSpec spec;
  spec.name = "write_flag";
  spec.arg_sort = pair_sort(addr_s(), int_sort());
  spec.pre = a_and(a_pred(reg.make_op("Ref", {p}, {iv}), mk_fvar("x", int_sort())),
                   a_pure(mk_or(mk_eq(flag, mk_int(0)), mk_eq(flag, mk_int(1)))));
  spec.post = a_pred(reg.make_op("Ref", {p}, {iv}), flag);
  spec.ret_sort = unit_sort();
  spec.body = body;
  auto rep = vf.verify_triple(spec);
  REQUIRE_MESSAGE(rep.wp_ok, rep.blocking);
  REQUIRE_MESSAGE(rep.entailed, rep.blocking);
  // residual obligation relates the boolean scrutinee to the stored value
  FiniteModel m = make_heap_model(2, 1);
  for (long long f = 0; f <= 1; ++f) {
    Value args = v_pair(v_list({v_int(0)}), v_int(f));
    ThetaVerdict v = eval_theta(m, reg, rep.theta, {{"args", args}, {"x", v_int(0)}});
    CHECK(v == ThetaVerdict::True);
  }
  std::map<std::string, ProcSpec> procs;
  for (long long f = 0; f <= 1; ++f) {
    ProcSpec inst = spec;
    int n = triples_hold(reg, m, inst, procs, v_pair(v_list({v_int(0)}), v_int(f)));
    (void)n;
  }
}

TEST_CASE("while loop with an invariant annotation") {
  Registry& reg = R();
  WpSet w = builtin_wp_rules();
  Verifier vf(reg, w);
  Pred iv = pred_atom("IntV", int_sort());
  // env = counter n; loop: while (n != 0) { n := n - 1 }; post n = 0
  Term n_of = mk_fvar("$env", any_sort());
  Term guard = mk_not(mk_eq(mk_con("ki", {n_of}, int_sort()), mk_int(0)));
  Assertion inv = a_and(a_emp(), a_pure(mk_le(mk_int(0), mk_con("ki", {n_of}, int_sort()))));
  Prog dec = prog_op("pure", mk_sub(mk_con("ki", {env()}, int_sort()), mk_int(1)));
  Prog body = prog_while(guard, inv, dec);
  ProcSpec spec;
  spec.name = "countdown";
  spec.arg_sort = int_sort();
  spec.pre = a_and(a_emp(), a_pure(mk_le(mk_int(0), mk_fvar("args", int_sort()))));
  spec.post = a_and(a_emp(), a_pure(mk_eq(mk_con("ki", {mk_fvar("ret", int_sort())}, int_sort()),
                                          mk_int(0))));
  spec.body = body;
  auto rep = vf.verify_triple(spec);
  REQUIRE_MESSAGE(rep.wp_ok, rep.blocking);
  REQUIRE_MESSAGE(rep.entailed, rep.blocking);
}

TEST_CASE("call consumes the callee precondition and frames the rest") {
  Registry& reg = R();
  WpSet w = builtin_wp_rules();
  Verifier vf(reg, w);
  Pred iv = pred_atom("IntV", int_sort());
  // callee: zero(p) {x :: Ref[p](IntV)} -> {0 :: Ref[p](IntV)}
  ProcSpec zero;
  zero.name = "zero";
  zero.arg_sort = addr_s();
  zero.pre = a_pred(reg.make_op("Ref", {mk_fvar("args", addr_s())}, {iv}),
                    mk_fvar("xz", int_sort()));
  zero.post = a_pred(reg.make_op("Ref", {mk_fvar("args", addr_s())}, {iv}), mk_int(0));
  zero.ret_sort = unit_sort();
  vf.procs["zero"] = zero;

  // caller owns two cells, zeroes the first, keeps the second framed
  Sort as = pair_sort(addr_s(), addr_s());
  Term p = mk_proj(0, mk_fvar("args", as));
  Term q = mk_proj(1, mk_fvar("args", as));
  ProcSpec caller;
  caller.name = "zero_first";
  caller.arg_sort = as;
  caller.pre = a_star(a_pred(reg.make_op("Ref", {p}, {iv}), mk_fvar("x", int_sort())),
                      a_pred(reg.make_op("Ref", {q}, {iv}), mk_fvar("y", int_sort())));
  caller.post = a_star(a_pred(reg.make_op("Ref", {p}, {iv}), mk_int(0)),
                       a_pred(reg.make_op("Ref", {q}, {iv}), mk_fvar("y", int_sort())));
  caller.ret_sort = unit_sort();
  caller.body = prog_call("zero", mk_proj(0, env()));
  auto rep = vf.verify_triple(caller);
  REQUIRE_MESSAGE(rep.wp_ok, rep.blocking);
  REQUIRE_MESSAGE(rep.entailed, rep.blocking);
}

TEST_CASE("a wrong postcondition is rejected, and the oracle finds a countermodel") {
  Registry& reg = R();
  WpSet w = builtin_wp_rules();
  Verifier vf(reg, w);
  Pred iv = pred_atom("IntV", int_sort());
  ProcSpec spec;
  spec.name = "bad";
  spec.arg_sort = addr_s();
  Term p = mk_fvar("args", addr_s());
  spec.pre = a_pred(reg.make_op("Ref", {p}, {iv}), mk_fvar("x", int_sort()));
  // claims the cell ends at 2 but stores 1
  spec.post = a_pred(reg.make_op("Ref", {p}, {iv}), mk_int(2));
  spec.ret_sort = unit_sort();
  spec.body = prog_op("store", mk_pair(env(), mk_int(1)));
  auto rep = vf.verify_triple(spec);
  bool honest_fail = !rep.entailed;
  if (!honest_fail) {
    // if an obligation was emitted it must be unsatisfiable on the oracle
    FiniteModel m = make_heap_model(2, 2);
    ThetaVerdict v = eval_theta(m, reg, rep.theta,
                                {{"args", v_list({v_int(0)})}, {"x", v_int(0)}});
    CHECK(v != ThetaVerdict::True);
  }
  // the executable semantics refutes the triple directly
  FiniteModel m = make_heap_model(2, 2);
  ExecConfig cfg;
  Value args = v_list({v_int(0)});
  bool violated = false;
  for (auto& w0 : m.carrier) {
    if (!force(m, reg, w0, spec.pre, {{"args", args}, {"x", v_int(0)}})) continue;
    for (auto& [v, w2] : exec_program(cfg, spec.body, args, w0))
      if (!force(m, reg, w2, spec.post, {{"args", args}, {"x", v_int(0)}})) violated = true;
  }
  CHECK(violated);
}

TEST_CASE("memory star is a PCM: agree-and-cap composition") {
  // h1 * h2 defined iff overlapping addresses agree on the value and the
  // summed permission stays within the cap
  Value c_half = heap_cell({v_int(0)}, v_rat(1, 2), v_int(1));
  Value c_full = heap_cell({v_int(0)}, v_rat(1, 1), v_int(1));
  Value c_other = heap_cell({v_int(0)}, v_rat(1, 2), v_int(0));
  Value cap = v_rat(1, 1);
  auto s1 = heap_star(c_half, c_half, cap);
  REQUIRE(s1.has_value());
  CHECK(value_eq(*s1, c_full));
  CHECK(!heap_star(c_full, c_half, cap).has_value());   // over the cap
  CHECK(!heap_star(c_half, c_other, cap).has_value());  // value disagreement
}
