#pragma once

#include "slr/entail.hpp"

namespace slr {

// Generic monadic programs: operator applications over higher-order slots and
// sequential binds. Every operator application computes its value argument
// from the incoming value through `arg` (free variable $env stands for it);
// Bind threads (env, result) pairs so locals stay addressable.
enum class PKind { Op, Seq };

class ProgNode;
using Prog = std::shared_ptr<const ProgNode>;

class ProgNode {
 public:
  PKind kind = PKind::Op;
  std::string op;           // pure, load, store, alloc, free, if, while, call, skip, abort
  std::vector<Prog> subs;   // higher-order slots (if: then/else, while: body)
  Term arg;                 // value-argument template over $env
  Assertion invariant;      // while: loop invariant template over $env
  Term cond;                // while: guard template over $env
  std::string callee;       // call
  Prog c1, c2;              // Seq
  std::string loc;
};

Prog prog_op(const std::string& op, Term arg, std::vector<Prog> subs = {},
             const std::string& loc = "");
Prog prog_seq(Prog c1, Prog c2, const std::string& loc = "");
Prog prog_if(Term cond_arg, Prog then_b, Prog else_b, const std::string& loc = "");
Prog prog_while(Term cond, Assertion invariant, Prog body, const std::string& loc = "");
Prog prog_call(const std::string& callee, Term arg, const std::string& loc = "");

// value argument instantiation
Term prog_arg_at(const Term& tmpl, const Term& env);

struct ProcSpec {
  std::string name;
  Sort arg_sort = unit_sort();      // formals tuple sort
  std::string arg_name = "args";
  Assertion pre;                    // over FVar(arg_name)
  Assertion post;                   // over FVar(arg_name) and FVar("ret")
  Sort ret_sort = int_sort();
  Prog body;                        // null for extern specs
};

// wp-rule template: `$psi(t)` atoms mark postcondition applications, `$wpN(t)`
// atoms mark sub-program weakest preconditions, the free variable `$u` is the
// operator's value argument, `?`-prefixed variables/`?P`-atoms become fresh
// evars per application, `!`-prefixed variables become fresh fixed constants.
struct WpRule {
  std::string op;
  Assertion pre_template;
  std::string note;
};

struct VerifyObligation {
  std::string site;
  Term formula;
};

struct VerifyReport {
  bool wp_ok = false;
  bool entailed = false;
  Assertion wp_pre;  // transformer output
  Term theta;
  std::vector<VerifyObligation> obligations;
  std::vector<EntailEvent> events;
  std::vector<DerivationNode> tp_trees;
  std::string blocking;
  int rule_apps = 0;
  int connectives = 0;
  int biep_count = 0;
  long long micros = 0;
};

class WpSet {
 public:
  std::vector<WpRule> rules;
  // validates the fragment discipline; throws FragmentError on violation
  void register_rule(const WpRule& r);
  std::vector<const WpRule*> rules_for(const std::string& op) const;
};

// built-in IMP rule set (load/store/alloc/free/pure/skip/abort/if)
WpSet builtin_wp_rules();

class Verifier {
 public:
  Verifier(const Registry& reg, const WpSet& wps) : reg(reg), wps(wps) {}

  const Registry& reg;
  const WpSet& wps;
  std::map<std::string, ProcSpec> procs;

  // Routine-2 backward transformer; posts are continuations over the result
  using PostFn = std::function<Assertion(const Term&)>;
  std::optional<Assertion> wp(EntailSession& ses, const Prog& c, const Term& u, const PostFn& psi,
                              VerifyReport& rep);

  // full pipeline for {pre} body {ret. post}
  VerifyReport verify_triple(const ProcSpec& spec);

  int fresh_ctr = 0;
  std::vector<Prog> pending_loops;
};

}  // namespace slr
