#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "slr/term.hpp"

namespace slr {

class PredNode;
using Pred = std::shared_ptr<const PredNode>;
class ANode;
using Assertion = std::shared_ptr<const ANode>;

// Predicate operator expressions. `OpApp` covers the scalar-parameterized
// operators (Ref, Path, Slice, perm, ...); Star/Sum are the predicate
// counterparts of the connectives; Defined wraps a user definition body.
enum class PredKind { Atom, Evar, OpApp, Star, Sum, Emp, Id, Defined };

class PredNode {
public:
  PredKind kind;
  std::string name;           // Atom / OpApp operator / Defined display name
  int evar_id = 0;
  std::vector<Term> scalars;  // OpApp scalar parameters
  std::vector<Pred> preds;    // OpApp predicate args; Star/Sum: exactly 2
  Sort abst;                  // abstraction sort
  // Defined: body with the abstraction variable free as FVar(binder)
  std::string binder;
  Assertion body;

  explicit PredNode(PredKind k) : kind(k) {}
};

enum class AKind {
  Top,
  Bot,
  Emp,
  PredApp,
  Not,
  Star,
  And,
  Or,
  Wand,
  Implies,
  Exists,
  Forall,
  Satisfies,
  Pure
};

// SL formulas. Quantifiers bind named term variables (fresh-name discipline);
// Pure embeds a bool-sorted term.
class ANode {
public:
  AKind kind;
  Pred pred;                   // PredApp
  Term term;                   // PredApp argument / Satisfies lhs / Pure formula
  std::vector<Assertion> kids; // connective operands / quantifier body / Satisfies body
  std::string binder;          // Exists/Forall variable name
  Sort binder_sort;

  explicit ANode(AKind k) : kind(k) {}
};

enum class FragmentClass { StateS, GoalG, EntailE, Outside };

// --- predicate constructors --------------------------------------------------

Pred pred_atom(const std::string& name, const Sort& abst);
Pred pred_evar(int id, const Sort& abst = any_sort());
Pred pred_op(const std::string& op, std::vector<Term> scalars, std::vector<Pred> args,
             const Sort& abst);
Pred pred_star(const Pred& a, const Pred& b);
Pred pred_sum(const Pred& a, const Pred& b);
Pred pred_emp();
Pred pred_id(const Sort& world);
Pred pred_defined(const std::string& display, const std::string& binder, const Sort& abst,
                  const Assertion& body);

bool pred_eq(const Pred& a, const Pred& b);
int pred_cmp(const Pred& a, const Pred& b);
std::string show_pred(const Pred& p);
Pred pred_subst_evars(const Pred& p, const std::map<int, Term>& term_env,
                      const std::map<int, Pred>& pred_env);
Pred pred_subst_fvar(const Pred& p, const std::string& var, const Term& t);
void pred_collect_evars(const Pred& p, std::set<int>& term_evars, std::set<int>& pred_evars);

// --- assertion constructors ----------------------------------------------------

Assertion a_top();
Assertion a_bot();
Assertion a_emp();
Assertion a_pred(const Pred& p, const Term& arg);
Assertion a_not(const Assertion& a);
Assertion a_star(const Assertion& a, const Assertion& b);
Assertion a_and(const Assertion& a, const Assertion& b);
Assertion a_or(const Assertion& a, const Assertion& b);
Assertion a_wand(const Assertion& a, const Assertion& b);
Assertion a_implies(const Assertion& a, const Assertion& b);
Assertion a_exists(const std::string& var, const Sort& s, const Assertion& body);
Assertion a_forall(const std::string& var, const Sort& s, const Assertion& body);
Assertion a_satisfies(const Term& t, const Assertion& body);
Assertion a_pure(const Term& t);

bool aeq(const Assertion& a, const Assertion& b);  // structural modulo bound-variable names
std::string show_assertion(const Assertion& a);

Assertion asubst(const Assertion& a, const std::string& var, const Term& t);
Assertion asubst_evars(const Assertion& a, const std::map<int, Term>& term_env,
                       const std::map<int, Pred>& pred_env);
void a_collect_fvars(const Assertion& a, std::set<std::string>& out);
void a_collect_evars(const Assertion& a, std::set<int>& term_evars, std::set<int>& pred_evars);
Assertion amap_terms(const Assertion& a, const std::function<Term(const Term&)>& f);

// eliminates unit clutter: emp ** S, () :: Emp, pure(true) conjuncts
Assertion assertion_simplify(const Assertion& a);

// --- fragment operations ---------------------------------------------------------

FragmentClass classify(const Assertion& a);
// same classification computed by an independent recursive-descent reference;
// kept for cross-checking in tests
FragmentClass classify_reference(const Assertion& a);

// moves every existential binder in an S-assertion to the outermost prefix
Assertion hoist_exists(const Assertion& a);

// equivalent predicate-application view (y, U) of an exists-free S-assertion
std::pair<Term, Pred> as_pred_app(const Assertion& a);

struct FragmentError : std::runtime_error {
  explicit FragmentError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace slr
