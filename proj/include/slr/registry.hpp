#pragma once

#include <map>
#include <optional>
#include <variant>

#include "slr/rules.hpp"
#include "slr/scalar.hpp"

namespace slr {

struct ForceCtx;
struct FiniteModel;

// native oracle semantics of a predicate operator over a model world
using NativeForce = std::function<bool(ForceCtx&, const std::vector<Value>& scalars,
                                       const std::vector<Pred>& pargs, const Value& x,
                                       const Value& w)>;

struct OpSignature {
  std::string name;
  std::vector<Sort> scalar_sorts;
  std::string algebra;  // "" when scalar params are plain parameters (addresses, values)
  int n_preds = 0;
  std::function<Sort(const std::vector<Term>&, const std::vector<Sort>&)> abst_sort;
  // F(Emp) ~ Emp holds and solutions may normalize through it
  bool collapses_empty = false;
  // operator's argument is read in record-path element space (cell reading at
  // leaves); property checks draw element predicates accordingly
  bool rec_space = false;
  // abstraction of F(Emp) reconstructed from the paired source abstraction
  std::function<Term(const std::vector<Term>& scalars, const Term& src)> empty_embed;
};

// user definition body; scalar/pred parameters appear as named placeholders
struct OpDefinition {
  std::vector<std::string> scalar_params;  // free term variables in body
  std::vector<std::string> pred_params;    // atom names in body
  std::string binder;                      // abstraction variable
  Assertion body;
};

enum class PropKind { TF, SH, SA, SD, S1, S1p, S0, IE_I, IE_E, Tr };
enum class Provenance { Axiom, Derived, OracleChecked };

const char* prop_kind_name(PropKind k);

// One witnessed algebraic law, ready for template instantiation.
// Witness keys by kind: TF {m,d}; SH {s,z}; SA {g,h}; SD {s,z}; S1 {g,h};
// S1p {f,g,pmap} (+op2); S0 {D}; IE_I/IE_E {D}; Tr {leq}.
struct PropertyInstance {
  PropKind kind;
  std::string op;
  std::string op2;  // S1p: the unwrapped operator
  std::map<std::string, Term> w;
  std::string algebra;
  Provenance prov = Provenance::Axiom;
  std::string note;
};

struct PredicateDef {
  OpSignature sig;
  std::optional<OpDefinition> def;
  NativeForce native;  // may be null
  bool is_atom = false;
};

struct Counterexample {
  std::string model;
  Value world;
  std::string detail;
  std::string assertion;
};

class Registry {
 public:
  std::map<std::string, PredicateDef> preds;
  std::vector<PropertyInstance> props;
  std::vector<TpRule> adhoc;     // registration order
  std::vector<TpRule> fallback;  // FB1, FB2
  std::vector<TpRule> instantiated;
  bool frozen = false;
  bool perm_relaxed = false;
  bool oracle_check_on_register = false;
  const std::vector<FiniteModel>* check_models = nullptr;

  const PredicateDef* find_pred(const std::string& name) const;
  const ScalarAlgebra* algebra_of_op(const std::string& op) const;
  void add_pred(PredicateDef def);
  void add_adhoc(TpRule r);

  std::vector<const PropertyInstance*> props_of(const std::string& op, PropKind kind) const;
  const PropertyInstance* first_prop(const std::string& op, PropKind kind) const;
  // Tr order for a predicate head; null means default equality
  const PropertyInstance* tr_of(const Pred& p) const;

  // instantiates all applicable Fig.-3 / noncommutative-SD templates, placing
  // rules at the canonical priority slot; with check, refuses on a
  // counterexample from the oracle
  std::variant<std::vector<std::string>, Counterexample> register_property(PropertyInstance p,
                                                                           bool check);

  // full prioritized rule list: ad-hoc, instantiated, fallbacks
  std::vector<const TpRule*> rule_list() const;

  // prepended session rules (Routine 4) are handled by the solver itself

  void rebuild_instantiated();

  // abstraction sort of an OpApp
  Sort op_abst_sort(const std::string& op, const std::vector<Term>& scalars,
                    const std::vector<Sort>& pred_absts) const;
  Pred make_op(const std::string& op, std::vector<Term> scalars, std::vector<Pred> args) const;

  // one-step unfolding of a Defined operator application
  std::optional<Assertion> unfold(const Pred& p, const Term& arg) const;
};

// fallback rules FB1/FB2 (always present)
std::vector<TpRule> fallback_rules();
// built-in ad-hoc rules: ID, TP-Emp_L/R, TP*_L/R, sum introduction/congruence
std::vector<TpRule> core_adhoc_rules();

// template instantiation (templates.cpp)
std::vector<TpRule> instantiate_templates(const Registry& reg, const PropertyInstance& inst);

}  // namespace slr
