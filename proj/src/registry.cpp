#include "slr/registry.hpp"

#include <algorithm>
#include <sstream>

#include "slr/check.hpp"
#include "slr/session.hpp"
#include "slr/simplify.hpp"

namespace slr {

const char* prop_kind_name(PropKind k) {
  switch (k) {
    case PropKind::TF: return "Functor";
    case PropKind::SH: return "SepHom";
    case PropKind::SA: return "Assoc";
    case PropKind::SD: return "Dist";
    case PropKind::S1: return "SUnit";
    case PropKind::S1p: return "SUnit'";
    case PropKind::S0: return "SZero";
    case PropKind::IE_I: return "IdEleI";
    case PropKind::IE_E: return "IdEleE";
    case PropKind::Tr: return "Trans";
  }
  return "?";
}

const PredicateDef* Registry::find_pred(const std::string& name) const {
  auto it = preds.find(name);
  return it == preds.end() ? nullptr : &it->second;
}

const ScalarAlgebra* Registry::algebra_of_op(const std::string& op) const {
  const PredicateDef* d = find_pred(op);
  if (!d || d->sig.algebra.empty()) return nullptr;
  return &builtin_algebra(d->sig.algebra);
}

void Registry::add_pred(PredicateDef def) {
  if (frozen) throw std::runtime_error("registry frozen");
  preds[def.sig.name] = std::move(def);
}

void Registry::add_adhoc(TpRule r) {
  if (frozen) throw std::runtime_error("registry frozen");
  r.band = RuleBand::AdHoc;
  adhoc.push_back(std::move(r));
}

std::vector<const PropertyInstance*> Registry::props_of(const std::string& op,
                                                        PropKind kind) const {
  std::vector<const PropertyInstance*> out;
  for (auto& p : props)
    if (p.op == op && p.kind == kind) out.push_back(&p);
  return out;
}

const PropertyInstance* Registry::first_prop(const std::string& op, PropKind kind) const {
  for (auto& p : props)
    if (p.op == op && p.kind == kind) return &p;
  return nullptr;
}

const PropertyInstance* Registry::tr_of(const Pred& p) const {
  std::string head;
  switch (p->kind) {
    case PredKind::Atom:
    case PredKind::OpApp:
    case PredKind::Defined:
      head = p->name;
      break;
    case PredKind::Id: head = "Id"; break;
    case PredKind::Emp: head = "Emp"; break;
    default: return nullptr;
  }
  return first_prop(head, PropKind::Tr);
}

Sort Registry::op_abst_sort(const std::string& op, const std::vector<Term>& scalars,
                            const std::vector<Sort>& pred_absts) const {
  const PredicateDef* d = find_pred(op);
  if (!d) throw std::runtime_error("unknown predicate operator " + op);
  return d->sig.abst_sort ? d->sig.abst_sort(scalars, pred_absts)
                          : (pred_absts.empty() ? any_sort() : pred_absts[0]);
}

Pred Registry::make_op(const std::string& op, std::vector<Term> scalars,
                       std::vector<Pred> args) const {
  const PredicateDef* d = find_pred(op);
  if (!d) throw std::runtime_error("unknown predicate operator " + op);
  if ((int)args.size() != d->sig.n_preds)
    throw std::runtime_error("operator " + op + " arity mismatch");
  if (scalars.size() != d->sig.scalar_sorts.size())
    throw std::runtime_error("operator " + op + " scalar arity mismatch");
  for (size_t i = 0; i < scalars.size(); ++i)
    if (!sort_eq(scalars[i]->sort, d->sig.scalar_sorts[i]))
      throw SortError("operator " + op + " scalar #" + std::to_string(i) + " sort mismatch: " +
                      show_sort(scalars[i]->sort) + " vs " + show_sort(d->sig.scalar_sorts[i]));
  std::vector<Sort> absts;
  for (auto& a : args) absts.push_back(a->abst);
  Sort abst = op_abst_sort(op, scalars, absts);
  return pred_op(op, std::move(scalars), std::move(args), abst);
}

namespace {
Assertion subst_pred_atoms(const Assertion& a, const std::map<std::string, Pred>& env) {
  std::function<Pred(const Pred&)> pf = [&](const Pred& p) -> Pred {
    if (p->kind == PredKind::Atom) {
      auto it = env.find(p->name);
      if (it != env.end()) return it->second;
      return p;
    }
    if (p->preds.empty() && p->kind != PredKind::Defined) return p;
    auto q = std::make_shared<PredNode>(*p);
    for (auto& s : q->preds) s = pf(s);
    if (p->kind == PredKind::Defined && p->body) q->body = subst_pred_atoms(p->body, env);
    // abstraction sorts may shift with the substituted arguments
    if (q->kind == PredKind::Star) q->abst = pair_sort(q->preds[0]->abst, q->preds[1]->abst);
    if (q->kind == PredKind::Sum) q->abst = sum_sort(q->preds[0]->abst, q->preds[1]->abst);
    return q;
  };
  auto n = std::make_shared<ANode>(*a);
  if (a->pred) n->pred = pf(a->pred);
  for (auto& k : n->kids) k = subst_pred_atoms(k, env);
  return n;
}
}  // namespace

std::optional<Assertion> Registry::unfold(const Pred& p, const Term& arg) const {
  if (p->kind == PredKind::Defined) return asubst(p->body, p->binder, arg);
  if (p->kind != PredKind::OpApp) return std::nullopt;
  const PredicateDef* d = find_pred(p->name);
  if (!d || !d->def) return std::nullopt;
  const OpDefinition& def = *d->def;
  Assertion body = def.body;
  std::map<std::string, Pred> penv;
  for (size_t i = 0; i < def.pred_params.size() && i < p->preds.size(); ++i)
    penv[def.pred_params[i]] = p->preds[i];
  if (!penv.empty()) body = subst_pred_atoms(body, penv);
  for (size_t i = 0; i < def.scalar_params.size() && i < p->scalars.size(); ++i)
    body = asubst(body, def.scalar_params[i], p->scalars[i]);
  return asubst(body, def.binder, arg);
}

std::vector<const TpRule*> Registry::rule_list() const {
  std::vector<const TpRule*> out;
  for (auto& r : adhoc) out.push_back(&r);
  for (auto& r : instantiated) out.push_back(&r);
  for (auto& r : fallback) out.push_back(&r);
  return out;
}

void Registry::rebuild_instantiated() {
  std::vector<TpRule> all;
  for (auto& p : props) {
    auto rs = instantiate_templates(*this, p);
    for (auto& r : rs) all.push_back(std::move(r));
  }
  // canonical order: template catalog rank, then operator, then detail;
  // drop duplicates arising from re-registration
  std::stable_sort(all.begin(), all.end(), [](const TpRule& a, const TpRule& b) {
    if (a.template_rank != b.template_rank) return a.template_rank < b.template_rank;
    if (a.op != b.op) return a.op < b.op;
    return a.detail < b.detail;
  });
  all.erase(std::unique(all.begin(), all.end(),
                        [](const TpRule& a, const TpRule& b) {
                          return a.template_rank == b.template_rank && a.op == b.op &&
                                 a.detail == b.detail;
                        }),
            all.end());
  instantiated = std::move(all);
}

std::variant<std::vector<std::string>, Counterexample> Registry::register_property(
    PropertyInstance p, bool check) {
  if (frozen) throw std::runtime_error("registry frozen");
  if (!find_pred(p.op)) throw std::runtime_error("property for undeclared operator " + p.op);
  if (check) {
    const std::vector<FiniteModel>& ms = check_models ? *check_models : builtin_models();
    for (auto& m : ms) {
      auto cex = check_property(m, *this, p);
      if (cex) return *cex;
    }
    p.prov = p.prov == Provenance::Derived ? Provenance::Derived : Provenance::OracleChecked;
  }
  // idempotent re-registration
  for (auto& q : props)
    if (q.kind == p.kind && q.op == p.op && q.op2 == p.op2) {
      bool same = q.w.size() == p.w.size();
      if (same)
        for (auto& [k, v] : q.w) {
          auto it = p.w.find(k);
          if (it == p.w.end() || !term_eq(it->second, v)) { same = false; break; }
        }
      if (same) {
        rebuild_instantiated();
        std::vector<std::string> ids;
        for (auto& r : instantiated)
          if (r.op == p.op) ids.push_back(r.name + "/" + r.detail);
        return ids;
      }
    }
  props.push_back(p);
  rebuild_instantiated();
  std::vector<std::string> ids;
  for (auto& r : instantiated)
    if (r.op == p.op) ids.push_back(r.name + "/" + r.detail);
  return ids;
}

// --- printing of solver structures --------------------------------------------

std::string show_problem(const TpProblem& p) {
  std::ostringstream os;
  os << (p.kind == TpKind::TP ? "TP(" : "bi-TP(") << show_pred(p.source) << ", "
     << show_pred(p.target) << ", " << show_term(p.domain) << ")";
  return os.str();
}

std::string show_solution(const TpKind k, const TpSolution& s) {
  std::ostringstream os;
  os << "(" << show_term(s.theta) << ", " << show_term(s.f);
  if (k == TpKind::BiTP) os << ", " << show_pred(s.Z) << ", " << show_pred(s.R);
  os << ")";
  return os.str();
}

std::string derivation_text(const DerivationNode& n, int indent) {
  std::ostringstream os;
  for (int i = 0; i < indent; ++i) os << "  ";
  os << n.rule << ": " << show_problem(n.problem) << " <- "
     << show_solution(n.problem.kind, n.solution) << "\n";
  for (auto& c : n.children) os << derivation_text(c, indent + 1);
  return os.str();
}

void derivation_rules(const DerivationNode& n, std::vector<std::string>& out) {
  out.push_back(n.rule);
  for (auto& c : n.children) derivation_rules(c, out);
}

}  // namespace slr
