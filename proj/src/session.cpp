#include "slr/session.hpp"

namespace slr {

Term EvarStore::fresh(const Sort& s, const std::string& hint) {
  (void)hint;
  return mk_evar(next_id++, s);
}

Pred EvarStore::fresh_pred(const Sort& abst) { return pred_evar(next_id++, abst); }

bool EvarStore::bind(int id, const Term& t) {
  Term r = resolve(t);
  std::set<int> occ;
  collect_evars(r, occ);
  if (occ.count(id)) return false;
  tbind[id] = r;
  return true;
}

bool EvarStore::bind_pred(int id, const Pred& p) {
  Pred r = resolve_pred(p);
  std::set<int> te, pe;
  pred_collect_evars(r, te, pe);
  if (pe.count(id)) return false;
  pbind[id] = r;
  return true;
}

Term EvarStore::resolve(const Term& t) const { return subst_evars(t, tbind); }

Pred EvarStore::resolve_pred(const Pred& p) const { return pred_subst_evars(p, tbind, pbind); }

Assertion EvarStore::resolve_assertion(const Assertion& a) const {
  return asubst_evars(a, tbind, pbind);
}

EvarStore::Snapshot EvarStore::snapshot() const {
  return Snapshot{next_id, tbind, pbind, goal_evars.size()};
}

void EvarStore::restore(const Snapshot& s) {
  next_id = s.next_id;
  tbind = s.tbind;
  pbind = s.pbind;
  goal_evars.resize(s.goals);
}

}  // namespace slr
