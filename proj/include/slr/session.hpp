#pragma once

#include "slr/assertion.hpp"

namespace slr {

// Session-local evar allocation and bindings. Term/pred evars are numbered
// from one counter; bindings accumulate monotonically except across the
// disjunction backtracking point, which snapshots and restores.
struct EvarStore {
  int next_id = 0;
  std::map<int, Term> tbind;
  std::map<int, Pred> pbind;
  std::vector<std::pair<int, std::string>> goal_evars;  // reportable goal existentials

  Term fresh(const Sort& s, const std::string& hint = "");
  Pred fresh_pred(const Sort& abst);
  bool bind(int id, const Term& t);       // false on occurs-check failure
  bool bind_pred(int id, const Pred& p);
  bool is_bound(int id) const { return tbind.count(id) || pbind.count(id); }

  Term resolve(const Term& t) const;
  Pred resolve_pred(const Pred& p) const;
  Assertion resolve_assertion(const Assertion& a) const;

  struct Snapshot {
    int next_id;
    std::map<int, Term> tbind;
    std::map<int, Pred> pbind;
    size_t goals;
  };
  Snapshot snapshot() const;
  void restore(const Snapshot& s);
};

}  // namespace slr
