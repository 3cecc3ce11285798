#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slr/assertion.hpp"

namespace slr {

class TpSolver;

enum class TpKind { TP, BiTP };

// TP(T, U, D) / bi-TP(T, U, D). For bi-TPs the domain ranges over pairs
// (source abstraction, antiframe abstraction).
struct TpProblem {
  TpKind kind = TpKind::BiTP;
  Pred source;
  Pred target;
  Term domain;
};

// (theta, f) for TP; (theta, f, Z, R) for bi-TP
struct TpSolution {
  Term theta;
  Term f;
  Pred Z;
  Pred R;
};

struct DerivationNode {
  std::string rule;
  TpProblem problem;
  TpSolution solution;
  std::vector<DerivationNode> children;
};

enum class RuleBand { AdHoc = 0, Instantiated = 1, Fallback = 2 };

struct ApplyResult {
  enum Status { NoMatch, Failed, Solved } status = NoMatch;
  TpSolution sol;
  std::vector<DerivationNode> children;
  static ApplyResult no_match() { return {}; }
  static ApplyResult failed() {
    ApplyResult r;
    r.status = Failed;
    return r;
  }
  static ApplyResult solved_with(TpSolution s, std::vector<DerivationNode> kids = {}) {
    ApplyResult r;
    r.status = Solved;
    r.sol = std::move(s);
    r.children = std::move(kids);
    return r;
  }
};

struct TpRule {
  std::string name;  // trace label (ID, FB2, SD_R, ...)
  RuleBand band = RuleBand::Instantiated;
  // canonical order inside the instantiated band: template rank, operator, detail
  int template_rank = 0;
  std::string op;
  std::string detail;
  bool for_tp = false;
  bool for_bitp = true;
  std::function<ApplyResult(TpSolver&, const TpProblem&)> apply;
};

std::string show_problem(const TpProblem& p);
std::string show_solution(const TpKind k, const TpSolution& s);
std::string derivation_text(const DerivationNode& n, int indent = 0);
void derivation_rules(const DerivationNode& n, std::vector<std::string>& out);

}  // namespace slr
