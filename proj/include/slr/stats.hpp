#pragma once

#include <string>
#include <vector>

namespace slr {

// one record per terminal bi-EP instance
struct StatsRecord {
  std::string id;
  int connectives = 0;
  int rule_apps = 0;
  long long micros = 0;
};

// stable column order: problem-id, connectives, rule-apps, micros
std::string stats_csv(const std::vector<StatsRecord>& rs);

struct LinFit {
  double slope = 0, intercept = 0, r2 = 0;
};
LinFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace slr
