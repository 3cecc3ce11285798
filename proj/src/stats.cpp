#include "slr/stats.hpp"

#include <cmath>
#include <sstream>

namespace slr {

std::string stats_csv(const std::vector<StatsRecord>& rs) {
  std::ostringstream os;
  os << "problem-id,connectives,rule-apps,micros\n";
  for (auto& r : rs)
    os << r.id << "," << r.connectives << "," << r.rule_apps << "," << r.micros << "\n";
  return os.str();
}

LinFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
  LinFit f;
  size_t n = std::min(xs.size(), ys.size());
  if (n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double den = n * sxx - sx * sx;
  if (std::fabs(den) < 1e-12) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double my = sy / n, ss_tot = 0, ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    double e = ys[i] - (f.slope * xs[i] + f.intercept);
    ss_res += e * e;
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  f.r2 = ss_tot < 1e-12 ? 1.0 : 1.0 - ss_res / ss_tot;
  return f;
}

}  // namespace slr
