#include "hetsat/metrics.hpp"

#include <cmath>

#include "hetsat/analytics_maxsinr.hpp"
#include "hetsat/analytics_nearest.hpp"
#include "hetsat/errors.hpp"

namespace hetsat {

double weighted_metric(double cp, double nhp, double dop, const WeightVector& w) {
  return w.w1 * cp + w.w2 * nhp + w.w3 * dop;
}

const char* to_string(Winner w) {
  switch (w) {
    case Winner::nearest: return "nearest";
    case Winner::max_sinr: return "max-sinr";
    case Winner::tie: return "tie";
  }
  return "tie";
}

std::vector<WeightCell> weight_grid_scan(const PolicyMetrics& nearest, const PolicyMetrics& max_sinr,
                                         double step) {
  if (!(step > 0.0) || step > 1.0) throw DomainError("grid step must lie in (0, 1]");
  // Index arithmetic keeps the grid exact; 1e-9 absorbs steps like 0.05.
  const int n = static_cast<int>(std::floor(1.0 / step + 1e-9));
  std::vector<WeightCell> out;
  for (int i = 0; i <= n; ++i) {
    for (int k = 0; k <= n - i; ++k) {
      WeightCell c;
      c.w.w1 = i * step;
      c.w.w3 = k * step;
      c.w.w2 = 1.0 - c.w.w1 - c.w.w3;
      if (c.w.w2 < -1e-12) continue;
      if (c.w.w2 < 0.0) c.w.w2 = 0.0;
      c.wm_nearest = weighted_metric(nearest.cp, nearest.nhp, nearest.dop, c.w);
      c.wm_max_sinr = weighted_metric(max_sinr.cp, max_sinr.nhp, max_sinr.dop, c.w);
      const double diff = c.wm_max_sinr - c.wm_nearest;
      c.winner = std::abs(diff) <= 1e-12 ? Winner::tie : diff > 0.0 ? Winner::max_sinr : Winner::nearest;
      out.push_back(c);
    }
  }
  return out;
}

AnalyticMetrics analytic_metrics(const Scenario& sc) {
  AnalyticMetrics m;
  m.nearest = {coverage_prob_nearest(sc).total, nhp_nearest(sc).total, dop_nearest(sc).total};
  m.max_sinr = {coverage_prob_maxsinr(sc).total, nhp_maxsinr(sc).total, dop_maxsinr(sc).total};
  return m;
}

std::vector<WeightCell> weight_grid_scan(const Scenario& sc, double step) {
  const AnalyticMetrics m = analytic_metrics(sc);
  return weight_grid_scan(m.nearest, m.max_sinr, step);
}

}  // namespace hetsat
