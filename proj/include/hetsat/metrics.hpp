#pragma once

#include <vector>

#include "hetsat/scenario.hpp"
#include "hetsat/weights.hpp"

namespace hetsat {

/// w1 cp + w2 nhp + w3 dop.
double weighted_metric(double cp, double nhp, double dop, const WeightVector& w);

struct PolicyMetrics {
  double cp = 0.0;
  double nhp = 0.0;
  double dop = 0.0;
};

enum class Winner { nearest, max_sinr, tie };
const char* to_string(Winner w);

struct WeightCell {
  WeightVector w;
  double wm_nearest = 0.0;
  double wm_max_sinr = 0.0;
  Winner winner = Winner::tie;
};

/// Walks w1, w3 over {0, step, 2 step, ...} and keeps the cells with
/// w2 = 1 - w1 - w3 >= 0. Both policies share the weights of each cell.
std::vector<WeightCell> weight_grid_scan(const PolicyMetrics& nearest, const PolicyMetrics& max_sinr,
                                         double step);

/// Analytic metrics of both policies for the scenario as given.
struct AnalyticMetrics {
  PolicyMetrics nearest;
  PolicyMetrics max_sinr;
};
AnalyticMetrics analytic_metrics(const Scenario& sc);

std::vector<WeightCell> weight_grid_scan(const Scenario& sc, double step);

}  // namespace hetsat
