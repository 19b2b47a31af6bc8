#pragma once

#include <vector>

#include "hetsat/channel.hpp"
#include "hetsat/constellation.hpp"
#include "hetsat/numerics.hpp"
#include "hetsat/weights.hpp"

namespace hetsat {

struct Scenario {
  std::vector<TierConfig> tiers;
  ChannelParams channel;
  double earth_radius = kEarthRadius;
  WeightVector weights_nearest;
  WeightVector weights_maxsinr;
  QuadratureSpec numerics;

  void validate() const;
  int size() const { return static_cast<int>(tiers.size()); }
  /// True when the tiers do not share one SINR threshold.
  bool heterogeneous_thresholds() const;
  double max_delta_th() const;

  /// Same scenario with every tier's SINR threshold set to gamma_th_db.
  Scenario with_threshold_db(double gamma_th_db) const;
  /// Same scenario with every tier's handover threshold set to t_th.
  Scenario with_handover_time(double t_th) const;
  Scenario with_dome_angle(double phi_d) const;
};

/// Default three-shell setup: the first `num_tiers` of the 600/900/1200 km
/// tiers. SINR and handover thresholds are arguments.
TierParams table2_tier(int index, double gamma_th_db = -5.0, double t_th = 0.0);
Scenario table2_scenario(int num_tiers = 3, double gamma_th_db = -5.0, double t_th = 0.0);

}  // namespace hetsat
