#include "hetsat/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "hetsat/errors.hpp"

namespace hetsat {

void WeightVector::validate() const {
  if (w1 < 0.0 || w2 < 0.0 || w3 < 0.0) throw DomainError("weights must be non-negative");
  if (std::abs(w1 + w2 + w3 - 1.0) > 1e-12) throw DomainError("weights must sum to 1");
}

void Scenario::validate() const {
  if (tiers.empty()) throw DomainError("scenario needs at least one tier");
  for (const auto& t : tiers) {
    t.validate();
    if (t.geo.earth_radius != earth_radius) throw DomainError("tier built for another Earth radius");
  }
  weights_nearest.validate();
  weights_maxsinr.validate();
  numerics.validate();
}

bool Scenario::heterogeneous_thresholds() const {
  return std::any_of(tiers.begin(), tiers.end(),
                     [&](const TierConfig& t) { return t.gamma_th != tiers.front().gamma_th; });
}

double Scenario::max_delta_th() const {
  double d = 0.0;
  for (const auto& t : tiers) d = std::max(d, t.delta_th());
  return d;
}

Scenario Scenario::with_threshold_db(double gamma_th_db) const {
  Scenario s = *this;
  for (auto& t : s.tiers) t.gamma_th = db_to_linear(gamma_th_db);
  return s;
}

Scenario Scenario::with_handover_time(double t_th) const {
  Scenario s = *this;
  for (auto& t : s.tiers) t.t_th = t_th;
  return s;
}

Scenario Scenario::with_dome_angle(double phi_d) const {
  Scenario s = *this;
  for (auto& t : s.tiers) t.geo.dome_angle = phi_d;
  return s;
}

TierParams table2_tier(int index, double gamma_th_db, double t_th) {
  static constexpr double altitude_km[] = {600.0, 900.0, 1200.0};
  static constexpr double power_dbw[] = {10.0, 15.0, 30.0};
  static constexpr double velocity[] = {7599.7, 7588.7, 7572.3};
  if (index < 0 || index > 2) throw DomainError("the default setup has three tiers");
  TierParams p;
  p.altitude = km(altitude_km[index]);
  p.count = 100.0;
  p.power = db_to_linear(power_dbw[index]);
  p.gain_main = db_to_linear(47.0);
  p.gain_side = db_to_linear(20.0);
  p.velocity = velocity[index];
  p.gamma_th = db_to_linear(gamma_th_db);
  p.t_th = t_th;
  p.delay_th = 0.010;
  p.beam_angle = 0.01;
  p.dome_angle = 0.1;
  return p;
}

Scenario table2_scenario(int num_tiers, double gamma_th_db, double t_th) {
  if (num_tiers < 1 || num_tiers > 3) throw DomainError("the default setup has 1 to 3 tiers");
  Scenario s;
  s.channel = ChannelParams(2.0, 1.0, 1.0, 2.0, 1e-12);
  for (int i = 0; i < num_tiers; ++i) {
    s.tiers.push_back(TierConfig::make(table2_tier(i, gamma_th_db, t_th)));
  }
  return s;
}

}  // namespace hetsat
