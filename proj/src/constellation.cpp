#include "hetsat/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hetsat/errors.hpp"

namespace hetsat {

TierConfig TierConfig::make(const TierParams& p, double earth_radius) {
  if ((p.density > 0.0) == (p.count > 0.0)) {
    throw DomainError("tier needs exactly one of density and count");
  }
  TierConfig t;
  t.geo = TierGeometry::make(p.altitude, p.beam_angle, p.dome_angle, earth_radius);
  const double area = 4.0 * kPi * t.geo.orbit_radius * t.geo.orbit_radius;
  t.density = p.density > 0.0 ? p.density : p.count / area;
  t.expected_count = p.count > 0.0 ? p.count : p.density * area;
  t.power = p.power;
  t.gain_main = p.gain_main;
  t.gain_side = p.gain_side;
  t.velocity = p.velocity;
  t.gamma_th = p.gamma_th;
  t.t_th = p.t_th;
  t.delay_th = p.delay_th;
  t.validate();
  return t;
}

void TierConfig::validate() const {
  if (!(density > 0.0)) throw DomainError("density must be positive");
  if (!(power > 0.0)) throw DomainError("power must be positive");
  if (!(gain_side > 0.0) || !(gain_main >= gain_side)) {
    throw DomainError("gains need G_ml >= G_sl > 0");
  }
  if (!(velocity > 0.0)) throw DomainError("velocity must be positive");
  if (!(gamma_th > 0.0)) throw DomainError("SINR threshold must be positive (linear)");
  if (!(t_th >= 0.0)) throw DomainError("handover threshold must be non-negative");
  if (!(delay_th > 0.0)) throw DomainError("delay threshold must be positive");
}

double keplerian_speed(double orbit_radius) { return std::sqrt(kEarthMu / orbit_radius); }

double velocity_mismatch(const TierConfig& tier) {
  return std::abs(tier.velocity / keplerian_speed(tier.geo.orbit_radius) - 1.0);
}

Lobe classify(const TierGeometry& geo, double r) {
  if (r > geo.max_distance) return Lobe::invisible;
  return r <= geo.main_lobe_reach ? Lobe::main : Lobe::side;
}

void sample_tier(std::mt19937_64& rng, const TierConfig& tier, int tier_index,
                 SatelliteRealization& out, bool keep_invisible) {
  if (static_cast<int>(out.visible_count.size()) <= tier_index) {
    out.visible_count.resize(tier_index + 1, 0);
  }
  std::poisson_distribution<long> count_dist(tier.expected_count);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const long n = tier.expected_count > 0.0 ? count_dist(rng) : 0;
  const double rs = tier.geo.orbit_radius;
  const double re = tier.geo.earth_radius;
  for (long k = 0; k < n; ++k) {
    const double u = unit(rng);
    // Azimuth does not affect distances to a polar user; drawn anyway so the
    // stream layout does not depend on it being used.
    (void)unit(rng);
    const double r = std::sqrt(std::max(rs * rs + re * re - 2.0 * rs * re * u, 0.0));
    const Lobe lobe = classify(tier.geo, r);
    if (lobe != Lobe::invisible) ++out.visible_count[tier_index];
    if (lobe == Lobe::invisible && !keep_invisible) continue;
    out.satellites.push_back({tier_index, r, std::acos(u), lobe, 0.0});
  }
}

void draw_fading(std::mt19937_64& rng, const ChannelParams& channel, SatelliteRealization& real) {
  std::gamma_distribution<double> dist(channel.chi(), channel.beta());
  for (auto& s : real.satellites) {
    if (s.lobe != Lobe::invisible) s.fading = dist(rng);
  }
}

double cap_void_exponent(double r, const TierConfig& tier) {
  const double h = tier.geo.altitude;
  const double slack = 1e-9 * tier.geo.max_distance;
  if (r < h - slack || r > tier.geo.max_distance + slack) {
    throw DomainError("distance " + std::to_string(r) + " outside [h, r_max]");
  }
  return tier.cap_coefficient() * std::max(r * r - h * h, 0.0);
}

std::vector<Vec3> walker_delta(int planes, int sats_per_plane, double inclination,
                               double altitude, int phasing, double earth_radius) {
  if (planes < 1 || sats_per_plane < 1) throw DomainError("Walker pattern needs P, S >= 1");
  if (!(altitude > 0.0)) throw DomainError("altitude must be positive");
  const double radius = earth_radius + altitude;
  const double total = static_cast<double>(planes) * sats_per_plane;
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(total));
  const double ci = std::cos(inclination);
  const double si = std::sin(inclination);
  for (int p = 0; p < planes; ++p) {
    const double raan = 2.0 * kPi * p / planes;
    const double cr = std::cos(raan);
    const double sr = std::sin(raan);
    for (int s = 0; s < sats_per_plane; ++s) {
      const double u = 2.0 * kPi * s / sats_per_plane + 2.0 * kPi * phasing * p / total;
      const double cu = std::cos(u);
      const double su = std::sin(u);
      out.push_back({radius * (cr * cu - sr * su * ci), radius * (sr * cu + cr * su * ci),
                     radius * su * si});
    }
  }
  return out;
}

double exit_arc_angle(double phi_e, double theta, double phi_d) {
  const double c = std::sin(phi_e) * std::sin(phi_d) * std::cos(std::abs(theta)) +
                   std::cos(phi_e) * std::cos(phi_d);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double exit_time(double r, double theta, const TierConfig& tier) {
  const double phi_e = tier.geo.earth_angle(r);
  if (phi_e > tier.geo.dome_angle * (1.0 + 1e-12)) {
    throw DomainError("satellite already outside the dome");
  }
  return tier.geo.orbit_radius * exit_arc_angle(phi_e, theta, tier.geo.dome_angle) / tier.velocity;
}

}  // namespace hetsat
