#pragma once

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "hetsat/channel.hpp"
#include "hetsat/geometry.hpp"

namespace hetsat {

/// Inputs for one tier, as read from a scenario. Exactly one of density and
/// count must be positive.
struct TierParams {
  double altitude = 0.0;     ///< m
  double density = 0.0;      ///< satellites per m^2 of orbit sphere
  double count = 0.0;        ///< expected number of satellites on the sphere
  double power = 1.0;        ///< W
  double gain_main = 1.0;    ///< linear
  double gain_side = 1.0;    ///< linear
  double velocity = 7500.0;  ///< m/s
  double gamma_th = 1.0;     ///< linear SINR threshold
  double t_th = 0.0;         ///< s
  double delay_th = 0.01;    ///< s
  double beam_angle = 0.01;  ///< rad
  double dome_angle = 0.1;   ///< rad
};

struct TierConfig {
  TierGeometry geo;
  double density = 0.0;
  double expected_count = 0.0;
  double power = 1.0;
  double gain_main = 1.0;
  double gain_side = 1.0;
  double velocity = 7500.0;
  double gamma_th = 1.0;
  double t_th = 0.0;
  double delay_th = 0.01;

  static TierConfig make(const TierParams& p, double earth_radius = kEarthRadius);
  void validate() const;

  /// lambda * pi * R_S / R_E, the coefficient of (r^2 - h^2) in the void exponent.
  double cap_coefficient() const { return density * kPi * geo.orbit_radius / geo.earth_radius; }
  /// (1 + gamma_th) / gamma_th.
  double delta_th() const { return (1.0 + gamma_th) / gamma_th; }
  double main_power() const { return power * gain_main; }
  double side_power() const { return power * gain_side; }
};

/// Circular-orbit speed sqrt(mu / R_S).
double keplerian_speed(double orbit_radius);
/// |c / sqrt(mu / R_S) - 1|.
double velocity_mismatch(const TierConfig& tier);

enum class Lobe { main, side, invisible };

Lobe classify(const TierGeometry& geo, double r);

struct Satellite {
  int tier = 0;
  double distance = 0.0;     ///< slant distance to the user
  double earth_angle = 0.0;  ///< polar angle seen from the Earth centre
  Lobe lobe = Lobe::invisible;
  double fading = 0.0;       ///< power gain H; zero until drawn
};

struct SatelliteRealization {
  std::vector<Satellite> satellites;
  std::vector<int> visible_count;  ///< per tier
};

/// Samples one tier of the spherical Poisson process and appends it to
/// `out`. With `keep_invisible` unset only satellites above the horizon are
/// stored (their count still follows the full process).
void sample_tier(std::mt19937_64& rng, const TierConfig& tier, int tier_index,
                 SatelliteRealization& out, bool keep_invisible = false);

/// Draws H for every visible satellite.
void draw_fading(std::mt19937_64& rng, const ChannelParams& channel, SatelliteRealization& real);

/// Void exponent lambda pi (R_S / R_E)(r^2 - h^2) of the cap closer than r.
double cap_void_exponent(double r, const TierConfig& tier);

using Vec3 = std::array<double, 3>;

/// Walker-delta pattern i:T/P/F with T = planes * sats_per_plane.
std::vector<Vec3> walker_delta(int planes, int sats_per_plane, double inclination,
                               double altitude, int phasing,
                               double earth_radius = kEarthRadius);

/// Great-circle angle from a satellite at polar angle phi_e to the dome
/// boundary (half-angle phi_d) along longitude theta. Defined for every
/// phi_e; outside the dome it is the angle to the boundary point, not an exit.
double exit_arc_angle(double phi_e, double theta, double phi_d);

/// Time for the tier-i satellite at slant distance r to leave the dome along
/// departure longitude theta.
double exit_time(double r, double theta, const TierConfig& tier);

}  // namespace hetsat
