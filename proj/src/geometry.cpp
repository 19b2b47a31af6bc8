#include "hetsat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hetsat/errors.hpp"

namespace hetsat {

namespace {

void require_orbit_above_earth(double orbit_radius, double earth_radius) {
  if (!(earth_radius > 0.0) || !(orbit_radius > earth_radius)) {
    throw DomainError("orbit radius " + std::to_string(orbit_radius) +
                      " must exceed Earth radius " + std::to_string(earth_radius));
  }
}

}  // namespace

double max_visible_distance(double orbit_radius, double earth_radius) {
  require_orbit_above_earth(orbit_radius, earth_radius);
  return std::sqrt((orbit_radius - earth_radius) * (orbit_radius + earth_radius));
}

double main_lobe_contact_angle(double beam_angle, double orbit_radius, double earth_radius) {
  require_orbit_above_earth(orbit_radius, earth_radius);
  if (!(beam_angle >= 0.0) || !(beam_angle < kPi)) {
    throw DomainError("beam angle must lie in [0, pi)");
  }
  const double half = 0.5 * beam_angle;
  const double arg = orbit_radius / earth_radius * std::sin(half);
  if (arg > 1.0 + 1e-12) {
    throw DomainError("beam wider than the visible horizon");
  }
  return std::asin(std::min(arg, 1.0)) - half;
}

double main_lobe_reach(double contact_angle, double orbit_radius, double earth_radius) {
  require_orbit_above_earth(orbit_radius, earth_radius);
  if (!(contact_angle >= 0.0)) throw DomainError("contact angle must be non-negative");
  const double h = orbit_radius - earth_radius;
  const double r = earth_angle_to_distance(contact_angle, orbit_radius, earth_radius);
  return std::clamp(r, h, max_visible_distance(orbit_radius, earth_radius));
}

double distance_to_earth_angle(double r, double orbit_radius, double earth_radius) {
  require_orbit_above_earth(orbit_radius, earth_radius);
  const double h = orbit_radius - earth_radius;
  const double r_max = max_visible_distance(orbit_radius, earth_radius);
  const double slack = 1e-9 * r_max;
  if (r < h - slack || r > r_max + slack) {
    throw DomainError("slant distance " + std::to_string(r) + " outside [h, r_max]");
  }
  const double c = (orbit_radius * orbit_radius + earth_radius * earth_radius - r * r) /
                   (2.0 * earth_radius * orbit_radius);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double earth_angle_to_distance(double angle, double orbit_radius, double earth_radius) {
  // (R_S - R_E)^2 + 2 R_S R_E (1 - cos a) avoids cancellation near a = 0.
  const double h = orbit_radius - earth_radius;
  const double s = std::sin(0.5 * angle);
  return std::sqrt(h * h + 4.0 * orbit_radius * earth_radius * s * s);
}

double horizon_angle(double orbit_radius, double earth_radius) {
  require_orbit_above_earth(orbit_radius, earth_radius);
  return std::acos(earth_radius / orbit_radius);
}

double widest_beam(double orbit_radius, double earth_radius) {
  require_orbit_above_earth(orbit_radius, earth_radius);
  return 2.0 * std::asin(earth_radius / orbit_radius);
}

TierGeometry TierGeometry::make(double altitude, double beam_angle, double dome_angle,
                                double earth_radius) {
  if (!(altitude > 0.0)) throw DomainError("altitude must be positive");
  if (!(dome_angle >= 0.0)) throw DomainError("dome angle must be non-negative");
  TierGeometry g;
  g.earth_radius = earth_radius;
  g.altitude = altitude;
  g.orbit_radius = earth_radius + altitude;
  g.max_distance = max_visible_distance(g.orbit_radius, earth_radius);
  g.beam_angle = beam_angle;
  g.contact_angle = main_lobe_contact_angle(beam_angle, g.orbit_radius, earth_radius);
  g.main_lobe_reach = hetsat::main_lobe_reach(g.contact_angle, g.orbit_radius, earth_radius);
  g.dome_angle = dome_angle;
  return g;
}

}  // namespace hetsat
