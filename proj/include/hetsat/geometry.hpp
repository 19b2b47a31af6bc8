#pragma once

#include "hetsat/units.hpp"

namespace hetsat {

// Lengths are metres and angles radians throughout. The typical user sits at
// the north pole of the Earth sphere; a satellite on the orbit sphere of
// radius R_S is described by its Earth-centred polar angle or, equivalently,
// its slant distance to the user.

/// Slant distance to the horizon, sqrt(R_S^2 - R_E^2).
double max_visible_distance(double orbit_radius, double earth_radius = kEarthRadius);

/// Earth-centred angle at which a satellite reaches the user with its main
/// lobe, for a beam of full width `beam_angle`.
double main_lobe_contact_angle(double beam_angle, double orbit_radius,
                               double earth_radius = kEarthRadius);

/// Slant distance at Earth-centred angle `contact_angle`, clamped to
/// [h, r_max] so endpoint round-off stays inside the visible range.
double main_lobe_reach(double contact_angle, double orbit_radius,
                       double earth_radius = kEarthRadius);

/// Earth-centred angle of a satellite at slant distance r.
double distance_to_earth_angle(double r, double orbit_radius, double earth_radius = kEarthRadius);

/// Law of cosines: slant distance of a satellite at Earth-centred angle `angle`.
/// Accepts any angle; negative angles map like their absolute value.
double earth_angle_to_distance(double angle, double orbit_radius,
                               double earth_radius = kEarthRadius);

/// Earth-centred angle of the horizon, arccos(R_E / R_S).
double horizon_angle(double orbit_radius, double earth_radius = kEarthRadius);

/// Beam width at which the main lobe just reaches the horizon.
double widest_beam(double orbit_radius, double earth_radius = kEarthRadius);

/// Derived spherical geometry of one orbital tier.
struct TierGeometry {
  double earth_radius = kEarthRadius;
  double altitude = 0.0;         ///< h
  double orbit_radius = 0.0;     ///< R_S = R_E + h
  double max_distance = 0.0;     ///< r_max
  double beam_angle = 0.0;       ///< main-lobe beam width
  double contact_angle = 0.0;    ///< Earth-centred main-lobe contact angle
  double main_lobe_reach = 0.0;  ///< r_m
  double dome_angle = 0.0;       ///< Earth-centred dome half-angle

  static TierGeometry make(double altitude, double beam_angle, double dome_angle,
                           double earth_radius = kEarthRadius);

  double earth_angle(double r) const {
    return distance_to_earth_angle(r, orbit_radius, earth_radius);
  }
  double distance(double angle) const {
    return earth_angle_to_distance(angle, orbit_radius, earth_radius);
  }
  double horizon() const { return horizon_angle(orbit_radius, earth_radius); }
  bool visible(double r) const { return r <= max_distance; }
};

}  // namespace hetsat
