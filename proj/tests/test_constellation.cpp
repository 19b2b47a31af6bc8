#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "hetsat/constellation.hpp"
#include "hetsat/errors.hpp"
#include "hetsat/scenario.hpp"

using namespace hetsat;

namespace {

TierConfig tier1() { return TierConfig::make(table2_tier(0)); }

double visibility(const TierConfig& t) {
  const double h = t.geo.altitude, rmax = t.geo.max_distance;
  return 1.0 - std::exp(-t.density * kPi * t.geo.orbit_radius / t.geo.earth_radius * (rmax * rmax - h * h));
}

}  // namespace

TEST_CASE("count to density") {
  TierParams p = table2_tier(0);
  CHECK(p.count == 100.0);
  const TierConfig t = TierConfig::make(p);
  CHECK(t.density == 100.0 / (4.0 * std::numbers::pi * 6971000.0 * 6971000.0));
  CHECK(t.density == doctest::Approx(1.637e-13).epsilon(5e-4));

  p.density = 1e-13;
  CHECK_THROWS_AS(TierConfig::make(p), DomainError);
  p.count = 0.0;
  p.power = -1.0;
  CHECK_THROWS_AS(TierConfig::make(p), DomainError);
}

TEST_CASE("Poisson sampling") {
  const TierConfig t = tier1();
  std::mt19937_64 rng(21);
  const int n = 10000;
  double total = 0.0;
  int any_visible = 0;
  for (int i = 0; i < n; ++i) {
    SatelliteRealization r;
    sample_tier(rng, t, 0, r, true);
    total += static_cast<double>(r.satellites.size());
    any_visible += r.visible_count[0] > 0;
  }
  CHECK(total / n == doctest::Approx(100.0).epsilon(0.01));
  CHECK(std::abs(any_visible / double(n) - visibility(t)) < 0.01);

  TierConfig empty = t;
  empty.expected_count = 0.0;
  SatelliteRealization r;
  sample_tier(rng, empty, 0, r, true);
  CHECK(r.satellites.empty());
}

TEST_CASE("cap void exponent") {
  const TierConfig t = tier1();
  CHECK(cap_void_exponent(t.geo.altitude, t) == 0.0);
  CHECK(1.0 - std::exp(-cap_void_exponent(t.geo.max_distance, t)) == doctest::Approx(visibility(t)).epsilon(1e-12));

  std::mt19937_64 rng(22);
  const int n = 100000;
  int void_1000 = 0, void_all = 0;
  for (int i = 0; i < n; ++i) {
    SatelliteRealization r;
    sample_tier(rng, t, 0, r);
    double nearest = 1e300;
    for (const auto& s : r.satellites) nearest = std::min(nearest, s.distance);
    void_1000 += nearest > km(1000);
    void_all += r.satellites.empty();
  }
  CHECK(std::abs(void_1000 / double(n) - std::exp(-cap_void_exponent(km(1000), t))) < 0.005);
  CHECK(std::abs(void_all / double(n) - std::exp(-cap_void_exponent(t.geo.max_distance, t))) < 0.005);
}

TEST_CASE("lobe classification") {
  const TierConfig t = tier1();
  CHECK(classify(t.geo, t.geo.altitude) == Lobe::main);
  CHECK(classify(t.geo, km(1000)) == Lobe::side);
  CHECK(classify(t.geo, 1.01 * t.geo.max_distance) == Lobe::invisible);
}

TEST_CASE("Walker-delta snapshot") {
  const auto one = walker_delta(1, 1, 0.0, km(600), 0);
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0][2]) < 1e-6);
  CHECK(std::hypot(one[0][0], one[0][1]) == doctest::Approx(kEarthRadius + km(600)));

  const auto shell = walker_delta(22, 72, 53.0 * std::numbers::pi / 180.0, km(550), 1);
  CHECK(shell.size() == 1584);
  for (const auto& p : shell) {
    CHECK(std::hypot(p[0], p[1], p[2]) == doctest::Approx(kEarthRadius + km(550)).epsilon(1e-12));
  }

  // A user at the pole sees the same slant ranges after any rotation about the axis.
  const Vec3 user{0.0, 0.0, kEarthRadius};
  auto ranges = [&](double rot) {
    std::vector<double> out;
    for (const auto& p : shell) {
      const double x = p[0] * std::cos(rot) - p[1] * std::sin(rot);
      const double y = p[0] * std::sin(rot) + p[1] * std::cos(rot);
      out.push_back(std::hypot(x - user[0], y - user[1], p[2] - user[2]));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto base = ranges(0.0);
  const auto turned = ranges(0.7);
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(turned[i] == doctest::Approx(base[i]).epsilon(1e-12));

  CHECK_THROWS_AS(walker_delta(0, 10, 0.9, km(600), 0), DomainError);
}

TEST_CASE("exit arc from the dome") {
  const TierConfig t = tier1();
  const double phi_d = t.geo.dome_angle;
  for (double theta : {0.0, 1.0, 2.5}) {
    CHECK(exit_time(t.geo.altitude, theta, t) == doctest::Approx(t.geo.orbit_radius * phi_d / t.velocity));
  }
  CHECK(exit_arc_angle(phi_d, 0.0, phi_d) == doctest::Approx(0.0));

  // Walk along the great circle through the satellite and the exit point on
  // the dome rim at azimuth theta; the first rim crossing gives the arc.
  const double phi_e = 0.05, theta = std::numbers::pi / 2;
  auto unit = [](double polar, double az) {
    return Vec3{std::sin(polar) * std::cos(az), std::sin(polar) * std::sin(az), std::cos(polar)};
  };
  const Vec3 a = unit(phi_e, 0.0), b = unit(phi_d, theta);
  const double span = std::acos(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
  double s = 0.0;
  const double step = 1e-7;
  for (;; s += step) {
    const double wa = std::sin(span - s) / std::sin(span), wb = std::sin(s) / std::sin(span);
    const double z = wa * a[2] + wb * b[2];
    if (std::acos(std::min(z, 1.0)) >= phi_d) break;
  }
  CHECK(exit_arc_angle(phi_e, theta, phi_d) == doctest::Approx(s).epsilon(1e-5));
  const double r = t.geo.distance(phi_e);
  CHECK(exit_time(r, theta, t) == doctest::Approx(t.geo.orbit_radius * s / t.velocity).epsilon(1e-5));

  CHECK_THROWS_AS(exit_time(t.geo.distance(0.2), 0.0, t), DomainError);
}
