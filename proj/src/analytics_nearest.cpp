#include "hetsat/analytics_nearest.hpp"

#include <algorithm>
#include <cmath>

#include "hetsat/errors.hpp"

namespace hetsat {

namespace {

// Distances where the serving density or the transform limits have kinks.
std::vector<double> kink_points(const Scenario& sc) {
  std::vector<double> b;
  for (const auto& t : sc.tiers) {
    b.push_back(t.geo.altitude);
    b.push_back(t.geo.main_lobe_reach);
    b.push_back(t.geo.max_distance);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

QuadratureSpec radial_spec(const Scenario& sc) {
  QuadratureSpec q = sc.numerics;
  q.rel_tol = std::max(q.rel_tol, 1e-10);
  return q;
}

const TierConfig& tier_at(const Scenario& sc, int i) {
  if (i < 0 || i >= sc.size()) throw DomainError("tier index out of range");
  return sc.tiers[i];
}

// int_lo^hi (1 - (1 + a beta x^-alpha)^-chi) x dx
double interferer_integral(double a, double lo, double hi, const ChannelParams& ch,
                           const QuadratureSpec& spec) {
  if (!(hi > lo) || a == 0.0) return 0.0;
  const double ab = a * ch.beta();
  const double alpha = ch.alpha();
  const double chi = ch.chi();
  auto f = [&](double x) {
    const double u = ab * std::pow(x, -alpha);
    return -std::expm1(-chi * std::log1p(u)) * x;
  };
  return adaptive_quad(f, lo, hi, spec).value;
}

}  // namespace

double nearest_void_exponent(const Scenario& sc, double r) {
  double e = 0.0;
  for (const auto& t : sc.tiers) {
    if (r < t.geo.altitude) continue;
    const double d = std::min(r, t.geo.max_distance);
    e += t.cap_coefficient() * (d * d - t.geo.altitude * t.geo.altitude);
  }
  return e;
}

double nearest_serving_density(const Scenario& sc, int tier, double r) {
  const TierConfig& t = tier_at(sc, tier);
  if (r < t.geo.altitude || r > t.geo.max_distance) return 0.0;
  return 2.0 * t.cap_coefficient() * r * std::exp(-nearest_void_exponent(sc, r));
}

double assoc_prob_nearest(const Scenario& sc, int tier) {
  const TierConfig& t = tier_at(sc, tier);
  const auto breaks = kink_points(sc);
  auto f = [&](double r) { return nearest_serving_density(sc, tier, r); };
  return adaptive_quad_split(f, t.geo.altitude, t.geo.max_distance, breaks, radial_spec(sc))
      .require("nearest association");
}

std::vector<double> assoc_probs_nearest(const Scenario& sc) {
  std::vector<double> out;
  for (int i = 0; i < sc.size(); ++i) out.push_back(assoc_prob_nearest(sc, i));
  return out;
}

double main_lobe_presence(const TierConfig& tier) {
  const double rs = tier.geo.orbit_radius;
  return -std::expm1(-tier.density * 2.0 * kPi * rs * rs * (1.0 - std::cos(tier.geo.contact_angle)));
}

double lobe_serving_mass(const Scenario& sc, int tier, Lobe lobe) {
  const TierConfig& t = tier_at(sc, tier);
  const double lo = lobe == Lobe::main ? t.geo.altitude : t.geo.main_lobe_reach;
  const double hi = lobe == Lobe::main ? t.geo.main_lobe_reach : t.geo.max_distance;
  if (lobe == Lobe::invisible) throw DomainError("no serving mass beyond the horizon");
  const auto breaks = kink_points(sc);
  auto f = [&](double r) { return nearest_serving_density(sc, tier, r); };
  return adaptive_quad_split(f, lo, hi, breaks, radial_spec(sc)).require("lobe mass");
}

double printed_lobe_normaliser(const Scenario& sc, int tier, Lobe lobe) {
  const double pm = main_lobe_presence(tier_at(sc, tier));
  const double pl = lobe == Lobe::main ? pm : 1.0 - pm;
  return pl * assoc_prob_nearest(sc, tier);
}

double conditional_distance_pdf(const Scenario& sc, int tier, double r, Lobe lobe) {
  const TierConfig& t = tier_at(sc, tier);
  const double lo = lobe == Lobe::main ? t.geo.altitude : t.geo.main_lobe_reach;
  const double hi = lobe == Lobe::main ? t.geo.main_lobe_reach : t.geo.max_distance;
  if (lobe == Lobe::invisible || r < lo || r > hi) {
    throw DomainError("distance outside the lobe's support");
  }
  const double mass = lobe_serving_mass(sc, tier, lobe);
  if (!(mass > 0.0)) return 0.0;
  return nearest_serving_density(sc, tier, r) / mass;
}

AlzerKernelParams alzer_params(const ChannelParams& ch) {
  AlzerKernelParams a;
  a.chi = ch.chi();
  a.A = std::pow(std::tgamma(a.chi + 1.0), -1.0 / a.chi) / ch.beta();
  return a;
}

double alzer_binomial(double chi, int q) {
  if (q < 0) return 0.0;
  double c = 1.0;
  for (int j = 1; j <= q; ++j) c *= (chi - j + 1.0) / j;
  return c;
}

double interference_lt_nearest(const Scenario& sc, double s, int tier, double r, Lobe lobe) {
  tier_at(sc, tier);
  if (!(s >= 0.0)) throw DomainError("transform argument must be non-negative");
  if (lobe == Lobe::invisible) throw DomainError("serving satellite must be visible");
  if (s == 0.0) return 1.0;
  const auto spec = radial_spec(sc);
  double expo = 0.0;
  for (const auto& k : sc.tiers) {
    const double h = k.geo.altitude;
    const double rm = k.geo.main_lobe_reach;
    const double rmax = k.geo.max_distance;
    // Nearest association: every interferer lies beyond r.
    double acc = interferer_integral(s * k.main_power(), std::max(h, r), std::max(rm, r), sc.channel, spec);
    acc += interferer_integral(s * k.side_power(), std::max(rm, r), std::max(rmax, r), sc.channel, spec);
    expo += 2.0 * k.cap_coefficient() * acc;
  }
  return std::exp(-expo);
}

double coverage_kernel_nearest(const Scenario& sc, int tier, double r, Lobe lobe) {
  const TierConfig& t = tier_at(sc, tier);
  const AlzerKernelParams a = alzer_params(sc.channel);
  const double serving = lobe == Lobe::main ? t.main_power() : t.side_power();
  const double base = a.A * t.gamma_th * std::pow(r, sc.channel.alpha()) / serving;
  // 1 - (1 - e^{-x})^chi expanded as a binomial series; finite for integer chi.
  double acc = 0.0;
  double coef = 1.0;
  for (int q = 1; q <= sc.numerics.series_terms; ++q) {
    coef *= (a.chi - q + 1.0) / q;
    if (coef == 0.0) break;
    const double s = q * base;
    const double term = (q % 2 == 1 ? coef : -coef) * std::exp(-s * sc.channel.noise()) *
                        interference_lt_nearest(sc, s, tier, r, lobe);
    acc += term;
    if (q >= 2 && std::abs(term) <= 1e-10 * std::abs(acc)) break;
  }
  return acc;
}

TierBreakdown coverage_prob_nearest(const Scenario& sc) {
  sc.validate();
  const auto breaks = kink_points(sc);
  const auto spec = radial_spec(sc);
  TierBreakdown out;
  for (int i = 0; i < sc.size(); ++i) {
    const TierGeometry& g = sc.tiers[i].geo;
    auto fm = [&](double r) {
      return coverage_kernel_nearest(sc, i, r, Lobe::main) * nearest_serving_density(sc, i, r);
    };
    auto fs = [&](double r) {
      return coverage_kernel_nearest(sc, i, r, Lobe::side) * nearest_serving_density(sc, i, r);
    };
    const double main = adaptive_quad_split(fm, g.altitude, g.main_lobe_reach, breaks, spec)
                            .require("nearest coverage, main lobe");
    const double side = adaptive_quad_split(fs, g.main_lobe_reach, g.max_distance, breaks, spec)
                            .require("nearest coverage, side lobe");
    out.per_tier.push_back(main + side);
    out.total += main + side;
  }
  return out;
}

// ---------------------------------------------------------------------------

NhpGeometry NhpGeometry::make(const TierConfig& tier, double theta, double t_th) {
  NhpGeometry g;
  const double phi_d = tier.geo.dome_angle;
  const double arc = tier.velocity * t_th / tier.geo.orbit_radius;
  g.kappa = std::atan(std::tan(phi_d) * std::cos(theta));
  if (arc >= kPi) {
    g.p = -INFINITY;
    g.never = true;
    return g;
  }
  const double st = std::sin(std::abs(theta));
  const double sd = std::sin(phi_d);
  g.p = std::cos(arc) / std::sqrt(1.0 - sd * sd * st * st);
  g.always = g.p > 1.0;
  g.never = g.p < -1.0;
  return g;
}

std::vector<std::pair<double, double>> NhpGeometry::admissible(const TierConfig& tier, double lo,
                                                               double hi) const {
  std::vector<std::pair<double, double>> out;
  if (never || !(hi > lo)) return out;
  auto push = [&](double a, double b) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (b > a) out.emplace_back(a, b);
  };
  if (always) {
    push(lo, hi);
    return out;
  }
  const double spread = std::acos(std::clamp(p, -1.0, 1.0));
  const double lower = kappa - spread;
  const double upper = kappa + spread;
  const double horizon = tier.geo.horizon();
  if (upper < 0.0) {
    push(lo, hi);
    return out;
  }
  if (lower > 0.0) push(tier.geo.altitude, tier.geo.distance(std::min(lower, horizon)));
  if (upper < horizon) push(tier.geo.distance(upper), tier.geo.max_distance);
  return out;
}

NearestNhp::NearestNhp(const Scenario& sc) : sc_(sc) {
  sc_.validate();
  assoc_ = assoc_probs_nearest(sc_);
  const auto breaks = kink_points(sc_);
  for (int i = 0; i < sc_.size(); ++i) {
    const TierGeometry& g = sc_.tiers[i].geo;
    const double pa = assoc_[i];
    auto fm = [&, i, pa](double r) {
      if (!(pa > 0.0)) return 0.0;
      return coverage_kernel_nearest(sc_, i, r, Lobe::main) * nearest_serving_density(sc_, i, r) / pa;
    };
    auto fs = [&, i, pa](double r) {
      if (!(pa > 0.0)) return 0.0;
      return coverage_kernel_nearest(sc_, i, r, Lobe::side) * nearest_serving_density(sc_, i, r) / pa;
    };
    main_.emplace_back(fm, g.altitude, g.main_lobe_reach, breaks, 2);
    side_.emplace_back(fs, g.main_lobe_reach, g.max_distance, breaks, 8);
  }
}

double NearestNhp::region_mass(int tier, const NhpGeometry& g) const {
  const TierConfig& t = sc_.tiers[tier];
  double acc = 0.0;
  for (const auto& [a, b] : g.admissible(t, t.geo.altitude, t.geo.max_distance)) {
    acc += main_[tier].between(a, std::min(b, t.geo.main_lobe_reach));
    acc += side_[tier].between(std::max(a, t.geo.main_lobe_reach), b);
  }
  return acc;
}

NearestNhp::Bracket NearestNhp::bracket(int tier, double t_th) const {
  tier_at(sc_, tier);
  if (!(t_th >= 0.0)) throw DomainError("handover threshold must be non-negative");
  const TierConfig& t = sc_.tiers[tier];
  const double rm = t.geo.main_lobe_reach;
  auto average = [&](int n, Bracket& out) {
    out = {};
    for (int j = 0; j < n; ++j) {
      const double theta = kPi * (j + 0.5) / n;
      const NhpGeometry g = NhpGeometry::make(t, theta, t_th);
      for (const auto& [a, b] : g.admissible(t, t.geo.altitude, t.geo.max_distance)) {
        out.main += main_[tier].between(a, std::min(b, rm));
        out.side += side_[tier].between(std::max(a, rm), b);
      }
    }
    out.main /= n;
    out.side /= n;
  };
  Bracket prev;
  average(64, prev);
  for (int n = 128; n <= (1 << 14); n *= 2) {
    Bracket next;
    average(n, next);
    const bool settled = std::abs(next.total() - prev.total()) < 1e-4;
    prev = next;
    if (settled) break;
  }
  return prev;
}

std::vector<NearestNhp::Bracket> NearestNhp::brackets() const {
  std::vector<Bracket> out;
  for (int i = 0; i < sc_.size(); ++i) out.push_back(bracket(i, sc_.tiers[i].t_th));
  return out;
}

TierBreakdown combine_nhp(const std::vector<NearestNhp::Bracket>& brackets,
                          const std::vector<double>& assoc) {
  if (brackets.size() != assoc.size()) throw DomainError("bracket/association size mismatch");
  TierBreakdown out;
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    out.per_tier.push_back(brackets[i].total() * assoc[i]);
    out.total += out.per_tier.back();
  }
  return out;
}

TierBreakdown nhp_nearest(const Scenario& sc) {
  NearestNhp nhp(sc);
  return combine_nhp(nhp.brackets(), nhp.assoc());
}

double delay_factor(const TierConfig& tier) {
  const double h = tier.geo.altitude;
  const double d = std::clamp(kSpeedOfLight * tier.delay_th, h, tier.geo.max_distance);
  return -std::expm1(-tier.cap_coefficient() * (d * d - h * h));
}

TierBreakdown dop_nearest(const Scenario& sc, DopForm form) {
  TierBreakdown out;
  if (form == DopForm::printed) {
    const auto assoc = assoc_probs_nearest(sc);
    for (int i = 0; i < sc.size(); ++i) out.per_tier.push_back(delay_factor(sc.tiers[i]) * assoc[i]);
  } else {
    const auto breaks = kink_points(sc);
    for (int i = 0; i < sc.size(); ++i) {
      const TierConfig& t = sc.tiers[i];
      const double d = std::min(kSpeedOfLight * t.delay_th, t.geo.max_distance);
      auto f = [&](double r) { return nearest_serving_density(sc, i, r); };
      out.per_tier.push_back(d > t.geo.altitude
                                 ? adaptive_quad_split(f, t.geo.altitude, d, breaks, radial_spec(sc))
                                       .require("delay outage")
                                 : 0.0);
    }
  }
  for (double v : out.per_tier) out.total += v;
  return out;
}

}  // namespace hetsat
