#include "hetsat/analytics_maxsinr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hetsat/errors.hpp"

namespace hetsat {

double varpi(double z, double v) { return z > v ? z * z - v * v : 0.0; }

double psi_max(const Scenario& sc, int tier, double r) {
  const TierConfig& ti = sc.tiers.at(tier);
  const double inv_alpha = 1.0 / sc.channel.alpha();
  double acc = 0.0;
  for (int k = 0; k < sc.size(); ++k) {
    if (k == tier) continue;
    const TierConfig& tk = sc.tiers[k];
    const double z = std::pow(tk.main_power() / ti.main_power(), inv_alpha) * r;
    acc += tk.cap_coefficient() * varpi(std::min(z, tk.geo.max_distance), tk.geo.altitude);
  }
  return acc;
}

double maxsinr_serving_density(const Scenario& sc, int tier, double r) {
  const TierConfig& ti = sc.tiers.at(tier);
  const double h = ti.geo.altitude;
  if (r < h || r > ti.geo.max_distance) return 0.0;
  const double c = ti.cap_coefficient();
  return 2.0 * c * r * std::exp(-(psi_max(sc, tier, r) + c * (r * r - h * h)));
}

namespace {

std::vector<double> cross_tier_breaks(const Scenario& sc, int tier) {
  const TierConfig& ti = sc.tiers.at(tier);
  std::vector<double> breaks;
  const double inv_alpha = 1.0 / sc.channel.alpha();
  for (int k = 0; k < sc.size(); ++k) {
    if (k == tier) continue;
    const TierConfig& tk = sc.tiers[k];
    const double ratio = std::pow(tk.main_power() / ti.main_power(), inv_alpha);
    breaks.push_back(tk.geo.altitude / ratio);
    breaks.push_back(tk.geo.max_distance / ratio);
  }
  std::sort(breaks.begin(), breaks.end());
  return breaks;
}

double serving_mass(const Scenario& sc, int tier, double upper) {
  const TierConfig& ti = sc.tiers.at(tier);
  const double hi = std::min(upper, ti.geo.max_distance);
  if (!(hi > ti.geo.altitude)) return 0.0;
  auto f = [&](double r) { return maxsinr_serving_density(sc, tier, r); };
  QuadratureSpec spec = sc.numerics;
  spec.rel_tol = std::max(spec.rel_tol, 1e-10);
  return adaptive_quad_split(f, ti.geo.altitude, hi, cross_tier_breaks(sc, tier), spec)
      .require("max-SINR association");
}

}  // namespace

double assoc_prob_maxsinr(const Scenario& sc, int tier) {
  return serving_mass(sc, tier, sc.tiers.at(tier).geo.max_distance);
}

std::vector<double> assoc_probs_maxsinr(const Scenario& sc) {
  std::vector<double> out;
  for (int i = 0; i < sc.size(); ++i) out.push_back(assoc_prob_maxsinr(sc, i));
  return out;
}

LobeRegionProbs lobe_region_probs_maxsinr(const Scenario& sc) {
  double expo = 0.0;
  for (const auto& t : sc.tiers) {
    const double rs = t.geo.orbit_radius;
    expo += t.density * 2.0 * kPi * rs * rs * (1.0 - std::cos(t.geo.contact_angle));
  }
  LobeRegionProbs p;
  p.side = std::exp(-expo);
  p.main = -std::expm1(-expo);
  return p;
}

// ---------------------------------------------------------------------------

MaxSinrKernels::MaxSinrKernels(const Scenario& sc, ServingRegion region)
    : region_(region), chi_(sc.channel.chi()), beta_(sc.channel.beta()),
      alpha_(sc.channel.alpha()), gamma_chi_(std::tgamma(sc.channel.chi())) {
  sc.validate();
  const int nodes = sc.numerics.kernel_nodes;
  constexpr int kPanels = 2;
  auto make_band = [&](const TierConfig& t, bool main_lobe) {
    Band b;
    b.density2 = 2.0 * t.cap_coefficient();
    b.power = main_lobe ? t.main_power() : t.side_power();
    b.delta = t.delta_th();
    b.lo = main_lobe ? t.geo.altitude : t.geo.main_lobe_reach;
    b.hi = main_lobe ? t.geo.main_lobe_reach : t.geo.max_distance;
    if (b.hi > b.lo) {
      const GaussLegendreRule rule(b.lo, b.hi, kPanels, nodes);
      for (std::size_t j = 0; j < rule.nodes().size(); ++j) {
        const double x = rule.nodes()[j];
        b.x.push_back(x);
        b.wx.push_back(rule.weights()[j] * x);
        b.u.push_back(std::pow(x, -alpha_));
      }
    }
    return b;
  };
  const bool serve_main = region == ServingRegion::main;
  double visible = 0.0;
  for (const auto& t : sc.tiers) {
    serving_.push_back(make_band(t, serve_main));
    other_.push_back(make_band(t, !serve_main));
    const double h = t.geo.altitude;
    const double rmax = t.geo.max_distance;
    visible += t.cap_coefficient() * (rmax * rmax - h * h);
  }
  empty_sky_ = std::exp(-visible);

  // Mean aggregate interference, the natural unit of y.
  double mean = 0.0;
  for (const auto* group : {&serving_, &other_}) {
    for (const auto& b : *group) {
      double acc = 0.0;
      for (std::size_t j = 0; j < b.x.size(); ++j) acc += b.wx[j] * b.u[j];
      mean += b.density2 * b.power * chi_ * beta_ * acc;
    }
  }
  scale_ = mean > 0.0 ? mean : 1.0;
  for (auto* group : {&serving_, &other_}) {
    for (auto& b : *group) b.power /= scale_;
  }
  noise_ = sc.channel.noise() / scale_;
}

cplx MaxSinrKernels::theta(double omega, double y) const {
  const cplx j(0.0, 1.0);
  cplx expo = 0.0;
  for (const auto& b : other_) {
    cplx acc = 0.0;
    for (std::size_t n = 0; n < b.x.size(); ++n) {
      const cplx w = 1.0 + j * omega * beta_ * b.power * b.u[n];
      acc += b.wx[n] * (1.0 - std::pow(w, -chi_));
    }
    expo += b.density2 * acc;
  }
  const double norm = std::pow(beta_, chi_) * gamma_chi_;
  for (const auto& b : serving_) {
    cplx acc = 0.0;
    for (std::size_t n = 0; n < b.x.size(); ++n) {
      const cplx w = j * omega * b.power * b.u[n] + 1.0 / beta_;
      const cplx z = j * omega * y / b.delta + y / (beta_ * b.delta * b.power * b.u[n]);
      acc += b.wx[n] * (1.0 - std::pow(w, -chi_) * lower_incomplete_gamma(chi_, z) / norm);
    }
    expo += b.density2 * acc;
  }
  return std::exp(-j * omega * noise_ - expo);
}

double MaxSinrKernels::upsilon_weight(const Band& b, double y) const {
  if (!(b.hi > b.lo) || !(y > 0.0)) return 0.0;
  const double a = chi_ + 2.0 / alpha_;
  const double c = y / (b.delta * beta_ * b.power);
  const double diff = lower_incomplete_gamma(a, c * std::pow(b.hi, alpha_)) -
                      lower_incomplete_gamma(a, c * std::pow(b.lo, alpha_));
  return b.density2 / (gamma_chi_ * alpha_) * std::pow(y, -2.0 / alpha_ - 1.0) *
         std::pow(beta_ * b.delta * b.power, 2.0 / alpha_) * diff;
}

cplx MaxSinrKernels::upsilon(double omega, double y) const {
  cplx acc = 0.0;
  for (const auto& b : serving_) {
    acc += std::exp(cplx(0.0, -omega * y / b.delta)) * upsilon_weight(b, y);
  }
  return acc;
}

std::vector<TransformAtom> MaxSinrKernels::atoms(double y) const {
  std::vector<TransformAtom> out;
  for (const auto& b : serving_) {
    const double w = empty_sky_ * upsilon_weight(b, y);
    out.push_back({w, noise_ + y / b.delta});
  }
  return out;
}

JointTransform MaxSinrKernels::transform() const {
  JointTransform t;
  t.theta = [this](double w, double y) { return theta(w, y); };
  t.upsilon = [this](double w, double y) { return upsilon(w, y); };
  t.atoms = [this](double y) { return atoms(y); };
  t.y_scale = 1.0;
  return t;
}

MaxSinrCoverage coverage_prob_maxsinr(const Scenario& sc, bool parallel) {
  sc.validate();
  MaxSinrCoverage out;
  out.regions = lobe_region_probs_maxsinr(sc);
  out.heterogeneous_thresholds = sc.heterogeneous_thresholds();
  const double delta_max = sc.max_delta_th();
  const MaxSinrKernels km(sc, ServingRegion::main);
  const MaxSinrKernels ks(sc, ServingRegion::side);
  // Each region only needs the accuracy its weight can pass on to the total.
  auto weighted = [&](double weight) {
    QuadratureSpec q = sc.numerics;
    q.target_abs = std::min(0.5, q.target_abs / std::max(weight, 1e-12));
    return q;
  };
  out.main = fourier_inversion_cp(km.transform(), delta_max, weighted(out.regions.main), parallel);
  out.side = fourier_inversion_cp(ks.transform(), delta_max, weighted(out.regions.side), parallel);
  out.total = std::clamp(out.regions.main * out.main.value + out.regions.side * out.side.value, 0.0, 1.0);
  auto check = [&](const InversionResult& r, const char* name) {
    std::ostringstream msg;
    if (r.tail_envelope > 1e-6) {
      msg << name << " kernel envelope at the frequency cut-off is " << r.tail_envelope
          << " of its peak";
      out.warnings.push_back(msg.str());
    }
    if (r.raw < -0.05 || r.raw > 1.05) {
      throw NumericalError(std::string(name) + " inversion left [-0.05, 1.05]; check truncation",
                           r.raw, r.error);
    }
    if (!r.converged) {
      throw NumericalError(std::string(name) + " inversion missed its tolerance", r.value, r.error);
    }
  };
  check(out.main, "main-lobe");
  check(out.side, "side-lobe");
  if (out.heterogeneous_thresholds) {
    out.warnings.push_back("tiers use different SINR thresholds; the closed form is underdetermined");
  }
  return out;
}

TierBreakdown nhp_maxsinr(const Scenario& sc) {
  NearestNhp nhp(sc);
  return combine_nhp(nhp.brackets(), assoc_probs_maxsinr(sc));
}

TierBreakdown dop_maxsinr(const Scenario& sc, DopForm form) {
  // One tier: the strongest mean power is the nearest satellite.
  if (sc.size() == 1) return dop_nearest(sc, form);
  TierBreakdown out;
  if (form == DopForm::printed) {
    const auto assoc = assoc_probs_maxsinr(sc);
    for (int i = 0; i < sc.size(); ++i) out.per_tier.push_back(delay_factor(sc.tiers[i]) * assoc[i]);
  } else {
    for (int i = 0; i < sc.size(); ++i) {
      out.per_tier.push_back(serving_mass(sc, i, kSpeedOfLight * sc.tiers[i].delay_th));
    }
  }
  for (double v : out.per_tier) out.total += v;
  return out;
}

}  // namespace hetsat
