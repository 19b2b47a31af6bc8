#pragma once

#include <string>
#include <vector>

#include "hetsat/analytics_nearest.hpp"
#include "hetsat/numerics.hpp"
#include "hetsat/scenario.hpp"

namespace hetsat {

/// varpi(z, v) = 1(z > v)(z^2 - v^2).
double varpi(double z, double v);

/// Cross-tier exponent psi_i(r): tiers k != i whose nearest satellite would
/// beat a tier-i satellite at r on mean main-lobe power. The equivalent
/// distance is capped at tier k's horizon.
double psi_max(const Scenario& sc, int tier, double r);

/// Joint density of {S = i, R_i = r} under mean-power association.
double maxsinr_serving_density(const Scenario& sc, int tier, double r);
double assoc_prob_maxsinr(const Scenario& sc, int tier);
std::vector<double> assoc_probs_maxsinr(const Scenario& sc);

struct LobeRegionProbs {
  double main = 0.0;  ///< at least one satellite in some tier's main-lobe cap
  double side = 1.0;
};
LobeRegionProbs lobe_region_probs_maxsinr(const Scenario& sc);

/// Which lobe the strongest serving candidate is drawn from.
enum class ServingRegion { main, side };

/// Joint-transform kernels Theta(omega, y) and Upsilon(omega, y) for one
/// serving region. Powers are divided by the mean aggregate interference so
/// omega and y are O(1); the coverage probability is scale-free.
class MaxSinrKernels {
 public:
  MaxSinrKernels(const Scenario& sc, ServingRegion region);

  cplx theta(double omega, double y) const;
  cplx upsilon(double omega, double y) const;
  /// Non-decaying part of theta * upsilon as omega grows: no satellite
  /// interferes, so the aggregate equals the single serving signal.
  std::vector<TransformAtom> atoms(double y) const;
  JointTransform transform() const;

  /// Reference power the kernels are scaled by (W).
  double power_scale() const { return scale_; }
  /// Probability that no satellite is visible.
  double empty_sky() const { return empty_sky_; }

 private:
  struct Band {
    double density2 = 0.0;  // 2 lambda pi R_S / R_E
    double power = 0.0;     // scaled p G
    double delta = 1.0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> x;   // nodes
    std::vector<double> wx;  // weight * x
    std::vector<double> u;   // x^-alpha
  };
  double upsilon_weight(const Band& b, double y) const;

  ServingRegion region_;
  double chi_;
  double beta_;
  double alpha_;
  double noise_;
  double scale_;
  double empty_sky_;
  double gamma_chi_;
  std::vector<Band> serving_;
  std::vector<Band> other_;
};

struct MaxSinrCoverage {
  double total = 0.0;
  LobeRegionProbs regions;
  InversionResult main;
  InversionResult side;
  bool heterogeneous_thresholds = false;
  std::vector<std::string> warnings;
};

MaxSinrCoverage coverage_prob_maxsinr(const Scenario& sc, bool parallel = true);

/// Nearest-policy conditional NHP brackets weighted by max-SINR association.
TierBreakdown nhp_maxsinr(const Scenario& sc);
TierBreakdown dop_maxsinr(const Scenario& sc, DopForm form = DopForm::conditional);

}  // namespace hetsat
