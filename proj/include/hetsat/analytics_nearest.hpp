#pragma once

#include <utility>
#include <vector>

#include "hetsat/numerics.hpp"
#include "hetsat/scenario.hpp"

namespace hetsat {

// Nearest-satellite association. A tier-i satellite at slant distance r
// serves the user when no satellite of any tier is closer.

/// Sum over tiers of 1(r >= h_k) lambda_k pi (R_S^k / R_E)(r^2 - h_k^2), capped at
/// each tier's horizon.
double nearest_void_exponent(const Scenario& sc, double r);

/// 2 lambda_i pi (R_S^i / R_E) r exp(-nearest_void_exponent(r)): joint density of
/// "tier i serves at distance r".
double nearest_serving_density(const Scenario& sc, int tier, double r);

double assoc_prob_nearest(const Scenario& sc, int tier);
std::vector<double> assoc_probs_nearest(const Scenario& sc);

/// Probability that tier i has at least one satellite in its main-lobe cap,
/// 1 - exp(-lambda 2 pi R_S^2 (1 - cos phi_contact)).
double main_lobe_presence(const TierConfig& tier);

/// Serving-distance density conditioned on S = i and the lobe. Normalised by
/// the exact lobe mass so it integrates to one over the lobe's support.
double conditional_distance_pdf(const Scenario& sc, int tier, double r, Lobe lobe);
/// Mass of the serving density on the lobe's support.
double lobe_serving_mass(const Scenario& sc, int tier, Lobe lobe);
/// The normaliser P_{lobe,i} * P_ass,i of the closed-form statement.
double printed_lobe_normaliser(const Scenario& sc, int tier, Lobe lobe);

/// Alzer-bound constants for the rounded gamma shape.
/// Gamma tail approximation P(H > x) ~ 1 - (1 - e^{-A x})^chi for a gain of
/// shape chi and scale beta.
struct AlzerKernelParams {
  double chi = 1.0;
  double A = 1.0;  ///< Gamma(chi + 1)^(-1/chi) / beta
};
AlzerKernelParams alzer_params(const ChannelParams& ch);
/// Generalised binomial coefficient chi (chi - 1) ... (chi - q + 1) / q!.
double alzer_binomial(double chi, int q);

/// Laplace transform E[exp(-s I)] of the interference seen by a user served
/// from tier `tier` at distance r in lobe `lobe`.
double interference_lt_nearest(const Scenario& sc, double s, int tier, double r, Lobe lobe);

/// Alzer coverage kernel at serving distance r: sum over q of
/// C(chi, q) (-1)^(q+1) e^(-s sigma^2) L_I(s).
double coverage_kernel_nearest(const Scenario& sc, int tier, double r, Lobe lobe);

struct TierBreakdown {
  double total = 0.0;
  std::vector<double> per_tier;
};

/// Joint coverage per tier, P(SINR > gamma_i, S = i), and its sum.
TierBreakdown coverage_prob_nearest(const Scenario& sc);

// ---------------------------------------------------------------------------
// Non-handover probability

/// Exit-region algebra for one departure longitude theta.
struct NhpGeometry {
  double kappa = 0.0;  ///< arctan(tan(phi_D) cos(theta))
  double p = 0.0;      ///< cos(c t / R_S) / sqrt(1 - sin^2 phi_D sin^2 theta)
  bool always = false; ///< every distance admissible
  bool never = false;  ///< no distance admissible

  static NhpGeometry make(const TierConfig& tier, double theta, double t_th);
  /// Distance intervals, inside [lo, hi], where the exit time exceeds t_th.
  std::vector<std::pair<double, double>> admissible(const TierConfig& tier, double lo,
                                                    double hi) const;
};

/// Precomputed coverage-kernel antiderivatives for NHP sweeps.
class NearestNhp {
 public:
  explicit NearestNhp(const Scenario& sc);

  struct Bracket {
    double main = 0.0;  ///< P(SINR, t_E >= t, main lobe | S = i)
    double side = 0.0;
    double total() const { return main + side; }
  };

  /// Conditional bracket of tier i at handover threshold t_th, averaged over theta.
  Bracket bracket(int tier, double t_th) const;
  /// Brackets at every tier's own t_th.
  std::vector<Bracket> brackets() const;
  const Scenario& scenario() const { return sc_; }
  const std::vector<double>& assoc() const { return assoc_; }

 private:
  double region_mass(int tier, const NhpGeometry& g) const;

  Scenario sc_;
  std::vector<double> assoc_;
  std::vector<CumulativeIntegral> main_;
  std::vector<CumulativeIntegral> side_;
};

/// Sum of brackets weighted by the given association probabilities.
TierBreakdown combine_nhp(const std::vector<NearestNhp::Bracket>& brackets,
                          const std::vector<double>& assoc);

TierBreakdown nhp_nearest(const Scenario& sc);

// ---------------------------------------------------------------------------
// Delay outage

/// 1 - exp(-lambda pi (R_S / R_E)(d^2 - h^2)) with d = c T_D clamped to [h, r_max].
double delay_factor(const TierConfig& tier);

/// How the per-tier delay probability P{R_i <= c T_D | S = i} is evaluated.
/// `conditional` integrates the serving-distance density of the policy up to
/// c T_D. `printed` uses delay_factor, the unconditional law of the nearest
/// tier-i distance, which still counts realisations where tier i is empty.
enum class DopForm { conditional, printed };

TierBreakdown dop_nearest(const Scenario& sc, DopForm form = DopForm::conditional);

}  // namespace hetsat
