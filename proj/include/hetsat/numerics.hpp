#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hetsat/errors.hpp"

namespace hetsat {

using cplx = std::complex<double>;

/// Tolerances and truncations shared by the quadrature and inversion code.
struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-10;
  int max_subdivisions = 15;  ///< maximum bisection depth of the adaptive rule
  /// Frequency cut-off of the inversion, in the caller's scaled units.
  /// Zero selects the envelope scan.
  double omega_truncation = 0.0;
  /// Upper limit of the outer y integral; zero selects the envelope scan.
  double y_truncation = 0.0;
  /// Envelope level, relative to the peak, at which the scans stop.
  double envelope_rel = 1e-8;
  /// Per-y stopping level of the frequency integral: the estimated tail,
  /// relative to the y-density, below which integration ends early.
  double tail_rel = 1e-6;
  /// Absolute accuracy asked of an inversion result.
  double target_abs = 1e-4;
  /// Hard ceiling on the scanned frequency cut-off.
  double omega_ceiling = 4096.0;
  /// Gauss-Legendre points per panel for the fixed rules inside kernels.
  int kernel_nodes = 16;
  /// Terms kept of the binomial series for the gamma-fading tail.
  int series_terms = 64;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Special functions

/// Lower incomplete gamma function gamma(a, z) for real a > 0 and complex z.
/// Power series near the origin and towards the negative real axis, Legendre
/// continued fraction for Gamma(a, z) elsewhere. Throws NumericalError if
/// neither converges within the iteration budget.
cplx lower_incomplete_gamma(double a, cplx z);

/// Real-argument convenience overload, x >= 0.
double lower_incomplete_gamma(double a, double x);

/// Regularised lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a), x >= 0.
double regularized_lower_gamma(double a, double x);

// ---------------------------------------------------------------------------
// Quadrature

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  bool converged = true;

  /// Value if the tolerance was met, otherwise throws with the best estimate.
  T require(const char* what = "adaptive quadrature") const {
    if (!converged) {
      if constexpr (std::is_same_v<T, double>) {
        throw NumericalError(std::string(what) + ": tolerance not met", value, error);
      } else {
        throw NumericalError(std::string(what) + ": tolerance not met", std::abs(value), error);
      }
    }
    return value;
  }
};

/// Adaptive Gauss-Kronrod (21-point) integration of f over [a, b]. Works for
/// real- and complex-valued integrands.
template <class F>
auto adaptive_quad(F&& f, double a, double b, const QuadratureSpec& spec = {})
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> out;
  if (!(a < b)) {
    if (a == b) return out;
    throw DomainError("adaptive_quad requires a < b");
  }
  double err = 0.0;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
      f, a, b, static_cast<unsigned>(spec.max_subdivisions), spec.rel_tol, &err, &l1);
  out.error = err;
  const double scale = std::abs(out.value);
  out.converged = std::isfinite(scale) && err <= std::max(spec.abs_tol, spec.rel_tol * std::max(scale, l1 * 1e-3));
  return out;
}

/// Adaptive integration over consecutive segments split at `breaks`, which
/// must be increasing; breaks outside (a, b) are ignored.
template <class F>
auto adaptive_quad_split(F&& f, double a, double b, std::span<const double> breaks,
                         const QuadratureSpec& spec = {})
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> total;
  double lo = a;
  auto add = [&](double hi) {
    if (hi <= lo) return;
    auto part = adaptive_quad(f, lo, hi, spec);
    total.value += part.value;
    total.error += part.error;
    total.converged = total.converged && part.converged;
    lo = hi;
  };
  for (double x : breaks) {
    if (x > a && x < b) add(x);
  }
  add(b);
  return total;
}

/// Fixed composite Gauss-Legendre rule on `panels` equal panels of [a, b].
/// Nodes and weights are precomputed so repeated complex kernels are cheap.
class GaussLegendreRule {
 public:
  GaussLegendreRule(double a, double b, int panels, int points_per_panel);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  template <class F>
  auto integrate(F&& f) const -> std::decay_t<decltype(f(0.0))> {
    std::decay_t<decltype(f(0.0))> acc{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(nodes_[i]);
    return acc;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Antiderivative G(x) = int_a^x f of a smooth function, tabulated on
/// Gauss-Legendre panels split at the given break points. Inside a panel,
/// f is replaced by its degree-(n-1) interpolant through the panel nodes,
/// which keeps queries at arbitrary x spectrally accurate.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> breaks, int panels_per_segment = 8);

  double lower() const { return edges_.empty() ? 0.0 : edges_.front(); }
  double upper() const { return edges_.empty() ? 0.0 : edges_.back(); }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  /// int_a^x f, with x clamped to [a, b].
  double operator()(double x) const;
  /// int_lo^hi f over [lo, hi] ∩ [a, b]; zero when empty.
  double between(double lo, double hi) const;

 private:
  std::vector<double> edges_;       // panel boundaries
  std::vector<double> cumulative_;  // G at each boundary
  std::vector<double> values_;      // f at the panel nodes, panel-major
};

// ---------------------------------------------------------------------------
// Fourier inversion of the max-SINR coverage kernel

/// Asymptotic piece of a joint transform: as omega -> infinity the product
/// Theta*Upsilon behaves like weight * exp(-j*omega*shift). Such atoms (for
/// example the "only one visible satellite" configuration) do not decay in
/// omega; they are integrated in closed form and subtracted before
/// truncation.
struct TransformAtom {
  double weight = 0.0;
  double shift = 0.0;
};

struct InversionResult {
  double value = 0.0;         ///< clamped to [0, 1]
  double raw = 0.0;           ///< before clamping
  double omega_max = 0.0;
  double y_max = 0.0;
  double error = 0.0;
  bool converged = true;
  double tail_envelope = 0.0; ///< |integrand| at omega_max relative to its peak
};

/// Joint-transform description consumed by fourier_inversion_cp. `theta` and
/// `upsilon` are evaluated at omega >= 0 only; Hermitian symmetry supplies
/// the negative half. `atoms(y)` lists the non-decaying pieces (may be empty).
struct JointTransform {
  std::function<cplx(double omega, double y)> theta;
  std::function<cplx(double omega, double y)> upsilon;
  std::function<std::vector<TransformAtom>(double y)> atoms;
  /// Optional combined evaluation, used in place of theta*upsilon if set.
  std::function<cplx(double omega, double y)> product;
  /// Characteristic scale of y, used for the outer variable map and scans.
  double y_scale = 1.0;
};

/// Computes int_0^inf int_R (e^{j w y} - e^{j w y / delta_max}) / (2 pi j w)
///   * Theta(w, y) Upsilon(w, y) dw dy.
/// The omega integral is folded onto [0, omega_max] using Hermitian
/// symmetry; w = 0 uses the analytic limit of the kernel. The outer y
/// integral runs through y = s t / (1 - t). Outer panels are evaluated in
/// parallel when `parallel` is set; results do not depend on thread count.
InversionResult fourier_inversion_cp(const JointTransform& transform, double delta_max,
                                     const QuadratureSpec& spec, bool parallel = true);

/// The inversion kernel (e^{j w y} - e^{j w y/delta}) / (2 pi j w) with its
/// w -> 0 limit y (1 - 1/delta) / (2 pi).
cplx inversion_kernel(double omega, double y, double delta);

}  // namespace hetsat
