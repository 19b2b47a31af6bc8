#include "hetsat/channel.hpp"

#include <cmath>

#include "hetsat/errors.hpp"
#include "hetsat/numerics.hpp"

namespace hetsat {

GammaParams derive_gamma_params(double m, double b0, double omega) {
  if (!(m > 0.0) || !(b0 > 0.0) || !(omega >= 0.0)) {
    throw DomainError("fading parameters need m > 0, b0 > 0, Omega >= 0");
  }
  const double mean = 2.0 * b0 + omega;
  GammaParams g;
  g.chi = m * mean * mean / (4.0 * m * b0 * b0 + 4.0 * m * b0 * omega + omega * omega);
  g.beta = mean / g.chi;
  return g;
}

ChannelParams::ChannelParams(double m, double b0, double los_power, double alpha, double noise)
    : m_(m), b0_(b0), los_power_(los_power), alpha_(alpha), noise_(noise),
      gamma_(derive_gamma_params(m, b0, los_power)) {
  if (!(alpha >= 2.0)) throw DomainError("path-loss exponent must be >= 2");
  if (!(noise > 0.0)) throw DomainError("noise power must be positive");
}

double sample_gain(std::mt19937_64& rng, double chi, double beta) {
  std::gamma_distribution<double> dist(chi, beta);
  return dist(rng);
}

double gain_pdf(double h, double chi, double beta) {
  if (!(h >= 0.0)) throw DomainError("gain must be non-negative");
  if (h == 0.0) {
    if (chi < 1.0) return INFINITY;
    return chi == 1.0 ? 1.0 / beta : 0.0;
  }
  return std::exp((chi - 1.0) * std::log(h) - h / beta - chi * std::log(beta) - std::lgamma(chi));
}

double gain_cdf(double h, double chi, double beta) {
  if (!(h >= 0.0)) throw DomainError("gain must be non-negative");
  return regularized_lower_gamma(chi, h / beta);
}

}  // namespace hetsat
