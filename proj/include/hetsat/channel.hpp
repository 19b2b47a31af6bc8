#pragma once

#include <random>

namespace hetsat {

/// Shape and scale of the gamma law that approximates shadowed-Rician power.
struct GammaParams {
  double chi = 1.0;
  double beta = 1.0;
};

/// Moment-matched gamma approximation of shadowed-Rician fading with
/// Nakagami parameter m, scattered power b0 and line-of-sight power omega.
GammaParams derive_gamma_params(double m, double b0, double omega);

/// Fading and link-budget constants shared by every tier. chi and beta are
/// derived on construction and cannot drift from (m, b0, Omega).
class ChannelParams {
 public:
  ChannelParams() : ChannelParams(2.0, 1.0, 1.0, 2.0, 1e-12) {}
  ChannelParams(double m, double b0, double los_power, double alpha, double noise);

  double m() const { return m_; }
  double b0() const { return b0_; }
  double los_power() const { return los_power_; }
  double alpha() const { return alpha_; }
  double noise() const { return noise_; }
  double chi() const { return gamma_.chi; }
  double beta() const { return gamma_.beta; }
  GammaParams gamma() const { return gamma_; }
  double mean_gain() const { return gamma_.chi * gamma_.beta; }

 private:
  double m_;
  double b0_;
  double los_power_;
  double alpha_;
  double noise_;
  GammaParams gamma_;
};

/// One power-gain draw H ~ Gamma(chi, beta).
double sample_gain(std::mt19937_64& rng, double chi, double beta);

double gain_pdf(double h, double chi, double beta);
double gain_cdf(double h, double chi, double beta);

}  // namespace hetsat
