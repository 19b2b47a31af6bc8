#include <cmath>
#include <random>

#include <doctest.h>

#include "hetsat/channel.hpp"
#include "hetsat/errors.hpp"
#include "hetsat/numerics.hpp"

using namespace hetsat;

TEST_CASE("gamma approximation of the shadowed-Rician gain") {
  const GammaParams g = derive_gamma_params(2.0, 1.0, 1.0);
  CHECK(g.chi == doctest::Approx(18.0 / 17.0).epsilon(1e-14));
  CHECK(g.beta == doctest::Approx(17.0 / 6.0).epsilon(1e-14));

  const GammaParams nlos = derive_gamma_params(3.0, 0.7, 0.0);
  CHECK(nlos.chi == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nlos.beta == doctest::Approx(1.4).epsilon(1e-14));

  const GammaParams big = derive_gamma_params(1e6, 1.0, 1.0);
  CHECK(big.chi == doctest::Approx(9.0 / 8.0).epsilon(1e-5));

  CHECK_THROWS_AS(derive_gamma_params(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(derive_gamma_params(2.0, -1.0, 1.0), DomainError);
}

TEST_CASE("channel parameter validation") {
  const ChannelParams ch;
  CHECK(ch.mean_gain() == doctest::Approx(3.0));
  CHECK_THROWS_AS(ChannelParams(2.0, 1.0, 1.0, 2.0, -1.0), DomainError);
  CHECK_THROWS_AS(ChannelParams(2.0, 1.0, 1.0, 0.0, 1e-12), DomainError);
}

TEST_CASE("gain sampling") {
  SUBCASE("exponential special case") {
    std::mt19937_64 rng(11);
    int below = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) below += sample_gain(rng, 1.0, 1.0) <= 1.0;
    CHECK(below / double(n) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.002 / 0.632));
  }
  SUBCASE("mean equals 2 b0 + omega") {
    const ChannelParams ch;
    std::mt19937_64 rng(12);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += sample_gain(rng, ch.chi(), ch.beta());
    CHECK(sum / n == doctest::Approx(3.0).epsilon(0.01));
  }
  SUBCASE("fixed seed repeats") {
    std::mt19937_64 a(5), b(5);
    for (int i = 0; i < 100; ++i) CHECK(sample_gain(a, 1.3, 2.0) == sample_gain(b, 1.3, 2.0));
  }
}

TEST_CASE("gain density") {
  const ChannelParams ch;
  // u = h^chi removes the h^(chi - 1) cusp at the origin.
  const double chi = ch.chi();
  const auto total = adaptive_quad(
      [&](double u) {
        const double h = std::pow(u, 1.0 / chi);
        return gain_pdf(h, chi, ch.beta()) * h / (chi * u);
      },
      1e-300, std::pow(200.0, chi));
  CHECK(std::abs(total.value - 1.0) < 1e-8);
  CHECK(gain_pdf(0.0, 1.0, 1.0) == 1.0);
  CHECK(gain_cdf(1.0, 1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));

  // Histogram bin around h = 1.
  std::mt19937_64 rng(13);
  const int n = 1000000;
  int in_bin = 0;
  for (int i = 0; i < n; ++i) {
    const double h = sample_gain(rng, ch.chi(), ch.beta());
    in_bin += h > 0.95 && h <= 1.05;
  }
  const double expected = gain_cdf(1.05, ch.chi(), ch.beta()) - gain_cdf(0.95, ch.chi(), ch.beta());
  CHECK(in_bin / double(n) == doctest::Approx(expected).epsilon(0.03));
  CHECK(expected / 0.1 == doctest::Approx(gain_pdf(1.0, ch.chi(), ch.beta())).epsilon(1e-3));
}
