#include <cmath>

#include <doctest.h>

#include "hetsat/errors.hpp"
#include "hetsat/montecarlo.hpp"
#include "hetsat/scenario.hpp"

using namespace hetsat;

namespace {

Satellite place(const Scenario& sc, int tier, double r, double fading = 1.0) {
  const TierGeometry& g = sc.tiers[tier].geo;
  return {tier, r, g.earth_angle(r), classify(g, r), fading};
}

void same(const McEstimate& a, const McEstimate& b) {
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}

void same(const PolicyEstimate& a, const PolicyEstimate& b) {
  same(a.cp, b.cp);
  same(a.nhp, b.nhp);
  same(a.dop, b.dop);
  same(a.dop_serving, b.dop_serving);
  REQUIRE(a.assoc.size() == b.assoc.size());
  for (std::size_t i = 0; i < a.assoc.size(); ++i) same(a.assoc[i], b.assoc[i]);
}

McConfig small(long trials = 4000) {
  McConfig cfg;
  cfg.trials = trials;
  cfg.seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("interference-free overhead link") {
  Scenario sc = table2_scenario(1);
  sc.channel = ChannelParams(2.0, 1.0, 1.0, 2.0, 1e-30);
  SatelliteRealization real;
  real.satellites.push_back(place(sc, 0, sc.tiers[0].geo.altitude));
  real.visible_count = {1};
  const TrialOutcome o = score_realization(sc, real);
  CHECK(o.nearest.tier == 0);
  CHECK(o.nearest.sinr > db_to_linear(60.0));
  CHECK(o.max_sinr.index == o.nearest.index);
}

TEST_CASE("policies disagree when the near satellite is weak") {
  Scenario sc = table2_scenario(1);
  sc.tiers.push_back(TierConfig::make(table2_tier(2)));
  SatelliteRealization real;
  real.satellites.push_back(place(sc, 0, km(700)));
  real.satellites.push_back(place(sc, 1, km(1300)));
  real.visible_count = {1, 1};
  const TrialOutcome o = score_realization(sc, real);
  CHECK(o.nearest.tier == 0);
  CHECK(o.max_sinr.tier == 1);
  CHECK(o.max_sinr_assoc.tier == 1);
  CHECK(o.max_sinr.sinr > o.nearest.sinr);
  const double weak = sc.tiers[0].side_power() / (km(700) * km(700));
  const double strong = sc.tiers[1].side_power() / (km(1300) * km(1300));
  CHECK(o.nearest.sinr == doctest::Approx(weak / (strong + 1e-12)).epsilon(1e-12));
  CHECK(o.max_sinr.sinr == doctest::Approx(strong / (weak + 1e-12)).epsilon(1e-12));

  SatelliteRealization nothing;
  nothing.visible_count = {0, 0};
  const TrialOutcome none = score_realization(sc, nothing);
  CHECK(none.nearest.tier == -1);
  CHECK(none.max_sinr.tier == -1);
}

TEST_CASE("a single trial reports its own indicator") {
  const Scenario sc = table2_scenario(3, -10.0);
  McConfig cfg = small(1);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
    cfg.seed = seed;
    auto rng = trial_rng(seed, 0);
    const TrialOutcome o = run_trial(rng, sc, cfg);
    const bool covered = o.nearest.tier >= 0 && o.nearest.sinr > sc.tiers[o.nearest.tier].gamma_th;
    CHECK(estimate(cfg, sc).nearest.cp.mean == (covered ? 1.0 : 0.0));
  }
}

TEST_CASE("seeding") {
  CHECK(splitmix64(1) != splitmix64(2));
  auto a = trial_rng(7, 3), b = trial_rng(7, 3), c = trial_rng(7, 4);
  CHECK(a() == b());
  CHECK(a() != c());

  const Scenario sc = table2_scenario(3);
  const MetricReport first = estimate(small(), sc);
  const MetricReport again = estimate(small(), sc);
  same(first.nearest, again.nearest);
  same(first.max_sinr, again.max_sinr);
  McConfig other = small();
  other.seed = 100;
  CHECK(estimate(other, sc).max_sinr.cp.mean != first.max_sinr.cp.mean);
}

TEST_CASE("results do not depend on the worker count") {
  const Scenario sc = table2_scenario(3, -5.0, 4.0);
  McConfig one = small(), many = small();
  one.threads = 1;
  many.threads = 5;
  const MetricReport a = estimate(one, sc), b = estimate(many, sc);
  same(a.nearest, b.nearest);
  same(a.max_sinr, b.max_sinr);
}

TEST_CASE("common random numbers across thresholds") {
  const Scenario sc = table2_scenario(3);
  McGrid grid;
  grid.gamma_th_db = {-10.0, -5.0, 0.0, 5.0};
  grid.t_th = {0.0, 5.0, 20.0};
  const auto reports = estimate_grid(small(20000), sc, grid);
  REQUIRE(reports.size() == 12);
  for (std::size_t g = 0; g < 4; ++g) {
    for (std::size_t p = 0; p < 3; ++p) {
      const MetricReport& r = reports[g * 3 + p];
      CHECK(r.gamma_th_db == grid.gamma_th_db[g]);
      CHECK(r.t_th == grid.t_th[p]);
      if (g > 0) CHECK(r.max_sinr.cp.mean <= reports[(g - 1) * 3 + p].max_sinr.cp.mean);
      if (p > 0) CHECK(r.nearest.nhp.mean <= reports[g * 3 + p - 1].nearest.nhp.mean);
    }
    // No handover constraint: every covered trial keeps its satellite.
    CHECK(reports[g * 3].nearest.nhp.mean == reports[g * 3].nearest.cp.mean);
    CHECK(reports[g * 3].max_sinr.nhp.mean == reports[g * 3].max_sinr.cp.mean);
  }
  // The grid and a direct run agree point by point.
  const MetricReport direct = estimate(small(20000), sc.with_threshold_db(0.0).with_handover_time(5.0));
  same(direct.nearest, reports[2 * 3 + 1].nearest);
}

TEST_CASE("per-tier handover times") {
  Scenario sc = table2_scenario(3, -10.0);
  sc.tiers[2].t_th = 1e6;
  const MetricReport r = estimate(small(), sc);
  CHECK(r.nearest.nhp_tier[2].mean == 0.0);
  CHECK(r.nearest.nhp_tier[0].mean == r.nearest.cp_tier[0].mean);
}

TEST_CASE("tallies are consistent") {
  const MetricReport r = estimate(small(), table2_scenario(3));
  for (const PolicyEstimate* p : {&r.nearest, &r.max_sinr}) {
    double assoc = 0.0, cp = 0.0;
    for (std::size_t i = 0; i < p->assoc.size(); ++i) {
      assoc += p->assoc[i].mean;
      cp += p->cp_tier[i].mean;
    }
    CHECK(assoc == doctest::Approx(p->associated.mean));
    CHECK(cp == doctest::Approx(p->cp.mean));
    CHECK(p->cp.mean <= p->associated.mean);
  }
  same(r.nearest.dop, r.nearest.dop_serving);
}

TEST_CASE("Walker snapshots replace the Poisson process") {
  const Scenario sc = table2_scenario(3);
  McConfig cfg = small(2000);
  cfg.walker = std::vector<WalkerTier>{WalkerTier::for_count(100), WalkerTier::for_count(100),
                                       WalkerTier::for_count(100)};
  const MetricReport a = estimate(cfg, sc);
  const MetricReport b = estimate(cfg, sc);
  same(a.max_sinr, b.max_sinr);
  CHECK(a.max_sinr.cp.mean > 0.0);
  CHECK(a.max_sinr.cp.mean < 1.0);
  CHECK(WalkerTier::for_count(100).planes * WalkerTier::for_count(100).sats_per_plane == 100);
}

TEST_CASE("configuration checks") {
  const Scenario sc = table2_scenario(2);
  McConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS_AS(estimate(cfg, sc), DomainError);
  cfg = {};
  cfg.theta_samples = 0;
  CHECK_THROWS_AS(estimate(cfg, sc), DomainError);
  cfg = {};
  cfg.walker = std::vector<WalkerTier>{WalkerTier{}};
  CHECK_THROWS_AS(estimate(cfg, sc), DomainError);
  McGrid grid;
  grid.t_th = {-1.0};
  CHECK_THROWS_AS(estimate_grid(small(10), sc, grid), DomainError);
}
