// Acceptance run: evaluates every criterion and prints one PASS/FAIL line each.
// Exit status is 0 once all criteria were evaluated; --strict also fails on
// any FAIL line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hetsat/analytics_maxsinr.hpp"
#include "hetsat/analytics_nearest.hpp"
#include "hetsat/cli.hpp"
#include "hetsat/metrics.hpp"
#include "hetsat/montecarlo.hpp"
#include "hetsat/numerics.hpp"
#include "hetsat/scenario.hpp"

using namespace hetsat;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] ";
    }
    detail << what << "; ";
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const std::vector<double> kThresholds = {-10.0, -5.0, 0.0, 5.0};

McConfig mc(long trials, std::uint64_t seed = 1) {
  McConfig c;
  c.trials = trials;
  c.seed = seed;
  return c;
}

std::vector<MetricReport> threshold_grid(const Scenario& sc, long trials) {
  McGrid g;
  g.gamma_th_db = kThresholds;
  g.t_th = {0.0};
  return estimate_grid(mc(trials), sc, g);
}

void nearest_cp(Outcome& o) {
  const auto reports = threshold_grid(table2_scenario(3), 100000);
  for (std::size_t k = 0; k < kThresholds.size(); ++k) {
    const double an = coverage_prob_nearest(table2_scenario(3, kThresholds[k])).total;
    const double gap = std::abs(an - reports[k].nearest.cp.mean);
    o.require(gap <= 0.03, fmt("%g dB: ", kThresholds[k]) + fmt("analytic %.4f ", an) +
                               fmt("mc %.4f ", reports[k].nearest.cp.mean) + fmt("gap %.4f <= 0.03", gap));
  }
}

void maxsinr_cp(Outcome& o) {
  const auto reports = threshold_grid(table2_scenario(3), 100000);
  for (std::size_t k = 0; k < kThresholds.size(); ++k) {
    const MaxSinrCoverage an = coverage_prob_maxsinr(table2_scenario(3, kThresholds[k]));
    const double gap = std::abs(an.total - reports[k].max_sinr.cp.mean);
    o.require(gap <= 0.04, fmt("%g dB: ", kThresholds[k]) + fmt("analytic %.4f ", an.total) +
                               fmt("mc %.4f ", reports[k].max_sinr.cp.mean) + fmt("gap %.4f <= 0.04", gap));
  }
}

void coverage_anchors(Outcome& o) {
  const MetricReport one = estimate(mc(100000), table2_scenario(1, -5.0));
  const MetricReport three = estimate(mc(100000), table2_scenario(3, -5.0));
  const double near1 = one.nearest.cp.mean;
  const double max3 = three.max_sinr.cp.mean;
  o.require(std::abs(near1 - 0.48) <= 0.03, fmt("1-tier nearest CP %.4f vs 0.48 +- 0.03", near1));
  o.require(std::abs(max3 - 0.91) <= 0.04, fmt("3-tier max-SINR CP %.4f vs 0.91 +- 0.04", max3));
}

void density_peak(Outcome& o) {
  TierParams first = table2_tier(0, -5.0);
  first.count = 0.0;
  first.density = 1.64e-13;
  TierParams second = table2_tier(1, -5.0);
  second.count = 0.0;
  second.power = 30.0;
  double best = -1.0, best_density = 0.0;
  std::ostringstream curve;
  for (int k = 0; k < 25; ++k) {
    second.density = 1e-14 * std::pow(100.0, k / 24.0);
    Scenario sc = table2_scenario(2, -5.0);
    sc.tiers = {TierConfig::make(first), TierConfig::make(second)};
    const double cp = estimate(mc(20000, 40 + k), sc).max_sinr.cp.mean;
    curve << fmt("%.3f ", cp);
    if (cp > best) {
      best = cp;
      best_density = second.density;
    }
  }
  o.detail << "curve " << curve.str() << "; ";
  o.require(std::abs(best - 0.76) <= 0.04, fmt("peak CP %.4f vs 0.76 +- 0.04", best));
  o.require(best_density >= 1.1e-13 && best_density <= 2.3e-13,
            fmt("at density %.3e in [1.1e-13, 2.3e-13]", best_density));
}

void density_count(Outcome& o) {
  TierParams p = table2_tier(0);
  const TierConfig t = TierConfig::make(p);
  const double expected = 100.0 / (4.0 * kPi * 6971000.0 * 6971000.0);
  o.require(t.density == expected, fmt("density %.6e equals N / (4 pi R_S^2)", t.density));
  const double rounded = std::round(t.density * 1e15) / 1e15;
  o.require(std::abs(rounded - 1.64e-13) < 1e-20, fmt("rounds to %.2e", rounded));
}

void association(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> tiers(1, 3);
  std::uniform_real_distribution<double> altitude(400.0, 2000.0), count(20.0, 400.0), power(5.0, 35.0),
      main_gain(30.0, 50.0), side_gain(5.0, 25.0), beam(0.002, 0.05);
  double worst_total = 0.0, worst_tier = 0.0;
  for (int n = 0; n < 50; ++n) {
    Scenario sc = table2_scenario(1);
    sc.tiers.clear();
    const int k = tiers(rng);
    for (int i = 0; i < k; ++i) {
      TierParams p;
      p.altitude = altitude(rng) * 1e3;
      p.count = count(rng);
      p.power = db_to_linear(power(rng));
      p.gain_main = db_to_linear(main_gain(rng));
      p.gain_side = db_to_linear(side_gain(rng));
      p.beam_angle = beam(rng);
      sc.tiers.push_back(TierConfig::make(p));
    }
    const MetricReport r = estimate(mc(20000, 100 + n), sc);
    const auto near = assoc_probs_nearest(sc);
    const auto strong = assoc_probs_maxsinr(sc);
    double an_near = 0.0, an_strong = 0.0, mc_near = 0.0, mc_strong = 0.0;
    for (int i = 0; i < k; ++i) {
      an_near += near[i];
      an_strong += strong[i];
      mc_near += r.nearest.assoc[i].mean;
      mc_strong += r.max_sinr.assoc[i].mean;
      worst_tier = std::max({worst_tier, std::abs(near[i] - r.nearest.assoc[i].mean),
                             std::abs(strong[i] - r.max_sinr.assoc[i].mean)});
    }
    worst_total = std::max({worst_total, std::abs(an_near - mc_near), std::abs(an_strong - mc_strong)});
  }
  o.require(worst_total <= 0.015, fmt("worst total gap %.4f <= 0.015", worst_total));
  o.require(worst_tier <= 0.02, fmt("worst per-tier gap %.4f <= 0.02", worst_tier));
}

double half_decay_time(const NearestNhp& nhp, const std::vector<double>& assoc) {
  auto total = [&](double t) {
    double s = 0.0;
    for (int i = 0; i < static_cast<int>(assoc.size()); ++i) s += nhp.bracket(i, t).total() * assoc[i];
    return s;
  };
  const double half = 0.5 * total(0.0);
  double lo = 0.0, hi = 1.0;
  while (total(hi) > half) hi *= 2.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > half ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void handover(Outcome& o) {
  const Scenario sc = table2_scenario(3, -10.0);
  std::vector<double> times;
  for (int k = 0; k <= 60; ++k) times.push_back(5.0 * k);

  bool monotone = true;
  double prev_near = 2.0, prev_max = 2.0;
  for (double t : times) {
    const Scenario at = sc.with_handover_time(t);
    const double n = nhp_nearest(at).total;
    const double m = nhp_maxsinr(at).total;
    monotone = monotone && n <= prev_near + 1e-12 && m <= prev_max + 1e-12;
    prev_near = n;
    prev_max = m;
  }
  o.require(monotone, "analytic NHP nonincreasing over 0..300 s for both policies");

  const double cp = coverage_prob_nearest(sc).total;
  const double nhp0 = nhp_nearest(sc.with_handover_time(0.0)).total;
  o.require(std::abs(nhp0 - cp) <= 1e-6, fmt("analytic nearest |NHP(0) - CP| = %.2e <= 1e-6", std::abs(nhp0 - cp)));

  // The max-SINR NHP shares the nearest brackets, so its value at 0 is not
  // the max-SINR coverage; reported only.
  o.detail << fmt("max-SINR analytic NHP(0) %.4f", nhp_maxsinr(sc.with_handover_time(0.0)).total)
           << fmt(" vs CP %.4f (reported); ", coverage_prob_maxsinr(sc).total);

  McGrid g;
  g.gamma_th_db = {-10.0};
  g.t_th = {0.0, 30.0, 60.0, 120.0};
  const auto r = estimate_grid(mc(100000), sc, g);
  for (const auto* p : {&r[0].nearest, &r[0].max_sinr}) {
    const double gap = std::abs(p->nhp.mean - p->cp.mean);
    o.require(gap <= 2.0 * p->cp.std_error, fmt("mc |NHP(0) - CP| = %.2e within 2 stderr", gap));
  }
  bool mc_monotone = true;
  for (std::size_t k = 1; k < r.size(); ++k) {
    mc_monotone = mc_monotone && r[k].nearest.nhp.mean <= r[k - 1].nearest.nhp.mean &&
                  r[k].max_sinr.nhp.mean <= r[k - 1].max_sinr.nhp.mean;
  }
  o.require(mc_monotone, "mc NHP nonincreasing");

  double bracket_gap = 0.0;
  for (double t : {0.0, 20.0, 60.0}) {
    const Scenario at = sc.with_handover_time(t);
    const auto near = nhp_nearest(at);
    const auto strong = nhp_maxsinr(at);
    const auto an = assoc_probs_nearest(at);
    const auto am = assoc_probs_maxsinr(at);
    for (int i = 0; i < 3; ++i) {
      bracket_gap = std::max(bracket_gap, std::abs(near.per_tier[i] / an[i] - strong.per_tier[i] / am[i]));
    }
  }
  o.require(bracket_gap <= 1e-9, fmt("per-tier brackets equal across policies (%.1e)", bracket_gap));

  const NearestNhp narrow(sc);
  const NearestNhp wide(sc.with_dome_angle(0.2));
  const double t1 = half_decay_time(narrow, narrow.assoc());
  const double t2 = half_decay_time(wide, wide.assoc());
  o.require(t2 > t1, fmt("half-decay %.1f s at 0.1 rad", t1) + fmt(" < %.1f s at 0.2 rad", t2));
}

void delay_outage(Outcome& o) {
  Scenario low = table2_scenario(3);
  for (int i = 0; i < 3; ++i) {
    TierParams p = table2_tier(i);
    p.delay_th = 1.5e-3;
    low.tiers[i] = TierConfig::make(p);
  }
  const MetricReport rl = estimate(mc(20000), low);
  o.require(dop_nearest(low).total == 0.0 && dop_maxsinr(low).total == 0.0 && rl.nearest.dop.mean == 0.0 &&
                rl.max_sinr.dop.mean == 0.0,
            "c T_D below every altitude gives DOP 0");

  const Scenario one = table2_scenario(1);
  o.require(dop_nearest(one).total == dop_maxsinr(one).total,
            fmt("single tier DOP %.6f identical for both policies", dop_nearest(one).total));

  const Scenario sc = table2_scenario(3);
  const MetricReport r = estimate(mc(100000), sc);
  const double gn = std::abs(dop_nearest(sc).total - r.nearest.dop.mean);
  const double gm = std::abs(dop_maxsinr(sc).total - r.max_sinr.dop.mean);
  o.require(gn <= 0.01, fmt("nearest DOP gap %.4f <= 0.01", gn));
  o.require(gm <= 0.01, fmt("max-SINR DOP gap %.4f <= 0.01", gm));
}

void weight_dominance(Outcome& o) {
  const Scenario sc = table2_scenario(3, 0.0);
  const auto cells = weight_grid_scan(sc, 0.05);
  const auto wins = std::count_if(cells.begin(), cells.end(),
                                  [](const WeightCell& c) { return c.wm_max_sinr >= c.wm_nearest; });
  const double share = static_cast<double>(wins) / static_cast<double>(cells.size());
  o.require(share >= 0.9, fmt("max-SINR WM >= nearest on %.1f%% ", 100.0 * share) +
                              std::to_string(cells.size()) + " cells (>= 90%)");
}

void numerics(Outcome& o) {
  double worst = 0.0;
  for (double a : {0.5, 18.0 / 17.0, 3.0}) {
    for (cplx z : {cplx(0.3, 0.1), cplx(4.0, -9.0), cplx(20.0, 35.0), cplx(-1.5, 2.0)}) {
      const cplx lhs = lower_incomplete_gamma(a + 1.0, z);
      const cplx rhs = a * lower_incomplete_gamma(a, z) - std::pow(z, a) * std::exp(-z);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  o.require(worst <= 1e-9, fmt("incomplete gamma recurrence %.1e <= 1e-9", worst));

  JointTransform pair;
  pair.theta = [](double w, double) { return 1.0 / cplx(1.0, w); };
  pair.upsilon = [](double, double y) { return cplx(std::exp(-y), 0.0); };
  const double toy = fourier_inversion_cp(pair, 2.0, QuadratureSpec{}).value;
  o.require(std::abs(toy - 1.0 / 6.0) <= 1e-3, fmt("two-exponential inversion %.5f vs 1/6", toy));

  Scenario sc = table2_scenario(3, -5.0);
  const MaxSinrCoverage base = coverage_prob_maxsinr(sc);
  QuadratureSpec& q = sc.numerics;
  q.omega_truncation = 2.0 * std::max(base.main.omega_max, base.side.omega_max);
  q.omega_ceiling = std::max(q.omega_ceiling, q.omega_truncation);
  q.y_truncation = 2.0 * std::max(base.main.y_max, base.side.y_max);
  q.tail_rel *= 0.1;
  const double doubled = coverage_prob_maxsinr(sc).total;
  o.require(std::abs(doubled - base.total) <= 0.005,
            fmt("max-SINR CP %.5f ", base.total) + fmt("vs %.5f with doubled truncation", doubled));
}

void determinism(Outcome& o) {
  const cli::ScenarioFile file = cli::load_scenario(HETSAT_SCENARIO);
  cli::ScenarioFile swept = file;
  cli::SweepSpec sw;
  sw.variable = cli::SweepVariable::gamma_th_db;
  sw.from = -10.0;
  sw.to = 5.0;
  sw.steps = 4;
  swept.sweep = sw;
  auto csv = [&](int threads) {
    cli::RunOptions opt;
    opt.mode = cli::Mode::mc;
    opt.command = cli::Command::sweep;
    opt.threads = threads;
    std::ostringstream os;
    cli::run(swept, opt).write_csv(os);
    return os.str();
  };
  const std::string first = csv(1);
  o.require(first == csv(1), "repeat run byte-identical");
  o.require(first == csv(4), "4 workers byte-identical to 1");

  const Scenario sc = table2_scenario(3, 0.0);
  const MaxSinrKernels k(sc, ServingRegion::side);
  const double serial = fourier_inversion_cp(k.transform(), sc.max_delta_th(), sc.numerics, false).raw;
  const double parallel = fourier_inversion_cp(k.transform(), sc.max_delta_th(), sc.numerics, true).raw;
  o.require(serial == parallel, "inversion identical serial and parallel");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hetsat acceptance criteria"};
  std::vector<int> only;
  bool strict = false;
  app.add_option("--criterion", only, "criteria to run (default all)");
  app.add_flag("--strict", strict, "exit non-zero when a criterion fails");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "nearest CP vs simulation", nearest_cp},
      {2, "max-SINR CP vs simulation", maxsinr_cp},
      {3, "coverage anchors", coverage_anchors},
      {4, "second-tier density optimum", density_peak},
      {5, "density from count", density_count},
      {6, "association partition", association},
      {7, "handover properties", handover},
      {8, "delay outage identities", delay_outage},
      {9, "weight-scan dominance", weight_dominance},
      {10, "numerics", numerics},
      {11, "determinism", determinism},
  };

  int failed = 0, errored = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      ++errored;
      o.pass = false;
      o.detail << "error: " << e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d failed\n", failed);
  if (errored > 0) return 2;
  return strict && failed > 0 ? 1 : 0;
}
