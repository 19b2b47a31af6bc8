#include "hetsat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "hetsat/errors.hpp"

namespace hetsat {

WalkerTier WalkerTier::for_count(double count) {
  WalkerTier w;
  const int total = std::max(1, static_cast<int>(std::lround(count)));
  w.planes = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(total)))));
  w.sats_per_plane = (total + w.planes - 1) / w.planes;
  return w;
}

void McConfig::validate(int num_tiers) const {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (theta_samples < 1) throw DomainError("theta_samples must be >= 1");
  if (threads < 0) throw DomainError("threads must be >= 0");
  if (walker && static_cast<int>(walker->size()) != num_tiers) {
    throw DomainError("one Walker pattern per tier is required");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_rng(std::uint64_t seed, long trial) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial))));
}

TrialOutcome score_realization(const Scenario& sc, const SatelliteRealization& real,
                               const std::vector<double>& theta) {
  TrialOutcome out;
  out.theta = theta;
  const double alpha = sc.channel.alpha();
  const auto& sats = real.satellites;
  std::vector<double> power(sats.size(), 0.0);
  double total = 0.0;
  double best_near = std::numeric_limits<double>::infinity();
  double best_power = -1.0;
  double best_mean = -1.0;
  for (std::size_t n = 0; n < sats.size(); ++n) {
    const Satellite& s = sats[n];
    if (s.lobe == Lobe::invisible) continue;
    const TierConfig& t = sc.tiers[s.tier];
    const double mean = (s.lobe == Lobe::main ? t.main_power() : t.side_power()) * std::pow(s.distance, -alpha);
    power[n] = mean * s.fading;
    total += power[n];
    const int idx = static_cast<int>(n);
    if (s.distance < best_near) {
      best_near = s.distance;
      out.nearest.index = idx;
    }
    if (power[n] > best_power) {
      best_power = power[n];
      out.max_sinr.index = idx;
    }
    // Association ranks tiers on main-lobe power, as the analytic model does.
    const double ranked = t.main_power() * std::pow(s.distance, -alpha);
    if (ranked > best_mean) {
      best_mean = ranked;
      out.max_sinr_assoc.index = idx;
    }
  }
  auto fill = [&](ServingLink& link) {
    if (link.index < 0) return;
    const Satellite& s = sats[link.index];
    const double signal = power[link.index];
    link.tier = s.tier;
    link.distance = s.distance;
    link.earth_angle = s.earth_angle;
    // Subtracting from the total can leave round-off below zero.
    const double interference = std::max(total - signal, 0.0);
    link.sinr = signal / (interference + sc.channel.noise());
  };
  fill(out.nearest);
  fill(out.max_sinr);
  fill(out.max_sinr_assoc);
  return out;
}

namespace {

// Rotating the constellation uniformly is the same as placing the user at a
// uniform direction; distances and polar angles are taken from there.
void sample_walker(std::mt19937_64& rng, const Scenario& sc,
                   const std::vector<std::vector<Vec3>>& patterns, SatelliteRealization& out) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double z = unit(rng);
  const double az = kPi * unit(rng);
  const double rho = std::sqrt(std::max(1.0 - z * z, 0.0));
  const Vec3 u{rho * std::cos(az), rho * std::sin(az), z};
  out.visible_count.assign(sc.tiers.size(), 0);
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const TierConfig& t = sc.tiers[k];
    const double rs = t.geo.orbit_radius;
    const double re = t.geo.earth_radius;
    for (const Vec3& p : patterns[k]) {
      const double c = std::clamp((p[0] * u[0] + p[1] * u[1] + p[2] * u[2]) / rs, -1.0, 1.0);
      const double r = std::sqrt(std::max(rs * rs + re * re - 2.0 * rs * re * c, 0.0));
      const Lobe lobe = classify(t.geo, r);
      if (lobe == Lobe::invisible) continue;
      ++out.visible_count[k];
      out.satellites.push_back({static_cast<int>(k), r, std::acos(c), lobe, 0.0});
    }
  }
}

std::vector<std::vector<Vec3>> build_patterns(const Scenario& sc, const McConfig& cfg) {
  std::vector<std::vector<Vec3>> out;
  if (!cfg.walker) return out;
  for (int k = 0; k < sc.size(); ++k) {
    const WalkerTier& w = (*cfg.walker)[k];
    out.push_back(walker_delta(w.planes, w.sats_per_plane, w.inclination, sc.tiers[k].geo.altitude,
                               w.phasing, sc.tiers[k].geo.earth_radius));
  }
  return out;
}

TrialOutcome sample_and_score(std::mt19937_64& rng, const Scenario& sc, const McConfig& cfg,
                              const std::vector<std::vector<Vec3>>& patterns) {
  SatelliteRealization real;
  if (cfg.walker) {
    sample_walker(rng, sc, patterns, real);
  } else {
    for (int k = 0; k < sc.size(); ++k) sample_tier(rng, sc.tiers[k], k, real);
  }
  draw_fading(rng, sc.channel, real);
  std::vector<double> theta(static_cast<std::size_t>(cfg.theta_samples));
  std::uniform_real_distribution<double> half_turn(0.0, kPi);
  for (double& t : theta) t = half_turn(rng);
  return score_realization(sc, real, theta);
}

// Integer tallies for one policy; sums of integers make the reduction
// independent of thread count and order.
struct Tally {
  int tiers = 0;
  int points = 0;  // grid points
  long associated = 0;
  long dop = 0;
  long dop_serving = 0;
  std::vector<long> assoc, dop_tier;
  std::vector<long> cp, cp_tier;                     // [g] and [g * tiers + i]
  std::vector<long> nhp, nhp_sq, nhp_tier, nhp_tier_sq;  // [p] and [p * tiers + i]

  Tally(int k, int ng, int np)
      : tiers(k), points(np), assoc(k), dop_tier(k), cp(ng), cp_tier(ng * k), nhp(np),
        nhp_sq(np), nhp_tier(np * k), nhp_tier_sq(np * k) {}

  void merge(const Tally& o) {
    associated += o.associated;
    dop += o.dop;
    dop_serving += o.dop_serving;
    auto add = [](std::vector<long>& a, const std::vector<long>& b) {
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(assoc, o.assoc);
    add(dop_tier, o.dop_tier);
    add(cp, o.cp);
    add(cp_tier, o.cp_tier);
    add(nhp, o.nhp);
    add(nhp_sq, o.nhp_sq);
    add(nhp_tier, o.nhp_tier);
    add(nhp_tier_sq, o.nhp_tier_sq);
  }
};

struct GridSpec {
  std::vector<std::vector<double>> gamma;  // [g][tier], linear
  std::vector<std::vector<double>> t_th;   // [p][tier]
};

bool within_delay(const Scenario& sc, const ServingLink& link) {
  return link.tier >= 0 && link.distance <= kSpeedOfLight * sc.tiers[link.tier].delay_th;
}

void tally(const Scenario& sc, const GridSpec& grid, const ServingLink& link,
           const ServingLink& assoc, const std::vector<double>& theta, Tally& t) {
  if (assoc.tier >= 0) ++t.assoc[assoc.tier];
  if (within_delay(sc, assoc)) {
    ++t.dop;
    ++t.dop_tier[assoc.tier];
  }
  if (within_delay(sc, link)) ++t.dop_serving;
  if (link.tier < 0) return;
  const int i = link.tier;
  const int k = t.tiers;
  const int nt = static_cast<int>(grid.t_th.size());
  const TierConfig& tier = sc.tiers[i];
  ++t.associated;
  // Exit-arc counts per handover time do not depend on the threshold.
  std::vector<long> kept(nt, 0);
  for (int p = 0; p < nt; ++p) {
    const double need = tier.velocity * grid.t_th[p][i] / tier.geo.orbit_radius;
    for (double th : theta) {
      if (exit_arc_angle(link.earth_angle, th, tier.geo.dome_angle) >= need) ++kept[p];
    }
  }
  for (std::size_t g = 0; g < grid.gamma.size(); ++g) {
    if (!(link.sinr > grid.gamma[g][i])) continue;
    ++t.cp[g];
    ++t.cp_tier[g * k + i];
    for (int p = 0; p < nt; ++p) {
      const std::size_t at = g * nt + p;
      t.nhp[at] += kept[p];
      t.nhp_sq[at] += kept[p] * kept[p];
      t.nhp_tier[at * k + i] += kept[p];
      t.nhp_tier_sq[at * k + i] += kept[p] * kept[p];
    }
  }
}

McEstimate bernoulli(long hits, long n) {
  McEstimate e;
  e.trials_used = n;
  e.mean = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(std::max(e.mean * (1.0 - e.mean), 0.0) / static_cast<double>(n));
  return e;
}

McEstimate averaged(long sum, long sum_sq, long n, int per_trial) {
  McEstimate e;
  e.trials_used = n;
  const double m = static_cast<double>(per_trial);
  e.mean = static_cast<double>(sum) / (m * static_cast<double>(n));
  const double second = static_cast<double>(sum_sq) / (m * m * static_cast<double>(n));
  e.std_error = std::sqrt(std::max(second - e.mean * e.mean, 0.0) / static_cast<double>(n));
  return e;
}

PolicyEstimate summarise(const Tally& t, std::size_t g, std::size_t p, std::size_t nt, long n,
                         int theta_samples) {
  PolicyEstimate e;
  const int k = t.tiers;
  const std::size_t at = g * nt + p;
  e.associated = bernoulli(t.associated, n);
  e.dop = bernoulli(t.dop, n);
  e.dop_serving = bernoulli(t.dop_serving, n);
  e.cp = bernoulli(t.cp[g], n);
  e.nhp = averaged(t.nhp[at], t.nhp_sq[at], n, theta_samples);
  for (int i = 0; i < k; ++i) {
    e.assoc.push_back(bernoulli(t.assoc[i], n));
    e.dop_tier.push_back(bernoulli(t.dop_tier[i], n));
    e.cp_tier.push_back(bernoulli(t.cp_tier[g * k + i], n));
    e.nhp_tier.push_back(averaged(t.nhp_tier[at * k + i], t.nhp_tier_sq[at * k + i], n, theta_samples));
  }
  return e;
}

}  // namespace

TrialOutcome run_trial(std::mt19937_64& rng, const Scenario& sc, const McConfig& cfg) {
  cfg.validate(sc.size());
  return sample_and_score(rng, sc, cfg, build_patterns(sc, cfg));
}

std::vector<MetricReport> estimate_grid(const McConfig& cfg, const Scenario& sc, const McGrid& grid) {
  sc.validate();
  cfg.validate(sc.size());
  const int k = sc.size();
  GridSpec spec;
  if (grid.gamma_th_db.empty()) {
    std::vector<double> own;
    for (const auto& t : sc.tiers) own.push_back(t.gamma_th);
    spec.gamma.push_back(own);
  } else {
    for (double db : grid.gamma_th_db) spec.gamma.emplace_back(k, db_to_linear(db));
  }
  if (grid.t_th.empty()) {
    std::vector<double> own;
    for (const auto& t : sc.tiers) own.push_back(t.t_th);
    spec.t_th.push_back(own);
  } else {
    for (double t : grid.t_th) {
      if (!(t >= 0.0)) throw DomainError("handover times must be non-negative");
      spec.t_th.emplace_back(k, t);
    }
  }
  const int ng = static_cast<int>(spec.gamma.size());
  const int nt = static_cast<int>(spec.t_th.size());
  const auto patterns = build_patterns(sc, cfg);
  const bool want_nearest = cfg.policy != McPolicy::max_sinr;
  const bool want_max = cfg.policy != McPolicy::nearest;

  Tally near_total(k, ng, ng * nt);
  Tally max_total(k, ng, ng * nt);
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    Tally near_local(k, ng, ng * nt);
    Tally max_local(k, ng, ng * nt);
#pragma omp for schedule(static)
    for (long n = 0; n < cfg.trials; ++n) {
      auto rng = trial_rng(cfg.seed, n);
      const TrialOutcome o = sample_and_score(rng, sc, cfg, patterns);
      if (want_nearest) tally(sc, spec, o.nearest, o.nearest, o.theta, near_local);
      if (want_max) tally(sc, spec, o.max_sinr, o.max_sinr_assoc, o.theta, max_local);
    }
#pragma omp critical
    {
      near_total.merge(near_local);
      max_total.merge(max_local);
    }
  }

  std::vector<MetricReport> out;
  for (int g = 0; g < ng; ++g) {
    for (int p = 0; p < nt; ++p) {
      MetricReport r;
      r.gamma_th_db = grid.gamma_th_db.empty() ? std::numeric_limits<double>::quiet_NaN()
                                               : grid.gamma_th_db[g];
      r.t_th = grid.t_th.empty() ? std::numeric_limits<double>::quiet_NaN() : grid.t_th[p];
      if (want_nearest) r.nearest = summarise(near_total, g, p, nt, cfg.trials, cfg.theta_samples);
      if (want_max) r.max_sinr = summarise(max_total, g, p, nt, cfg.trials, cfg.theta_samples);
      out.push_back(std::move(r));
    }
  }
  return out;
}

MetricReport estimate(const McConfig& cfg, const Scenario& sc) {
  return estimate_grid(cfg, sc, McGrid{}).front();
}

}  // namespace hetsat
