#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hetsat/constellation.hpp"
#include "hetsat/scenario.hpp"

namespace hetsat {

enum class McPolicy { nearest, max_sinr, both };

/// Deterministic Walker-delta snapshot used in place of Poisson sampling for
/// one tier.
struct WalkerTier {
  int planes = 10;
  int sats_per_plane = 10;
  int phasing = 1;
  double inclination = 0.925;  ///< rad

  /// Roughly square pattern with about `count` satellites.
  static WalkerTier for_count(double count);
};

struct McConfig {
  long trials = 100000;
  std::uint64_t seed = 1;
  McPolicy policy = McPolicy::both;
  int theta_samples = 16;
  int threads = 0;  ///< 0 keeps the OpenMP default
  /// If set, one Walker pattern per tier replaces the Poisson process and
  /// the user direction is drawn uniformly on the sphere each trial.
  std::optional<std::vector<WalkerTier>> walker;

  void validate(int num_tiers) const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long trials_used = 0;
};

/// Simulated metrics of one association policy.
struct PolicyEstimate {
  McEstimate cp;
  McEstimate nhp;
  /// Delay outage of the satellite chosen on main-lobe mean power,
  /// the association the analytic DOP describes.
  McEstimate dop;
  /// Same for the instantaneous serving satellite; equals `dop` for the
  /// nearest policy.
  McEstimate dop_serving;
  McEstimate associated;            ///< at least one satellite visible
  std::vector<McEstimate> assoc;    ///< association frequency per tier
  std::vector<McEstimate> cp_tier;  ///< covered and served by tier i
  std::vector<McEstimate> nhp_tier;
  std::vector<McEstimate> dop_tier;  ///< per associated tier
};

struct MetricReport {
  double gamma_th_db = 0.0;  ///< NaN when the scenario's own thresholds were used
  double t_th = 0.0;          ///< NaN when the scenario's own handover times were used
  PolicyEstimate nearest;
  PolicyEstimate max_sinr;
};

/// Grid evaluated with common random numbers: every trial is scored at all
/// (threshold, handover time) pairs. Empty vectors keep the scenario values.
struct McGrid {
  std::vector<double> gamma_th_db;
  std::vector<double> t_th;
};

/// Outcome of one realisation for one policy.
struct ServingLink {
  int tier = -1;  ///< -1 when nothing is visible
  int index = -1;
  double sinr = 0.0;
  double distance = 0.0;
  double earth_angle = 0.0;
};

struct TrialOutcome {
  ServingLink nearest;
  ServingLink max_sinr;
  ServingLink max_sinr_assoc;  ///< by p G_main r^-alpha, fading and lobe ignored
  std::vector<double> theta;     ///< departure longitudes drawn for NHP
};

/// splitmix64 finaliser; per-trial seeds are splitmix64(seed ^ splitmix64(trial)).
std::uint64_t splitmix64(std::uint64_t x);
std::mt19937_64 trial_rng(std::uint64_t seed, long trial);

/// Scores an explicit realisation (fading already drawn). Interference is
/// every visible satellite except the serving one.
TrialOutcome score_realization(const Scenario& sc, const SatelliteRealization& real,
                               const std::vector<double>& theta = {});

/// Samples and scores one trial.
TrialOutcome run_trial(std::mt19937_64& rng, const Scenario& sc, const McConfig& cfg);

/// One report per grid point, threshold-major.
std::vector<MetricReport> estimate_grid(const McConfig& cfg, const Scenario& sc, const McGrid& grid);

MetricReport estimate(const McConfig& cfg, const Scenario& sc);

}  // namespace hetsat
