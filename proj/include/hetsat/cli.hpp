#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hetsat/montecarlo.hpp"
#include "hetsat/scenario.hpp"

namespace hetsat::cli {

enum class Mode { analytic, mc, both };
enum class Command { metrics, sweep, weight_scan, calibrate };

Mode parse_mode(const std::string& s);
Command parse_command(const std::string& s);
const char* to_string(Mode m);
const char* to_string(Command c);

/// Variables a sweep may drive. Tier-specific ones apply to `tier` only,
/// or to every tier when no tier is named.
enum class SweepVariable { gamma_th_db, t_th_s, dome_angle_rad, delay_th_s, density, count, power_dbw };

struct SweepSpec {
  SweepVariable variable = SweepVariable::gamma_th_db;
  int tier = -1;  ///< 0-based; -1 for all tiers
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
  bool log_spacing = false;

  std::vector<double> values() const;
};

const char* to_string(SweepVariable v);

/// Parsed scenario file. Tier parameters are kept so sweeps can rebuild
/// derived quantities such as the density from a new count.
struct ScenarioFile {
  std::vector<TierParams> tiers;
  double channel_m = 2.0;
  double channel_b0 = 1.0;
  double channel_omega = 1.0;
  double alpha = 2.0;
  double noise = 1e-12;
  double earth_radius = kEarthRadius;
  WeightVector weights_nearest;
  WeightVector weights_max_sinr;
  QuadratureSpec numerics;
  McConfig mc;
  std::optional<SweepSpec> sweep;
  double weight_step = 0.05;
  std::vector<WalkerTier> walker;  ///< one per tier; derived from counts if absent
  std::string output;
  std::uint64_t hash = 0;  ///< FNV-1a of the file bytes

  Scenario build() const;
  Scenario build(const std::vector<TierParams>& tiers) const;
};

/// Throws ConfigError with the offending line on any schema or range problem.
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

struct RunOptions {
  Mode mode = Mode::analytic;
  Command command = Command::metrics;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  int threads = 0;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int failed_rows = 0;
  std::vector<std::string> warnings;

  void write_csv(std::ostream& os) const;
};

/// Column names for a run; depends on mode, command and the tier count.
std::vector<std::string> header_for(Mode mode, Command command, int num_tiers);

Table run(const ScenarioFile& file, const RunOptions& opt);

/// Metadata sidecar as a JSON document.
std::string metadata_json(const ScenarioFile& file, const RunOptions& opt, const Table& table,
                          double wall_seconds);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace hetsat::cli
