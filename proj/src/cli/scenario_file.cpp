#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hetsat/cli.hpp"
#include "hetsat/errors.hpp"

namespace hetsat::cli {

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& where) {
  if (!n.IsMap()) throw ConfigError(where + " must be a mapping", line_of(n));
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where, line_of(kv.first));
  }
}

template <class T>
T read(const YAML::Node& parent, const std::string& key, T fallback) {
  const YAML::Node n = parent[key];
  if (!n) return fallback;
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + key + "' has the wrong type", line_of(n));
  }
}

// Runs a constructor that validates, anchoring its complaint to a node.
template <class F>
auto anchored(const YAML::Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_of(n));
  }
}

WeightVector read_weights(const YAML::Node& n) {
  WeightVector w;
  if (!n) return w;
  if (!n.IsSequence() || n.size() != 3) throw ConfigError("weights need three entries [w1, w2, w3]", line_of(n));
  try {
    w.w1 = n[0].as<double>();
    w.w2 = n[1].as<double>();
    w.w3 = n[2].as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError("weights must be numbers", line_of(n));
  }
  if (w.w1 < 0.0 || w.w2 < 0.0 || w.w3 < 0.0 || std::abs(w.w1 + w.w2 + w.w3 - 1.0) > 1e-9) {
    throw ConfigError("weights must be non-negative and sum to 1", line_of(n));
  }
  // Decimal input rarely sums to 1 exactly; w2 absorbs the rounding.
  w.w2 = std::max(0.0, 1.0 - w.w1 - w.w3);
  return w;
}

SweepVariable parse_variable(const std::string& s, int line) {
  static const std::pair<const char*, SweepVariable> table[] = {
      {"gamma_th_db", SweepVariable::gamma_th_db}, {"t_th_s", SweepVariable::t_th_s},
      {"dome_angle_rad", SweepVariable::dome_angle_rad}, {"delay_th_s", SweepVariable::delay_th_s},
      {"density_per_m2", SweepVariable::density}, {"count", SweepVariable::count},
      {"power_dbw", SweepVariable::power_dbw}};
  for (const auto& [name, v] : table) {
    if (s == name) return v;
  }
  throw ConfigError("unknown sweep variable '" + s + "'", line);
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> v;
  for (int i = 0; i < steps; ++i) {
    const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    v.push_back(log_spacing ? from * std::pow(to / from, f) : from + (to - from) * f);
  }
  return v;
}

const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::gamma_th_db: return "gamma_th_db";
    case SweepVariable::t_th_s: return "t_th_s";
    case SweepVariable::dome_angle_rad: return "dome_angle_rad";
    case SweepVariable::delay_th_s: return "delay_th_s";
    case SweepVariable::density: return "density_per_m2";
    case SweepVariable::count: return "count";
    case SweepVariable::power_dbw: return "power_dbw";
  }
  return "?";
}

Scenario ScenarioFile::build() const { return build(tiers); }

Scenario ScenarioFile::build(const std::vector<TierParams>& params) const {
  Scenario s;
  s.earth_radius = earth_radius;
  s.channel = ChannelParams(channel_m, channel_b0, channel_omega, alpha, noise);
  for (const auto& p : params) s.tiers.push_back(TierConfig::make(p, earth_radius));
  s.weights_nearest = weights_nearest;
  s.weights_maxsinr = weights_max_sinr;
  s.numerics = numerics;
  s.validate();
  return s;
}

ScenarioFile parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1);
  }
  ScenarioFile f;
  f.hash = fnv1a(text);
  check_keys(root, {"earth_radius_km", "channel", "tiers", "weights", "numerics", "mc", "sweep", "weight_scan", "output"},
             "the top level");
  f.earth_radius = km(read(root, "earth_radius_km", kEarthRadius / 1000.0));

  if (const YAML::Node ch = root["channel"]) {
    check_keys(ch, {"m", "b0", "omega", "alpha", "noise_w"}, "channel");
    f.channel_m = read(ch, "m", f.channel_m);
    f.channel_b0 = read(ch, "b0", f.channel_b0);
    f.channel_omega = read(ch, "omega", f.channel_omega);
    f.alpha = read(ch, "alpha", f.alpha);
    f.noise = read(ch, "noise_w", f.noise);
    anchored(ch, [&] { return ChannelParams(f.channel_m, f.channel_b0, f.channel_omega, f.alpha, f.noise); });
  }

  const YAML::Node tiers = root["tiers"];
  if (!tiers || !tiers.IsSequence() || tiers.size() == 0) {
    throw ConfigError("'tiers' must be a non-empty list", tiers ? line_of(tiers) : -1);
  }
  for (const auto& t : tiers) {
    check_keys(t, {"altitude_km", "count", "density_per_m2", "power_dbw", "gain_main_dbi", "gain_side_dbi",
                   "velocity_mps", "gamma_th_db", "t_th_s", "delay_th_s", "dome_angle_rad", "beam_angle_rad",
                   "walker"},
               "a tier");
    if (!t["altitude_km"]) throw ConfigError("tier needs altitude_km", line_of(t));
    TierParams p;
    p.altitude = km(read(t, "altitude_km", 0.0));
    p.count = read(t, "count", 0.0);
    p.density = read(t, "density_per_m2", 0.0);
    for (const char* key : {"count", "density_per_m2"}) {
      if (t[key] && !(t[key].as<double>() > 0.0)) throw ConfigError(std::string(key) + " must be positive", line_of(t[key]));
    }
    p.power = db_to_linear(read(t, "power_dbw", 0.0));
    p.gain_main = db_to_linear(read(t, "gain_main_dbi", 0.0));
    p.gain_side = db_to_linear(read(t, "gain_side_dbi", 0.0));
    p.velocity = read(t, "velocity_mps", p.velocity);
    p.gamma_th = db_to_linear(read(t, "gamma_th_db", -5.0));
    p.t_th = read(t, "t_th_s", 0.0);
    p.delay_th = read(t, "delay_th_s", p.delay_th);
    p.dome_angle = read(t, "dome_angle_rad", p.dome_angle);
    p.beam_angle = read(t, "beam_angle_rad", p.beam_angle);
    const TierConfig made = anchored(t, [&] { return TierConfig::make(p, f.earth_radius); });
    f.tiers.push_back(p);

    WalkerTier w = WalkerTier::for_count(made.expected_count);
    if (const YAML::Node wn = t["walker"]) {
      check_keys(wn, {"planes", "sats_per_plane", "phasing", "inclination_deg"}, "walker");
      w.planes = read(wn, "planes", w.planes);
      w.sats_per_plane = read(wn, "sats_per_plane", w.sats_per_plane);
      w.phasing = read(wn, "phasing", w.phasing);
      w.inclination = read(wn, "inclination_deg", w.inclination * 180.0 / kPi) * kPi / 180.0;
      if (w.planes < 1 || w.sats_per_plane < 1) throw ConfigError("walker needs planes, sats_per_plane >= 1", line_of(wn));
    }
    f.walker.push_back(w);
  }

  if (const YAML::Node w = root["weights"]) {
    check_keys(w, {"nearest", "max_sinr"}, "weights");
    f.weights_nearest = read_weights(w["nearest"]);
    f.weights_max_sinr = w["max_sinr"] ? read_weights(w["max_sinr"]) : f.weights_nearest;
  }

  if (const YAML::Node n = root["numerics"]) {
    check_keys(n, {"abs_tol", "rel_tol", "max_subdivisions", "omega_truncation", "y_truncation", "envelope_rel",
                   "omega_ceiling", "kernel_nodes", "series_terms", "tail_rel", "target_abs"},
               "numerics");
    QuadratureSpec& q = f.numerics;
    q.abs_tol = read(n, "abs_tol", q.abs_tol);
    q.rel_tol = read(n, "rel_tol", q.rel_tol);
    q.max_subdivisions = read(n, "max_subdivisions", q.max_subdivisions);
    q.omega_truncation = read(n, "omega_truncation", q.omega_truncation);
    q.y_truncation = read(n, "y_truncation", q.y_truncation);
    q.envelope_rel = read(n, "envelope_rel", q.envelope_rel);
    q.omega_ceiling = read(n, "omega_ceiling", q.omega_ceiling);
    q.kernel_nodes = read(n, "kernel_nodes", q.kernel_nodes);
    q.series_terms = read(n, "series_terms", q.series_terms);
    q.tail_rel = read(n, "tail_rel", q.tail_rel);
    q.target_abs = read(n, "target_abs", q.target_abs);
    anchored(n, [&] { q.validate(); return 0; });
  }

  if (const YAML::Node m = root["mc"]) {
    check_keys(m, {"trials", "seed", "theta_samples"}, "mc");
    f.mc.trials = read(m, "trials", f.mc.trials);
    f.mc.seed = read(m, "seed", f.mc.seed);
    f.mc.theta_samples = read(m, "theta_samples", f.mc.theta_samples);
    anchored(m, [&] { f.mc.validate(static_cast<int>(f.tiers.size())); return 0; });
  }

  if (const YAML::Node s = root["sweep"]) {
    check_keys(s, {"variable", "tier", "from", "to", "steps", "spacing"}, "sweep");
    SweepSpec sw;
    if (!s["variable"]) throw ConfigError("sweep needs a variable", line_of(s));
    sw.variable = parse_variable(read(s, "variable", std::string()), line_of(s["variable"]));
    sw.tier = read(s, "tier", 0) - 1;
    sw.from = read(s, "from", 0.0);
    sw.to = read(s, "to", 0.0);
    sw.steps = read(s, "steps", 1);
    const auto spacing = read(s, "spacing", std::string("linear"));
    if (spacing != "linear" && spacing != "log") throw ConfigError("spacing must be linear or log", line_of(s["spacing"]));
    sw.log_spacing = spacing == "log";
    if (sw.steps < 1) throw ConfigError("sweep steps must be >= 1", line_of(s));
    if ((s["tier"] && sw.tier < 0) || sw.tier >= static_cast<int>(f.tiers.size())) {
      throw ConfigError("sweep tier out of range", line_of(s["tier"]));
    }
    if (sw.log_spacing && !(sw.from > 0.0 && sw.to > 0.0)) {
      throw ConfigError("log spacing needs positive bounds", line_of(s));
    }
    f.sweep = sw;
  }

  if (const YAML::Node w = root["weight_scan"]) {
    check_keys(w, {"step"}, "weight_scan");
    f.weight_step = read(w, "step", f.weight_step);
    if (!(f.weight_step > 0.0) || f.weight_step > 1.0) throw ConfigError("weight step must lie in (0, 1]", line_of(w));
  }
  f.output = read(root, "output", std::string());
  anchored(root, [&] { return f.build(); });
  return f;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace hetsat::cli
