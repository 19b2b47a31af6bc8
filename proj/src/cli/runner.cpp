#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>
#include <omp.h>

#include "hetsat/analytics_maxsinr.hpp"
#include "hetsat/analytics_nearest.hpp"
#include "hetsat/cli.hpp"
#include "hetsat/errors.hpp"
#include "hetsat/metrics.hpp"

namespace hetsat::cli {

Mode parse_mode(const std::string& s) {
  if (s == "analytic") return Mode::analytic;
  if (s == "mc") return Mode::mc;
  if (s == "both") return Mode::both;
  throw ConfigError("mode must be analytic, mc or both");
}

Command parse_command(const std::string& s) {
  if (s == "metrics") return Command::metrics;
  if (s == "sweep") return Command::sweep;
  if (s == "weight-scan") return Command::weight_scan;
  if (s == "calibrate") return Command::calibrate;
  throw ConfigError("command must be metrics, sweep, weight-scan or calibrate");
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::analytic: return "analytic";
    case Mode::mc: return "mc";
    case Mode::both: return "both";
  }
  return "?";
}

const char* to_string(Command c) {
  switch (c) {
    case Command::metrics: return "metrics";
    case Command::sweep: return "sweep";
    case Command::weight_scan: return "weight-scan";
    case Command::calibrate: return "calibrate";
  }
  return "?";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void Table::write_csv(std::ostream& os) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

namespace {

constexpr const char* kPolicies[] = {"nearest", "max_sinr"};

bool has_analytic(Mode m) { return m != Mode::mc; }
bool has_mc(Mode m) { return m != Mode::analytic; }

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

struct AnalyticPoint {
  std::vector<double> assoc[2];
  PolicyMetrics metrics[2];
  std::vector<std::string> warnings;
};

AnalyticPoint evaluate_analytic(const Scenario& sc) {
  AnalyticPoint a;
  a.assoc[0] = assoc_probs_nearest(sc);
  a.assoc[1] = assoc_probs_maxsinr(sc);
  a.metrics[0] = {coverage_prob_nearest(sc).total, nhp_nearest(sc).total, dop_nearest(sc).total};
  const MaxSinrCoverage cov = coverage_prob_maxsinr(sc);
  a.metrics[1] = {cov.total, nhp_maxsinr(sc).total, dop_maxsinr(sc).total};
  a.warnings = cov.warnings;
  return a;
}

const PolicyEstimate& pick(const MetricReport& r, int p) { return p == 0 ? r.nearest : r.max_sinr; }

const WeightVector& weights(const Scenario& sc, int p) {
  return p == 0 ? sc.weights_nearest : sc.weights_maxsinr;
}

// Cells of one metrics row in header order; `failed` blanks the analytic part.
void append_analytic(std::vector<std::string>& row, const AnalyticPoint* a, const Scenario& sc, int k) {
  for (int p = 0; p < 2; ++p) {
    for (int i = 0; i < k; ++i) row.push_back(a ? num(a->assoc[p][i]) : "");
    if (!a) {
      row.insert(row.end(), 4, "");
      continue;
    }
    const PolicyMetrics& m = a->metrics[p];
    row.push_back(num(m.cp));
    row.push_back(num(m.nhp));
    row.push_back(num(m.dop));
    row.push_back(num(weighted_metric(m.cp, m.nhp, m.dop, weights(sc, p))));
  }
}

void append_mc(std::vector<std::string>& row, const MetricReport& r, const Scenario& sc, int k) {
  for (int p = 0; p < 2; ++p) {
    const PolicyEstimate& e = pick(r, p);
    for (int i = 0; i < k; ++i) row.push_back(num(e.assoc[i].mean));
    for (const McEstimate* m : {&e.cp, &e.nhp, &e.dop, &e.dop_serving}) {
      row.push_back(num(m->mean));
      row.push_back(num(m->std_error));
    }
    row.push_back(num(weighted_metric(e.cp.mean, e.nhp.mean, e.dop.mean, weights(sc, p))));
  }
}

std::vector<TierParams> apply(const ScenarioFile& f, const SweepSpec& s, double v) {
  auto params = f.tiers;
  for (int i = 0; i < static_cast<int>(params.size()); ++i) {
    if (s.tier >= 0 && s.tier != i) continue;
    TierParams& p = params[i];
    switch (s.variable) {
      case SweepVariable::gamma_th_db: p.gamma_th = db_to_linear(v); break;
      case SweepVariable::t_th_s: p.t_th = v; break;
      case SweepVariable::dome_angle_rad: p.dome_angle = v; break;
      case SweepVariable::delay_th_s: p.delay_th = v; break;
      case SweepVariable::density: p.density = v; p.count = 0.0; break;
      case SweepVariable::count: p.count = v; p.density = 0.0; break;
      case SweepVariable::power_dbw: p.power = db_to_linear(v); break;
    }
  }
  return params;
}

McConfig mc_config(const ScenarioFile& f, const RunOptions& opt) {
  McConfig c = f.mc;
  if (opt.seed) c.seed = *opt.seed;
  if (opt.trials) c.trials = *opt.trials;
  c.threads = opt.threads;
  return c;
}

struct Point {
  std::string variable = "none";
  double value = std::numeric_limits<double>::quiet_NaN();
  Scenario scenario;
};

std::vector<Point> sweep_points(const ScenarioFile& f, Command cmd) {
  std::vector<Point> pts;
  if (cmd != Command::sweep) {
    pts.push_back({"none", std::numeric_limits<double>::quiet_NaN(), f.build()});
    return pts;
  }
  if (!f.sweep) throw ConfigError("the sweep command needs a 'sweep' block");
  for (double v : f.sweep->values()) {
    try {
      pts.push_back({to_string(f.sweep->variable), v, f.build(apply(f, *f.sweep, v))});
    } catch (const DomainError& e) {
      throw ConfigError(std::string("sweep value ") + num(v) + ": " + e.what());
    }
  }
  return pts;
}

// Monte Carlo reports for every point; threshold and handover-time sweeps
// over all tiers share random numbers across points.
std::vector<MetricReport> mc_reports(const ScenarioFile& f, const std::vector<Point>& pts,
                                     const McConfig& cfg, Command cmd) {
  if (cmd == Command::sweep && f.sweep->tier < 0 &&
      (f.sweep->variable == SweepVariable::gamma_th_db || f.sweep->variable == SweepVariable::t_th_s)) {
    McGrid grid;
    if (f.sweep->variable == SweepVariable::gamma_th_db) {
      grid.gamma_th_db = f.sweep->values();
    } else {
      grid.t_th = f.sweep->values();
    }
    return estimate_grid(cfg, f.build(), grid);
  }
  std::vector<MetricReport> out;
  for (const auto& p : pts) out.push_back(estimate(cfg, p.scenario));
  return out;
}

Table metrics_table(const ScenarioFile& f, const RunOptions& opt) {
  const int k = static_cast<int>(f.tiers.size());
  Table t;
  t.header = header_for(opt.mode, opt.command, k);
  const auto pts = sweep_points(f, opt.command);
  const int n = static_cast<int>(pts.size());
  std::vector<std::optional<AnalyticPoint>> analytic(n);
  std::vector<std::string> failure(n);
  if (has_analytic(opt.mode)) {
#pragma omp parallel for schedule(dynamic, 1) if (n > 1)
    for (int i = 0; i < n; ++i) {
      try {
        analytic[i] = evaluate_analytic(pts[i].scenario);
      } catch (const NumericalError& e) {
        failure[i] = std::string("numerical failure: ") + e.what();
      }
    }
  }
  std::vector<MetricReport> mc;
  if (has_mc(opt.mode)) mc = mc_reports(f, pts, mc_config(f, opt), opt.command);

  for (int i = 0; i < n; ++i) {
    std::vector<std::string> row{pts[i].variable, num(pts[i].value)};
    if (has_analytic(opt.mode)) append_analytic(row, analytic[i] ? &*analytic[i] : nullptr, pts[i].scenario, k);
    if (has_mc(opt.mode)) append_mc(row, mc[i], pts[i].scenario, k);
    std::vector<std::string> warn;
    if (analytic[i]) warn = analytic[i]->warnings;
    if (pts[i].scenario.heterogeneous_thresholds() && !analytic[i]) {
      warn.push_back("tiers use different SINR thresholds");
    }
    row.push_back(failure[i].empty() ? "ok" : failure[i]);
    row.push_back(join(warn));
    if (!failure[i].empty()) ++t.failed_rows;
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table weight_scan_table(const ScenarioFile& f, const RunOptions& opt) {
  Table t;
  t.header = header_for(opt.mode, opt.command, static_cast<int>(f.tiers.size()));
  const Scenario sc = f.build();
  std::optional<std::vector<WeightCell>> an;
  std::optional<std::vector<WeightCell>> sim;
  std::string status = "ok";
  if (has_analytic(opt.mode)) {
    try {
      an = weight_grid_scan(sc, f.weight_step);
    } catch (const NumericalError& e) {
      status = std::string("numerical failure: ") + e.what();
    }
  }
  if (has_mc(opt.mode)) {
    const MetricReport r = estimate(mc_config(f, opt), sc);
    sim = weight_grid_scan(PolicyMetrics{r.nearest.cp.mean, r.nearest.nhp.mean, r.nearest.dop.mean},
                           PolicyMetrics{r.max_sinr.cp.mean, r.max_sinr.nhp.mean, r.max_sinr.dop.mean},
                           f.weight_step);
  }
  // Cell layout depends only on the step, so any available scan fixes it.
  const auto layout = weight_grid_scan(PolicyMetrics{}, PolicyMetrics{}, f.weight_step);
  for (std::size_t c = 0; c < layout.size(); ++c) {
    std::vector<std::string> row{num(layout[c].w.w1), num(layout[c].w.w2), num(layout[c].w.w3)};
    for (const auto* scan : {has_analytic(opt.mode) ? &an : nullptr, has_mc(opt.mode) ? &sim : nullptr}) {
      if (!scan) continue;
      if (*scan) {
        const WeightCell& cell = (**scan)[c];
        row.push_back(num(cell.wm_nearest));
        row.push_back(num(cell.wm_max_sinr));
        row.push_back(to_string(cell.winner));
      } else {
        row.insert(row.end(), 3, "");
      }
    }
    row.push_back(status);
    if (status != "ok") ++t.failed_rows;
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table calibrate_table(const ScenarioFile& f, const RunOptions& opt) {
  const int k = static_cast<int>(f.tiers.size());
  Table t;
  t.header = header_for(opt.mode, opt.command, k);
  const Scenario sc = f.build();
  auto mc_row = [&](const char* source, const MetricReport& r) {
    std::vector<std::string> row{source};
    for (int p = 0; p < 2; ++p) {
      const PolicyEstimate& e = pick(r, p);
      for (int i = 0; i < k; ++i) row.push_back(num(e.assoc[i].mean));
      for (const McEstimate* m : {&e.cp, &e.nhp, &e.dop}) {
        row.push_back(num(m->mean));
        row.push_back(num(m->std_error));
      }
    }
    row.push_back("ok");
    t.rows.push_back(std::move(row));
  };
  if (has_analytic(opt.mode)) {
    std::vector<std::string> row{"analytic"};
    std::string status = "ok";
    std::optional<AnalyticPoint> a;
    try {
      a = evaluate_analytic(sc);
    } catch (const NumericalError& e) {
      status = std::string("numerical failure: ") + e.what();
      ++t.failed_rows;
    }
    for (int p = 0; p < 2; ++p) {
      for (int i = 0; i < k; ++i) row.push_back(a ? num(a->assoc[p][i]) : "");
      const double vals[3] = {a ? a->metrics[p].cp : NAN, a ? a->metrics[p].nhp : NAN, a ? a->metrics[p].dop : NAN};
      for (double v : vals) {
        row.push_back(num(v));
        row.push_back("");
      }
    }
    row.push_back(status);
    t.rows.push_back(std::move(row));
  }
  McConfig cfg = mc_config(f, opt);
  if (has_mc(opt.mode)) mc_row("mc_poisson", estimate(cfg, sc));
  cfg.walker = f.walker;
  mc_row("mc_walker", estimate(cfg, sc));
  return t;
}

}  // namespace

std::vector<std::string> header_for(Mode mode, Command command, int k) {
  std::vector<std::string> h;
  auto tiers = [&](const std::string& prefix) {
    for (int i = 1; i <= k; ++i) h.push_back(prefix + "assoc_t" + std::to_string(i));
  };
  switch (command) {
    case Command::metrics:
    case Command::sweep:
      h = {"sweep_variable", "sweep_value"};
      if (has_analytic(mode)) {
        for (const char* p : kPolicies) {
          const std::string pre = std::string("an_") + p + "_";
          tiers(pre);
          for (const char* m : {"cp", "nhp", "dop", "wm"}) h.push_back(pre + m);
        }
      }
      if (has_mc(mode)) {
        for (const char* p : kPolicies) {
          const std::string pre = std::string("mc_") + p + "_";
          tiers(pre);
          for (const char* m : {"cp", "nhp", "dop", "dop_serving"}) {
            h.push_back(pre + m);
            h.push_back(pre + m + "_se");
          }
          h.push_back(pre + "wm");
        }
      }
      h.push_back("status");
      h.push_back("warnings");
      break;
    case Command::weight_scan:
      h = {"w1", "w2", "w3"};
      for (const char* src : {"an", "mc"}) {
        if ((src[0] == 'a' && !has_analytic(mode)) || (src[0] == 'm' && !has_mc(mode))) continue;
        for (const char* c : {"_wm_nearest", "_wm_max_sinr", "_winner"}) h.push_back(std::string(src) + c);
      }
      h.push_back("status");
      break;
    case Command::calibrate:
      h = {"source"};
      for (const char* p : kPolicies) {
        const std::string pre = std::string(p) + "_";
        tiers(pre);
        for (const char* m : {"cp", "nhp", "dop"}) {
          h.push_back(pre + m);
          h.push_back(pre + m + "_se");
        }
      }
      h.push_back("status");
      break;
  }
  return h;
}

Table run(const ScenarioFile& file, const RunOptions& opt) {
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
  switch (opt.command) {
    case Command::metrics:
    case Command::sweep: return metrics_table(file, opt);
    case Command::weight_scan: return weight_scan_table(file, opt);
    case Command::calibrate: return calibrate_table(file, opt);
  }
  return {};
}

std::string metadata_json(const ScenarioFile& file, const RunOptions& opt, const Table& table,
                          double wall_seconds) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "fnv1a-64:%016llx", static_cast<unsigned long long>(file.hash));
  const McConfig cfg = mc_config(file, opt);
  nlohmann::ordered_json j;
  j["tool"] = "hetsat";
  j["version"] = kToolVersion;
  j["config_hash"] = hash;
  j["mode"] = to_string(opt.mode);
  j["command"] = to_string(opt.command);
  j["seed"] = cfg.seed;
  j["trials"] = has_mc(opt.mode) || opt.command == Command::calibrate ? cfg.trials : 0;
  j["threads"] = opt.threads > 0 ? opt.threads : omp_get_max_threads();
  j["rows"] = table.rows.size();
  j["failed_rows"] = table.failed_rows;
  j["heterogeneous_thresholds"] = file.build().heterogeneous_thresholds();
  j["wall_time_s"] = wall_seconds;
  return j.dump(2) + "\n";
}

}  // namespace hetsat::cli
