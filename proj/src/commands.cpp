#include "inertia/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "inertia/errors.hpp"

namespace inertia {

namespace fs = std::filesystem;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

Json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << text;
  if (!out) throw Error("write to '" + file.string() + "' failed");
}

void write_summary(const fs::path& dir, const Json& summary) { write_text(dir / "summary.json", summary.dump(2) + "\n"); }

// CSV field quoting for free text.
std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

Json trajectory_summary(const Trajectory& tr) {
  Json j;
  j["integrator_status"] = to_string(tr.status);
  j["message"] = tr.message;
  j["steps"] = tr.steps;
  j["rejected_steps"] = tr.rejected;
  j["domain_rejections"] = tr.domain_rejections;
  j["samples"] = tr.samples.size();
  j["t_end"] = tr.t_end();
  j["fstar"] = tr.fstar;
  j["fstar_observed"] = tr.fstar_observed;
  j["terminal_fgap"] = tr.samples.empty() ? Json(nullptr) : number(tr.samples.back().fgap);
  j["e0"] = number(tr.e0);
  j["integral_values"] = tr.integral_values;
  j["integral_grads"] = tr.integral_grads;
  j["oscillation_count"] = oscillation_count(tr);
  return j;
}

Json verdict_json(const RateVerdict& v) {
  return {{"claim", v.claim},
          {"window", {v.window.lo, v.window.hi}},
          {"verdict", to_string(v.verdict)},
          {"sup_product", number(v.sup_product)},
          {"log_sup_product", number(v.log_sup_product)},
          {"sup_first_half", number(v.sup_first_half)},
          {"sup_second_half", number(v.sup_second_half)},
          {"trend_slope", number(v.trend_slope)},
          {"fitted_exponent", number(v.fitted_exponent)},
          {"points", v.points},
          {"excluded_points", v.excluded_points},
          {"all_zero", v.all_zero}};
}

int verdict_exit(RateStatus s) { return s == RateStatus::Bounded ? exit_code::kOk : exit_code::kViolated; }

// Verdict plus the least-squares exponent of the claim's family.
RateVerdict rate_verdict(const GapSeries& s, const RateClaim& claim) {
  RateVerdict v = bound_check(s, claim);
  try {
    if (claim.kind == RateClaim::Kind::Power) v.fitted_exponent = fit_power_rate(s, v.window).exponent;
    if (claim.kind == RateClaim::Kind::ExpPower) v.fitted_exponent = fit_exp_rate(s, claim.q, v.window).exponent;
  } catch (const InsufficientDataError&) {
    // Left NaN: too few samples above the numerical floor.
  }
  return v;
}

Trajectory simulate(const RunConfig& cfg) {
  const std::optional<Certificate> cert = build_certificate(cfg);
  return integrate(cfg.dynamics, cfg.problem, cfg.x0, cfg.v0, cfg.horizon, cfg.integrator, cert ? &*cert : nullptr);
}

CommandResult cmd_simulate(const RunConfig& cfg, const fs::path& out) {
  const Trajectory tr = simulate(cfg);
  write_trajectory_csv(tr, out / "trajectory.csv");
  CommandResult r;
  r.summary = trajectory_summary(tr);
  r.exit = tr.status == Status::Completed ? exit_code::kOk : exit_code::kEarlyStop;
  r.summary["status"] = tr.status == Status::Completed ? "completed" : "early_stop";
  return r;
}

CommandResult cmd_check(const RunConfig& cfg, const fs::path& out) {
  const std::optional<Certificate> cert = build_certificate(cfg);
  const DynamicsSpec& d = cfg.dynamics;
  const ConditionReport rep =
      check_conditions(cfg.check.set, d.gamma, d.beta, d.b, cert ? &*cert : nullptr, cfg.check.extra, cfg.check.grid);

  std::string csv = "t";
  for (const auto& c : rep.conditions) csv += "," + quote(c.id) + "," + quote(c.id + ":relative");
  csv += "\n";
  for (std::size_t i = 0; i < rep.grid.size(); ++i) {
    csv += format_number(rep.grid[i]);
    for (const auto& c : rep.conditions) csv += "," + format_number(c.margin[i]) + "," + format_number(c.relative[i]);
    csv += "\n";
  }
  write_text(out / "margins.csv", csv);

  CommandResult r;
  Json conds = Json::array();
  for (const auto& c : rep.conditions) {
    const auto lo = std::min_element(c.margin.begin(), c.margin.end());
    const auto rel = std::min_element(c.relative.begin(), c.relative.end());
    conds.push_back({{"id", c.id},
                     {"equality", c.equality},
                     {"structural", c.structural},
                     {"min_margin", number(*lo)},
                     {"min_relative", number(*rel)}});
  }
  r.summary["verdict"] = {{"set", to_string(rep.set)},
                          {"verdict", to_string(rep.verdict)},
                          {"worst", {{"condition", rep.worst.condition}, {"t", rep.worst.t}, {"margin", number(rep.worst.margin)}}},
                          {"tol_rel", rep.tol_rel},
                          {"tol_margin", number(rep.tol_margin)},
                          {"grid_points", rep.grid.size()},
                          {"conditions", conds}};
  r.summary["status"] = to_string(rep.verdict);
  r.exit = rep.verdict == Verdict::Satisfied ? exit_code::kOk
           : rep.verdict == Verdict::Violated ? exit_code::kViolated
                                              : exit_code::kBoundary;
  return r;
}

// Reads the t and fgap columns of a trajectory CSV.
GapSeries read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("trajectory file '" + path + "' does not exist");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("'" + path + "' is empty");
  std::vector<std::string> head;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) head.push_back(cell);
  }
  const auto col = [&](const std::string& name) {
    const auto it = std::find(head.begin(), head.end(), name);
    if (it == head.end()) throw ConfigError("'" + path + "' has no '" + name + "' column");
    return static_cast<std::size_t>(it - head.begin());
  };
  const std::size_t ct = col("t"), cg = col("fgap");
  GapSeries s;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() <= std::max(ct, cg)) throw ConfigError("'" + path + "' row " + std::to_string(row) + " is short");
    s.t.push_back(std::strtod(cells[ct].c_str(), nullptr));
    s.fgap.push_back(std::strtod(cells[cg].c_str(), nullptr));
  }
  return s;
}

CommandResult cmd_rate(const RunConfig& cfg, const fs::path& out) {
  if (!cfg.claim) throw ConfigError("rate needs a 'claim' block");
  CommandResult r;
  GapSeries series;
  bool completed = true;
  if (cfg.rate.trajectory) {
    series = read_series(*cfg.rate.trajectory);
    r.summary["trajectory"] = *cfg.rate.trajectory;
  } else {
    const Trajectory tr = simulate(cfg);
    write_trajectory_csv(tr, out / "trajectory.csv");
    r.summary["simulation"] = trajectory_summary(tr);
    series = GapSeries::from(tr);
    completed = tr.status == Status::Completed;
  }
  const RateVerdict v = rate_verdict(series, *cfg.claim);
  r.summary["verdict"] = verdict_json(v);
  if (!completed) {
    r.summary["status"] = "early_stop";
    r.exit = exit_code::kEarlyStop;
  } else {
    r.summary["status"] = to_string(v.verdict);
    r.exit = verdict_exit(v.verdict);
  }
  return r;
}

CommandResult cmd_ip(const RunConfig& cfg, const fs::path& out) {
  const IterateSequence seq = inertial_proximal(cfg.problem, cfg.ip);
  const int n = cfg.problem.dim;
  std::string csv = "k";
  for (int i = 1; i <= n; ++i) csv += ",x" + std::to_string(i);
  csv += ",fgap,k2_fgap\n";
  for (const auto& it : seq.iterates) {
    const double k = static_cast<double>(it.k);
    csv += std::to_string(it.k);
    for (double xi : it.x) csv += "," + format_number(xi);
    csv += "," + format_number(it.fgap) + "," + format_number(k * k * it.fgap) + "\n";
  }
  write_text(out / "iterates.csv", csv);

  CommandResult r;
  r.summary["iterations"] = cfg.ip.K;
  r.summary["has_fgap"] = seq.has_fgap;
  r.summary["fstar"] = seq.fstar;
  r.summary["diag_from"] = cfg.ip.diag_from;
  r.summary["sup_k2_fgap"] = number(seq.sup_k2_fgap);
  r.summary["sup_k2_delta_fgap"] = number(seq.sup_k2_delta_fgap);
  r.summary["terminal_fgap"] = number(seq.iterates.back().fgap);
  r.summary["status"] = "completed";
  if (cfg.claim) {
    if (!seq.has_fgap) throw ConfigError("a rate claim needs an objective with a known minimum");
    const RateVerdict v = rate_verdict(to_series(seq), *cfg.claim);
    r.summary["verdict"] = verdict_json(v);
    r.summary["status"] = to_string(v.verdict);
    r.exit = verdict_exit(v.verdict);
  }
  return r;
}

CommandResult run_parsed(const std::string& command, const RunConfig& cfg, const fs::path& out, int jobs);

struct Point {
  std::string label;
  Json overrides = Json::object();
  Json doc;
};

std::string label_of(const Json& overrides) {
  std::string s;
  for (const auto& [k, v] : overrides.items())
    s += (s.empty() ? "" : " ") + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  return s;
}

std::vector<Point> expand(const Json& doc, const SweepConfig& sw) {
  Json base = doc;
  base.erase("sweep");
  std::vector<Point> pts;
  const std::vector<Json> listed = sw.points.empty() ? std::vector<Json>{Json::object()} : sw.points;
  // Odometer over the grid axes; the listed points vary fastest.
  std::vector<std::size_t> idx(sw.grid.size(), 0);
  for (;;) {
    for (const Json& lp : listed) {
      Point p;
      std::string label;
      for (std::size_t a = 0; a < sw.grid.size(); ++a) p.overrides[sw.grid[a].first] = sw.grid[a].second[idx[a]];
      label = label_of(p.overrides);
      if (lp.contains("set"))
        for (const auto& [k, v] : lp.at("set").items()) p.overrides[k] = v;
      const std::string own = lp.contains("label") ? lp.at("label").get<std::string>() : label_of(lp.value("set", Json::object()));
      p.label = label.empty() ? own : (own.empty() ? label : label + " " + own);
      p.doc = base;
      for (const auto& [k, v] : p.overrides.items()) set_path(p.doc, k, v);
      pts.push_back(std::move(p));
    }
    std::size_t a = 0;
    for (; a < idx.size(); ++a) {
      if (++idx[a] < sw.grid[a].second.size()) break;
      idx[a] = 0;
    }
    if (a == idx.size()) break;
  }
  return pts;
}

std::string point_dir(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "point_%04zu", i);
  return buf;
}

CommandResult cmd_sweep(const RunConfig& cfg, const fs::path& out, int jobs) {
  const SweepConfig& sw = *cfg.sweep;
  const std::vector<Point> pts = expand(cfg.source, sw);
  // Validate every point before running any.
  std::vector<RunConfig> parsed;
  parsed.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    try {
      parsed.push_back(parse_config(pts[i].doc));
    } catch (const Error& e) {
      throw ConfigError("sweep point " + std::to_string(i) + " (" + pts[i].label + "): " + e.what());
    }
  }

  std::vector<CommandResult> results(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      const fs::path dir = out / point_dir(i);
      results[i] = run_parsed(sw.command, parsed[i], dir, 1);
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(pts.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = "point,label,dir,exit_code,status,terminal_fgap,oscillation_count,verdict,overrides\n";
  CommandResult r;
  Json rows = Json::array();
  int worst = exit_code::kOk;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Json& s = results[i].summary;
    const Json& sim = s.contains("simulation") ? s.at("simulation") : s;
    const std::string fgap = sim.contains("terminal_fgap") && sim.at("terminal_fgap").is_number()
                                 ? format_number(sim.at("terminal_fgap").get<double>())
                                 : "";
    const std::string osc = sim.contains("oscillation_count") ? std::to_string(sim.at("oscillation_count").get<int>()) : "";
    const std::string verdict =
        s.contains("verdict") && s.at("verdict").contains("verdict") ? s.at("verdict").at("verdict").get<std::string>() : "";
    const std::string status = s.value("status", "");
    csv += std::to_string(i) + "," + quote(pts[i].label) + "," + point_dir(i) + "," + std::to_string(results[i].exit) + "," +
           quote(status) + "," + fgap + "," + osc + "," + verdict + "," + quote(pts[i].overrides.dump()) + "\n";
    rows.push_back({{"point", i}, {"label", pts[i].label}, {"exit_code", results[i].exit}, {"status", status}});
    worst = std::max(worst, results[i].exit);
  }
  write_text(out / "index.csv", csv);

  if (sw.plot && sw.command != "check") {
    std::string gp = "# gnuplot script: fgap against t for every sweep point.\n";
    gp += "set datafile separator ','\nset logscale y\nset format y '%.0e'\n";
    gp += "set xlabel 't'\nset ylabel 'f(x(t)) - min f'\nset key outside right\n";
    if (!sw.plot_title.empty()) gp += "set title '" + sw.plot_title + "'\n";
    gp += "plot \\\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const int fgap_col = 2 + 2 * parsed[i].problem.dim;
      gp += "  '" + point_dir(i) + "/trajectory.csv' every ::1 using 1:" + std::to_string(fgap_col) +
            " with lines title '" + pts[i].label + "'" + (i + 1 < pts.size() ? ", \\\n" : "\n");
    }
    write_text(out / "plot.gp", gp);
  }

  r.summary["points"] = rows;
  r.summary["point_count"] = pts.size();
  r.summary["status"] = worst == exit_code::kOk ? "completed" : "some_points_failed";
  r.exit = worst;
  return r;
}

Json base_summary(const std::string& command, const Json& doc) {
  return {{"command", command}, {"status", "error"}, {"exit_code", exit_code::kInternal}, {"error", nullptr}, {"config", doc}};
}

// Maps exceptions to exit codes and always leaves a summary.json behind.
template <class F>
CommandResult guarded(const std::string& command, const Json& doc, const fs::path& out, F&& body) {
  CommandResult r;
  Json summary = base_summary(command, doc);
  try {
    fs::create_directories(out);
  } catch (const std::exception& e) {
    r.exit = exit_code::kInternal;
    summary["error"] = std::string("cannot create output directory: ") + e.what();
    r.summary = summary;
    return r;
  }
  auto fail = [&](int code, const char* status, const std::string& msg) {
    r.exit = code;
    summary["status"] = status;
    summary["error"] = msg;
  };
  try {
    CommandResult body_result = body();
    r.exit = body_result.exit;
    for (const auto& [k, v] : body_result.summary.items()) summary[k] = v;
  } catch (const MissingInputError& e) {
    fail(exit_code::kMissingInput, "missing_input", e.what());
  } catch (const ConfigError& e) {
    fail(exit_code::kConfig, "config_error", e.what());
  } catch (const ParamError& e) {
    fail(exit_code::kConfig, "config_error", e.what());
  } catch (const Error& e) {
    // Domain, recipe, grid and window errors all trace back to the run's inputs.
    fail(exit_code::kConfig, "config_error", e.what());
  } catch (const std::exception& e) {
    fail(exit_code::kInternal, "error", e.what());
  }
  summary["exit_code"] = r.exit;
  try {
    write_summary(out, summary);
  } catch (const std::exception& e) {
    if (r.exit == exit_code::kOk) r.exit = exit_code::kInternal;
    summary["error"] = e.what();
  }
  r.summary = std::move(summary);
  return r;
}

CommandResult run_parsed(const std::string& command, const RunConfig& cfg, const fs::path& out, int jobs) {
  return guarded(command, cfg.source, out, [&]() -> CommandResult {
    CommandResult r;
    if (command == "simulate") r = cmd_simulate(cfg, out);
    else if (command == "check") {
      if (!cfg.source.contains("check")) throw ConfigError("check needs a 'check' block");
      r = cmd_check(cfg, out);
    } else if (command == "rate") r = cmd_rate(cfg, out);
    else if (command == "ip") r = cmd_ip(cfg, out);
    else if (command == "sweep") {
      if (!cfg.sweep) throw ConfigError("sweep needs a 'sweep' block");
      r = cmd_sweep(cfg, out, jobs);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
    if (!cfg.description.empty()) r.summary["description"] = cfg.description;
    return r;
  });
}

}  // namespace

void write_trajectory_csv(const Trajectory& tr, const fs::path& file) {
  const std::size_t n = tr.samples.empty() ? 0 : tr.samples.front().x.size();
  std::string csv = "t";
  for (std::size_t i = 1; i <= n; ++i) csv += ",x" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) csv += ",v" + std::to_string(i);
  csv += ",fgap,grad_norm_sq,energy,int_values,int_grads\n";
  for (const auto& p : tr.samples) {
    csv += format_number(p.t);
    for (double a : p.x) csv += "," + format_number(a);
    for (double a : p.v) csv += "," + format_number(a);
    for (double a : {p.fgap, p.grad_norm_sq, p.energy, p.int_values, p.int_grads}) csv += "," + format_number(a);
    csv += "\n";
  }
  write_text(file, csv);
}

CommandResult run_command(const std::string& command, const Json& doc, const fs::path& out, int jobs) {
  // Parse failures still produce a summary.json in out.
  std::optional<RunConfig> cfg;
  CommandResult early = guarded(command, doc, out, [&]() -> CommandResult {
    cfg = parse_config(doc);
    return {};
  });
  if (!cfg) return early;
  return run_parsed(command, *cfg, out, jobs);
}

}  // namespace inertia
