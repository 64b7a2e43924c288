#include "inertia/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "inertia/errors.hpp"

namespace inertia {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Reads an object and rejects any key nobody asked for.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError("missing key '" + join(path_, key) + "'");
    return j_.at(key);
  }

  double num(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigError("'" + join(path_, key) + "' must be a number");
    return v.get<double>();
  }
  double num(const std::string& key, double def) { return has(key) ? num(key) : (used_.insert(key), def); }
  std::optional<double> opt_num(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return num(key);
  }

  long integer(const std::string& key, long def) {
    used_.insert(key);
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError("'" + join(path_, key) + "' must be an integer");
    return v.get<long>();
  }

  bool flag(const std::string& key, bool def) {
    used_.insert(key);
    if (!has(key)) return def;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError("'" + join(path_, key) + "' must be true or false");
    return v.get<bool>();
  }

  std::string str(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigError("'" + join(path_, key) + "' must be a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& def) { return has(key) ? str(key) : (used_.insert(key), def); }

  Vec vec(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_array()) throw ConfigError("'" + join(path_, key) + "' must be an array of numbers");
    Vec out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("'" + join(path_, key) + "' must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::string child(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ConfigError("unknown key '" + join(path_, k) + "'");
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Objective parse_problem(const Json& j, std::string& name) {
  if (j.is_string()) {
    name = j.get<std::string>();
    return make_problem(name);
  }
  Reader r(j, "problem");
  name = r.str("name");
  if (name != "quad-custom") {
    r.finish();
    return make_problem(name);
  }
  const Json& a = r.raw("A");
  if (!a.is_array() || a.empty()) throw ConfigError("'problem.A' must be a square matrix (array of rows)");
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    if (!a[i].is_array() || static_cast<int>(a[i].size()) != n)
      throw ConfigError("'problem.A' must be a square matrix (array of rows)");
    for (int k = 0; k < n; ++k) {
      if (!a[i][k].is_number()) throw ConfigError("'problem.A' entries must be numbers");
      A(i, k) = a[i][k].get<double>();
    }
  }
  Eigen::VectorXd l = Eigen::VectorXd::Zero(n);
  if (r.has("l")) {
    const Vec lv = r.vec("l");
    if (static_cast<int>(lv.size()) != n) throw ConfigError("'problem.l' must have the dimension of A");
    for (int i = 0; i < n; ++i) l[i] = lv[i];
  }
  r.finish();
  return make_quadratic(A, l, name);
}

// Returns true when linear checkpoint spacing was requested.
bool parse_integrator(const Json& j, IntegratorConfig& c) {
  Reader r(j, "integrator");
  const std::string spacing = r.str("spacing", "log");
  if (spacing != "log" && spacing != "linear") throw ConfigError("'integrator.spacing' must be log or linear");
  c.rtol = r.num("rtol", c.rtol);
  c.atol = r.num("atol", c.atol);
  c.hmin = r.num("hmin", c.hmin);
  c.hmax = r.num("hmax", c.hmax);
  c.max_steps = r.integer("max_steps", static_cast<long>(c.max_steps));
  c.per_decade = static_cast<int>(r.integer("per_decade", c.per_decade));
  c.linear_points = static_cast<int>(r.integer("linear_points", c.linear_points));
  if (r.has("checkpoints")) c.checkpoint_grid = r.vec("checkpoints");
  c.curvature_cap = r.flag("curvature_cap", c.curvature_cap);
  c.stability_factor = r.num("stability_factor", c.stability_factor);
  r.finish();
  return spacing == "linear";
}

RateClaim parse_claim(const Json& j, double t0) {
  Reader r(j, "claim");
  const std::string kind = r.str("kind");
  std::optional<Window> w;
  if (r.has("window")) {
    const Vec v = r.vec("window");
    if (v.size() != 2) throw ConfigError("'claim.window' must be [lo, hi]");
    w = Window{v[0], v[1]};
  }
  RateClaim c;
  if (kind == "power") {
    c = RateClaim::power(r.num("s"), w);
  } else if (kind == "exp") {
    c = RateClaim::exp_power(r.num("c"), r.num("q", 1.0), w);
  } else if (kind == "schedule") {
    c = RateClaim::schedule(parse_schedule(r.raw("schedule"), t0, "claim.schedule"), w);
  } else {
    throw ConfigError("'claim.kind' must be power, exp or schedule");
  }
  r.finish();
  return c;
}

void parse_check(const Json& j, CheckConfig& c, double t0) {
  Reader r(j, "check");
  c.set = condition_set_from_string(r.str("set"));
  c.grid.t0 = t0;
  if (r.has("grid")) {
    Reader g(r.raw("grid"), "check.grid");
    c.grid.t0 = g.num("t0", t0);
    c.grid.t_end = g.num("t_end", 0.0);
    c.grid.points = static_cast<int>(g.integer("points", c.grid.points));
    c.grid.log_spaced = g.flag("log_spaced", true);
    g.finish();
  }
  c.extra.r = r.opt_num("r");
  c.extra.m = r.opt_num("m");
  c.extra.p0 = r.opt_num("p0");
  c.extra.alpha = r.opt_num("alpha");
  r.finish();
}

void parse_ip(const Json& j, IPConfig& c, const Vec& x0) {
  Reader r(j, "ip");
  if (r.has("alpha")) {
    const Json& a = r.raw("alpha");
    if (a.is_number()) {
      c.alpha = AlphaRule::constant(a.get<double>());
    } else {
      Reader ar(a, "ip.alpha");
      const std::string kind = ar.str("kind");
      if (kind == "constant")
        c.alpha = AlphaRule::constant(ar.num("value"));
      else if (kind == "one_minus_over_k")
        c.alpha = AlphaRule::one_minus_over_k(ar.num("alpha"));
      else
        throw ConfigError("'ip.alpha.kind' must be constant or one_minus_over_k");
      ar.finish();
    }
  }
  if (r.has("lambda")) {
    const Json& l = r.raw("lambda");
    if (l.is_number()) {
      c.lambda = {l.get<double>(), 0.0};
    } else {
      Reader lr(l, "ip.lambda");
      c.lambda.c = lr.num("c", 1.0);
      c.lambda.delta = lr.num("delta", 0.0);
      lr.finish();
    }
  }
  c.K = r.integer("K", c.K);
  c.x0 = r.has("x0") ? r.vec("x0") : x0;
  if (r.has("x_prev")) c.x_prev = r.vec("x_prev");
  c.diag_from = r.integer("diag_from", c.diag_from);
  r.finish();
}

SweepConfig parse_sweep(const Json& j) {
  Reader r(j, "sweep");
  SweepConfig s;
  s.command = r.str("command", "simulate");
  if (s.command != "simulate" && s.command != "check" && s.command != "rate" && s.command != "ip")
    throw ConfigError("'sweep.command' must be simulate, check, rate or ip");
  if (r.has("grid")) {
    const Json& g = r.raw("grid");
    if (!g.is_object()) throw ConfigError("'sweep.grid' must map key paths to value arrays");
    for (const auto& [k, v] : g.items()) {
      if (!v.is_array() || v.empty()) throw ConfigError("'sweep.grid." + k + "' must be a nonempty array");
      s.grid.emplace_back(k, std::vector<Json>(v.begin(), v.end()));
    }
  }
  if (r.has("points")) {
    const Json& p = r.raw("points");
    if (!p.is_array() || p.empty()) throw ConfigError("'sweep.points' must be a nonempty array");
    for (const auto& e : p) {
      Reader pr(e, "sweep.points[]");
      pr.str("label", "");
      if (pr.has("set") && !pr.raw("set").is_object()) throw ConfigError("'sweep.points[].set' must be an object");
      pr.finish();
      s.points.push_back(e);
    }
  }
  s.plot = r.flag("plot", false);
  s.plot_title = r.str("title", "");
  r.finish();
  return s;
}

}  // namespace

Schedule parse_schedule(const Json& j, double t0, const std::string& path) {
  if (j.is_number()) return Schedule::constant(j.get<double>(), t0);
  Reader r(j, path);
  const std::string family = r.str("family");
  Schedule s;
  if (family == "constant") {
    s = Schedule::constant(r.num("k"), t0);
  } else if (family == "power") {
    s = Schedule::power(r.num("k", 1.0), r.num("p"), t0);
  } else if (family == "alpha_over_t") {
    s = Schedule::alpha_over_t_power(r.num("alpha"), r.num("q", 0.0), t0);
  } else if (family == "exp_power") {
    const double k = r.num("k", 1.0), mu = r.num("mu"), q = r.num("q", 1.0);
    // k = 0 is the zero schedule; keep it exactly zero so no Hessian work is done.
    s = k == 0.0 ? Schedule::constant(0.0, t0) : Schedule::exp_power(k, mu, q, t0);
  } else if (family == "sum" || family == "product") {
    const std::string key = family == "sum" ? "terms" : "factors";
    const Json& parts = r.raw(key);
    if (!parts.is_array() || parts.empty()) throw ConfigError("'" + r.child(key) + "' must be a nonempty array");
    std::vector<Schedule> children;
    for (std::size_t i = 0; i < parts.size(); ++i)
      children.push_back(parse_schedule(parts[i], t0, r.child(key) + "[" + std::to_string(i) + "]"));
    s = family == "sum" ? Schedule::sum(std::move(children)) : Schedule::product(std::move(children));
  } else if (family == "table") {
    s = Schedule::table(r.vec("t"), r.vec("v"));
  } else {
    throw ConfigError("'" + r.child("family") + "': unknown schedule family '" + family + "'");
  }
  r.finish();
  return s;
}

RunConfig parse_config(const Json& doc) {
  RunConfig c;
  c.source = doc;
  Reader r(doc, "");
  c.description = r.str("description", "");
  c.problem = parse_problem(r.has("problem") ? r.raw("problem") : Json("quad-diag"), c.problem_name);
  const int n = c.problem.dim;

  double t0 = 1.0;
  if (r.has("dynamics")) {
    Reader d(r.raw("dynamics"), "dynamics");
    t0 = d.num("t0", 1.0);
    c.dynamics.t0 = t0;
    c.dynamics.gamma = parse_schedule(d.raw("gamma"), t0, "dynamics.gamma");
    c.dynamics.beta = d.has("beta") ? parse_schedule(d.raw("beta"), t0, "dynamics.beta") : Schedule::constant(0.0, t0);
    c.dynamics.b = d.has("b") ? parse_schedule(d.raw("b"), t0, "dynamics.b") : Schedule::constant(1.0, t0);
    d.finish();
  } else {
    c.dynamics = {Schedule::alpha_over_t_power(3.0, 0.0, 1.0), Schedule::constant(0.0, 1.0), Schedule::constant(1.0, 1.0),
                  1.0};
  }

  c.x0 = r.has("x0") ? r.vec("x0") : Vec(n, 1.0);
  c.v0 = r.has("v0") ? r.vec("v0") : Vec(n, 0.0);
  if (static_cast<int>(c.x0.size()) != n || static_cast<int>(c.v0.size()) != n)
    throw ConfigError("x0 and v0 must have the problem dimension " + std::to_string(n));
  c.horizon = r.num("horizon", c.horizon);
  if (r.has("integrator") && parse_integrator(r.raw("integrator"), c.integrator) && c.integrator.checkpoint_grid.empty()) {
    // Linear spacing for data that oscillates at a fixed frequency (log spacing aliases it).
    const int m = c.integrator.linear_points;
    if (m < 2) throw ConfigError("'integrator.linear_points' must be at least 2");
    if (!(c.horizon > t0)) throw ConfigError("horizon must exceed dynamics.t0");
    for (int i = 0; i < m; ++i) c.integrator.checkpoint_grid.push_back(t0 + (c.horizon - t0) * i / (m - 1));
    c.integrator.checkpoint_grid.back() = c.horizon;
  }

  if (r.has("certificate")) {
    Json cj = r.raw("certificate");
    if (cj.is_string()) cj = Json::object({{"recipe", cj}});
    Reader cr(cj, "certificate");
    const std::string recipe = cr.str("recipe");
    if (recipe == "none")
      c.certificate = CertificateKind::None;
    else if (recipe == "gamma")
      c.certificate = CertificateKind::Gamma;
    else if (recipe == "p")
      c.certificate = CertificateKind::P;
    else
      throw ConfigError("'certificate.recipe' must be none, gamma or p");
    c.cert_r = cr.num("r", c.cert_r);
    c.cert_m = cr.num("m", c.cert_m);
    cr.finish();
  }

  if (r.has("claim")) c.claim = parse_claim(r.raw("claim"), t0);
  if (r.has("check")) parse_check(r.raw("check"), c.check, t0);
  if (r.has("rate")) {
    Reader rr(r.raw("rate"), "rate");
    if (rr.has("trajectory")) c.rate.trajectory = rr.str("trajectory");
    rr.finish();
  }
  c.ip.x0 = c.x0;
  if (r.has("ip")) parse_ip(r.raw("ip"), c.ip, c.x0);
  if (r.has("sweep")) c.sweep = parse_sweep(r.raw("sweep"));
  r.finish();
  return c;
}

std::optional<Certificate> build_certificate(const RunConfig& cfg) {
  const DynamicsSpec& d = cfg.dynamics;
  switch (cfg.certificate) {
    case CertificateKind::None: return std::nullopt;
    case CertificateKind::Gamma: return derive_gamma_certificate(d.gamma, d.beta, d.b);
    case CertificateKind::P: return derive_p_certificate(d.gamma, d.beta, d.b, cfg.cert_r, cfg.cert_m);
  }
  return std::nullopt;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void set_path(Json& doc, const std::string& path, const Json& value) {
  if (path.empty()) throw ConfigError("empty key path");
  Json* node = &doc;
  std::stringstream ss(path);
  std::string seg;
  std::vector<std::string> segs;
  while (std::getline(ss, seg, '.')) {
    if (seg.empty()) throw ConfigError("malformed key path '" + path + "'");
    segs.push_back(seg);
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const bool last = i + 1 == segs.size();
    const std::string& s = segs[i];
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
      } catch (const std::exception&) {
        throw ConfigError("'" + path + "': '" + s + "' does not index an array");
      }
      if (idx >= node->size()) throw ConfigError("'" + path + "': index " + s + " out of range");
      node = &(*node)[idx];
    } else {
      // A scalar on the way is replaced by an object (e.g. gamma: 1 -> gamma.family ...).
      if (!node->is_object()) *node = Json::object();
      node = &(*node)[s];
    }
    if (last) *node = value;
  }
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  set_path(doc, key, value);
}

namespace {

Json alpha_t(double alpha, double q = 0.0) { return {{"family", "alpha_over_t"}, {"alpha", alpha}, {"q", q}}; }

Json base(const std::string& description, Json dynamics, double horizon) {
  return {{"description", description},
          {"problem", "quad-diag"},
          {"dynamics", std::move(dynamics)},
          {"x0", {1.0, 1.0}},
          {"v0", {0.0, 0.0}},
          {"horizon", horizon},
          {"integrator", {{"rtol", 1e-9}, {"atol", 1e-9}}}};
}

Json power_claim(double s, double lo, double hi) { return {{"kind", "power"}, {"s", s}, {"window", {lo, hi}}}; }

Json fig1() {
  // gamma = alpha, b = e^{mu t}, beta = c e^{nu t} on the log-barrier.
  Json j = {{"description",
             "log-barrier runs of x'' + alpha x' + c e^{nu t} Hess f x' + e^{mu t} grad f = 0 over a guessed "
             "(alpha, mu, nu, c) grid"},
            {"problem", "log-barrier"},
            {"dynamics",
             {{"t0", 0.0},
              {"gamma", 1.0},
              {"beta", {{"family", "exp_power"}, {"k", 0.0}, {"mu", 0.0}, {"q", 1.0}}},
              {"b", {{"family", "exp_power"}, {"k", 1.0}, {"mu", 1.0}, {"q", 1.0}}}}},
            {"x0", {2.0, 0.5}},
            {"v0", {0.0, 0.0}},
            {"horizon", 8.0},
            {"integrator", {{"rtol", 1e-9}, {"atol", 1e-12}}}};
  Json points = Json::array();
  for (double alpha : {1.0, 3.0})
    for (double mu : {0.0, 1.0, 2.0})
      for (double c : {0.0, 1.0}) {
        std::vector<double> nus = {0.0};
        if (c != 0.0 && mu != 0.0) nus.push_back(mu);
        for (double nu : nus) {
          std::ostringstream label;
          label << "alpha=" << alpha << " mu=" << mu << " nu=" << nu << " c=" << c;
          points.push_back({{"label", label.str()},
                            {"set",
                             {{"dynamics.gamma", alpha},
                              {"dynamics.b.mu", mu},
                              {"dynamics.beta.k", c},
                              {"dynamics.beta.mu", nu}}}});
        }
      }
  j["sweep"] = {{"command", "simulate"}, {"points", points}, {"plot", true}, {"title", "log-barrier: f(x(t)) - min f"}};
  return j;
}

Json fig2() {
  Json j = base("the comparison-table systems on both readings of the ill-conditioned quadratic", Json::object(), 20.0);
  j["dynamics"] = {{"t0", 1.0}, {"gamma", 1.0}, {"beta", 0.0}, {"b", 1.0}};
  // Linear sampling resolves the fast oscillations the figure is about.
  j["integrator"] = {{"rtol", 1e-9}, {"atol", 1e-16}, {"spacing", "linear"}, {"linear_points", 20001}};
  // mu = 1/2 keeps the rank-one run (largest eigenvalue ~1e6) within a few seconds.
  const Json exp_t = {{"family", "exp_power"}, {"k", 1.0}, {"mu", 0.5}, {"q", 1.0}};
  const Json systems = Json::array({
      {{"label", "heavy-ball"}, {"set", {{"dynamics.gamma", 1.0}, {"dynamics.beta", 0.0}}}},
      {{"label", "heavy-ball-hessian"}, {"set", {{"dynamics.gamma", 1.0}, {"dynamics.beta", 1.0}}}},
      {{"label", "avd3"}, {"set", {{"dynamics.gamma", alpha_t(3.0)}, {"dynamics.beta", 0.0}}}},
      {{"label", "avd3-hessian"}, {"set", {{"dynamics.gamma", alpha_t(3.0)}, {"dynamics.beta", 1.0}}}},
      {{"label", "rescaled-exp"}, {"set", {{"dynamics.gamma", 1.0}, {"dynamics.beta", 0.0}, {"dynamics.b", exp_t}}}},
  });
  j["sweep"] = {{"command", "simulate"},
                {"grid", {{"problem", {"fig2-caption", "fig2-eq"}}}},
                {"points", systems},
                {"plot", true},
                {"title", "ill-conditioned quadratics: f(x(t)) - min f"}};
  return j;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"avd3",   "avd4",  "avd4-hessian", "cor1.6", "prop-jordan", "convlin", "thm6.4",
          "sec4.4", "eq61",  "ip",           "fig1",   "fig2"};
}

Json preset(const std::string& name) {
  const Json zero = 0.0, one = 1.0;
  if (name == "avd3" || name == "avd4") {
    const double a = name == "avd3" ? 3.0 : 4.0;
    Json j = base("x'' + (" + std::to_string(static_cast<int>(a)) + "/t) x' + grad f = 0 on quad-diag",
                  {{"t0", 1.0}, {"gamma", alpha_t(a)}, {"beta", zero}, {"b", one}}, 500.0);
    j["certificate"] = {{"recipe", "gamma"}};
    j["claim"] = power_claim(2.0, 50.0, 500.0);
    j["check"] = {{"set", "GammaGrowth"}};
    return j;
  }
  if (name == "avd4-hessian") {
    Json j = base("x'' + (4/t) x' + Hess f x' + grad f = 0 on quad-diag",
                  {{"t0", 1.0}, {"gamma", alpha_t(4.0)}, {"beta", one}, {"b", one}}, 500.0);
    j["certificate"] = {{"recipe", "gamma"}};
    j["claim"] = power_claim(2.0, 50.0, 500.0);
    return j;
  }
  if (name == "prop-jordan") {
    const Json b = {{"family", "sum"}, {"terms", {1.0, {{"family", "power"}, {"k", 1.0}, {"p", -1.0}}}}};
    Json j = base("x'' + (4/t) x' + Hess f x' + (1 + 1/t) grad f = 0 on quad-diag",
                  {{"t0", 1.0}, {"gamma", alpha_t(4.0)}, {"beta", one}, {"b", b}}, 500.0);
    j["certificate"] = {{"recipe", "gamma"}};
    j["claim"] = power_claim(2.0, 50.0, 500.0);
    return j;
  }
  if (name == "cor1.6") {
    Json j = base("x'' + (2/t) x' + t grad f = 0 on quad-diag",
                  {{"t0", 1.0}, {"gamma", alpha_t(2.0)}, {"beta", zero}, {"b", {{"family", "power"}, {"k", 1.0}, {"p", 1.0}}}},
                  500.0);
    j["certificate"] = {{"recipe", "p"}, {"r", 1.0 / 3.0}, {"m", 2.0 / 3.0}};
    j["claim"] = power_claim(5.0 / 3.0, 50.0, 500.0);
    return j;
  }
  if (name == "convlin") {
    Json j = base("x'' + x' + e^t grad f = 0 on quad-diag",
                  {{"t0", 1.0}, {"gamma", one}, {"beta", zero}, {"b", {{"family", "exp_power"}, {"k", 1.0}, {"mu", 1.0}, {"q", 1.0}}}},
                  25.0);
    j["integrator"] = {{"rtol", 1e-6}, {"atol", 1e-16}};
    j["claim"] = {{"kind", "exp"}, {"c", 1.0}, {"q", 1.0}, {"window", {2.5, 25.0}}};
    return j;
  }
  if (name == "thm6.4" || name == "sec4.4") {
    const Json b = {{"family", "exp_power"}, {"k", 1.0}, {"mu", 2.0}, {"q", 0.5}};
    Json j = base("x'' + t^{-1/2} x' + e^{2 sqrt t} grad f = 0 on quad-diag",
                  {{"t0", 1.0}, {"gamma", alpha_t(1.0, 0.5)}, {"beta", zero}, {"b", b}}, 100.0);
    if (name == "thm6.4") {
      j["integrator"] = {{"rtol", 1e-6}, {"atol", 1e-16}};
      j["claim"] = {{"kind", "exp"}, {"c", 1.0}, {"q", 0.5}, {"window", {10.0, 100.0}}};
    } else {
      j["check"] = {{"set", "GammaGrowth"}, {"r", 1.0 / 3.0}, {"m", 2.0 / 3.0}};
    }
    return j;
  }
  if (name == "eq61") {
    Json j = base("gamma = 3/t against the damping-curvature condition",
                  {{"t0", 1.0}, {"gamma", alpha_t(3.0)}, {"beta", zero}, {"b", one}}, 500.0);
    j["check"] = {{"set", "Eq61"}, {"p0", 0.0}, {"r", 1.0 / 3.0}};
    return j;
  }
  if (name == "ip") {
    Json j = {{"description", "inertial proximal point, alpha_k = 1 - 4/k, lambda = 1, on quad-diag"},
              {"problem", "quad-diag"},
              {"x0", {1.0, 1.0}},
              {"ip", {{"alpha", {{"kind", "one_minus_over_k"}, {"alpha", 4.0}}}, {"lambda", {{"c", 1.0}, {"delta", 0.0}}}, {"K", 2000}}},
              {"claim", power_claim(2.0, 20.0, 2000.0)}};
    return j;
  }
  if (name == "fig1") return fig1();
  if (name == "fig2") return fig2();
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace inertia
