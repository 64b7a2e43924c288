#include "inertia/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <tuple>

#include "inertia/errors.hpp"
#include "inertia/profile.hpp"

namespace inertia {

std::string to_string(ConditionSet s) {
  switch (s) {
    case ConditionSet::SystemA: return "SystemA";
    case ConditionSet::SystemB: return "SystemB";
    case ConditionSet::GammaGrowth: return "GammaGrowth";
    case ConditionSet::ModelGrowth: return "ModelGrowth";
    case ConditionSet::G2G3: return "G2G3";
    case ConditionSet::H1toH4: return "H1toH4";
    case ConditionSet::H2plus: return "H2plus";
    case ConditionSet::Eq61: return "Eq61";
    case ConditionSet::HrGamma: return "HrGamma";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Boundary: return "boundary";
  }
  return "unknown";
}

ConditionSet condition_set_from_string(const std::string& name) {
  for (auto s : {ConditionSet::SystemA, ConditionSet::SystemB, ConditionSet::GammaGrowth, ConditionSet::ModelGrowth,
                 ConditionSet::G2G3, ConditionSet::H1toH4, ConditionSet::H2plus, ConditionSet::Eq61,
                 ConditionSet::HrGamma})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown condition set '" + name + "'");
}

std::vector<double> make_grid(const GridSpec& spec) {
  const double t_end = spec.t_end > 0.0 ? spec.t_end : 1e3 * spec.t0;
  if (spec.points < 2) throw GridError("grid needs at least two points");
  if (!(t_end > spec.t0)) throw GridError("grid end must exceed its start");
  if (spec.log_spaced && !(spec.t0 > 0.0)) throw GridError("log-spaced grid needs t0 > 0");
  std::vector<double> g(spec.points);
  for (int i = 0; i < spec.points; ++i) {
    const double u = static_cast<double>(i) / (spec.points - 1);
    g[i] = spec.log_spaced ? spec.t0 * std::pow(t_end / spec.t0, u) : spec.t0 + (t_end - spec.t0) * u;
  }
  g.front() = spec.t0;
  g.back() = t_end;
  return g;
}

const ConditionSeries& ConditionReport::at(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return c;
  throw std::out_of_range("no condition '" + id + "' in report");
}

namespace {

Scaled abs_coeffs(Scaled s) {
  for (double& x : s.j.c) x = std::abs(x);
  return s;
}

// A jet together with a coefficient-wise bound on the magnitudes that were
// summed to produce it. The bound grows under + and - while the value may
// cancel, so value / bound measures cancellation relative to the inputs.
struct V {
  Scaled v;
  Scaled m;
};

V in(const Scaled& s) { return {s, abs_coeffs(s)}; }
V K(double k) { return {Scaled::constant(k), Scaled::constant(std::abs(k))}; }
V T(double t) { return in(Scaled(Jet::variable(t))); }
V D(const V& a) { return {a.v.derivative(), a.m.derivative()}; }

V operator+(const V& a, const V& b) { return {a.v + b.v, a.m + b.m}; }
V operator-(const V& a) { return {-a.v, a.m}; }
V operator-(const V& a, const V& b) { return {a.v - b.v, a.m + b.m}; }
V operator*(const V& a, const V& b) { return {a.v * b.v, a.m * b.m}; }
V operator/(const V& a, const V& b) {
  const Scaled q = a.v / b.v;
  const Scaled inv = abs_coeffs(Scaled::constant(1.0) / b.v);
  return {q, (a.m + abs_coeffs(q) * b.m) * inv};
}

struct Margin {
  Scaled value;
  Scaled scale;
};

Margin terms(std::initializer_list<V> ts) {
  V sum = K(0.0);
  for (const V& x : ts) sum = sum + x;
  return {sum.v, sum.m};
}

Margin equality(std::initializer_list<V> ts) {
  Margin m = terms(ts);
  if (m.value.sign() > 0) m.value = -m.value;
  return m;
}

struct Def {
  std::string id;
  bool equality = false;
  bool structural = false;
};

using PointEval = std::function<std::vector<Margin>(double)>;

double need(const std::optional<double>& v, const char* name, ConditionSet set) {
  if (!v) throw ParamError(to_string(set) + " needs parameter '" + name + "'");
  return *v;
}

void check_box(double r, double m) {
  constexpr double eps = 1e-12;
  if (!(r > 0.0 && r <= 1.0 / 3.0 + eps && m >= 2.0 * r - eps && m <= 1.0 - r + eps))
    throw ParamError("(r, m) must satisfy 0 < r <= 1/3 and 2r <= m <= 1-r");
}

// sigma = m gamma + (ln b)'/3 and xi0 = ((1 - 2(r+m)) gamma + sigma) sigma - sigma'.
struct PRecipe {
  V sigma;
  V xi0;
};

PRecipe p_recipe(const V& g, const Schedule& b, double r, double m, double t) {
  const V s = K(m) * g + K(1.0 / 3.0) * D(in(Scaled(b.log_jet(t))));
  return {s, (K(1.0 - 2.0 * (r + m)) * g + s) * s - D(s)};
}

}  // namespace

ConditionReport check_conditions(ConditionSet set, const Schedule& gamma, const Schedule& beta, const Schedule& b,
                                 const Certificate* cert, const ExtraParams& extra, const GridSpec& grid) {
  return check_conditions(set, gamma, beta, b, cert, extra, make_grid(grid));
}

ConditionReport check_conditions(ConditionSet set, const Schedule& gamma, const Schedule& beta, const Schedule& b,
                                 const Certificate* cert, const ExtraParams& extra, const std::vector<double>& grid) {
  if (grid.empty()) throw GridError("empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw GridError("grid must be strictly increasing");

  std::vector<Def> defs;
  PointEval fn;

  switch (set) {
    case ConditionSet::SystemA:
    case ConditionSet::SystemB: {
      if (!cert) throw MissingCertificateError(to_string(set) + " needs a certificate");
      const Certificate c = *cert;
      const char* prefix = set == ConditionSet::SystemA ? "A:" : "B:";
      if (set == ConditionSet::SystemA) {
        defs = {{"i"}, {"ii"}, {"iii", true}, {"iv", true}, {"v"}, {"vi"}, {"vii"}, {"c2b_nonneg"}, {"xi_nonneg"}};
      } else {
        defs = {{"i"}, {"ii"}, {"iii"}, {"iv"}, {"v"}, {"vi"}, {"vii"}};
      }
      for (auto& d : defs) d.structural = d.equality || c.structural.count(prefix + d.id) > 0;
      const bool is_a = set == ConditionSet::SystemA;
      fn = [c, gamma, beta, b, is_a](double t) {
        const V th = in(c.theta.jet(t)), si = in(c.sigma.jet(t)), xi = in(c.xi.jet(t)), c2b = in(c.c2b.jet(t));
        const V g = in(gamma.jet(t)), be = in(beta.jet(t)), bb = in(b.jet(t));
        const V bts = be * th * si, bt = be * th, ts = th * si;
        const Margin i = terms({-D(bts), th * bb * si});
        const Margin vi = terms({-D(th), K(-2.0) * si * th, K(2.0) * g * th});
        const Margin vii = terms({-(be * be * D(th)), K(-2.0) * be * D(be) * th, K(2.0) * be * bb * th});
        if (is_a) {
          return std::vector<Margin>{
              i,
              terms({-D(c2b), -D(bts), th * bb * si}),
              equality({c2b, -(bb * th), bts, -(bt * g), D(bt)}),
              equality({D(ts), ts * si, -(ts * g), xi}),
              terms({-D(ts * si), -D(xi)}),
              vi,
              vii,
              terms({c2b}),
              terms({xi}),
          };
        }
        return std::vector<Margin>{
            i,
            terms({-D(bb * th), -D(bt * g), D(D(bt)), th * bb * si}),
            terms({bb * th, -bts, bt * g, -D(bt)}),
            terms({-D(ts), -(ts * si), ts * g}),
            terms({D(D(ts)), -D(ts * g)}),
            vi,
            vii,
        };
      };
      break;
    }

    case ConditionSet::GammaGrowth: {
      auto prof = std::make_shared<IntegralProfile>(gamma);
      defs = {{"GammaGrowth"}};
      fn = [prof, gamma, b](double t) {
        const V G = in(Scaled::constant(prof->big_gamma(t)));
        const V bb = in(b.jet(t));
        const V g = in(Scaled::constant(gamma.value(t)));
        return std::vector<Margin>{terms({K(3.0) * bb, K(-2.0) * g * G * bb, -(G * D(bb))})};
      };
      break;
    }

    case ConditionSet::ModelGrowth: {
      auto prof = std::make_shared<IntegralProfile>(gamma);
      defs = {{"ModelGrowth"}};
      fn = [prof, gamma, b](double t) {
        const V p0 = in(exp_scaled(Jet::constant(prof->log_p(t))));
        const V bb = in(b.jet(t));
        const V g0 = in(Scaled::constant(gamma.value(t)));
        return std::vector<Margin>{terms({-(p0 * D(bb)), K(-2.0) * g0 * p0 * bb, bb})};
      };
      break;
    }

    case ConditionSet::G2G3: {
      double alpha;
      if (auto a = gamma.alpha_over_t()) {
        alpha = *a;
      } else {
        alpha = need(extra.alpha, "alpha", set);
      }
      defs = {{"G2"}, {"G3"}};
      fn = [alpha, beta, b](double t) {
        const V be = in(beta.jet(t)), bb = in(b.jet(t));
        const V w = bb - D(be) - be / T(t);
        return std::vector<Margin>{terms({bb, -D(be), -(be / T(t))}), terms({K(alpha - 3.0) * w, -(T(t) * D(w))})};
      };
      break;
    }

    case ConditionSet::H1toH4: {
      const double r = need(extra.r, "r", set), m = need(extra.m, "m", set);
      check_box(r, m);
      auto prof = std::make_shared<IntegralProfile>(gamma);
      defs = {{"H1"}, {"H2"}, {"H3"}, {"H4"}, {"b_nondecreasing"}};
      if (beta.is_zero() && std::abs(m - 2.0 * r) <= 1e-12) defs[3].structural = true;
      fn = [prof, gamma, beta, b, r, m](double t) {
        const V g = in(gamma.jet(t)), be = in(beta.jet(t)), bb = in(b.jet(t));
        const PRecipe pr = p_recipe(g, b, r, m, t);
        const V s = pr.sigma, x0 = pr.xi0;
        const V th = in(exp_scaled(prof->log_p_jet(t) * (2.0 * r) - b.log_jet(t) * (2.0 / 3.0)));
        const V w = bb - D(be) + be * s + K(1.0 - 2.0 * r - 2.0 * m) * g * be;
        return std::vector<Margin>{
            terms({x0}),
            terms({K(2.0) * x0 * s, K(-(m + r)) * g * x0, K(-0.5) * D(x0), K(m + r - 1.0) * g * s * s}),
            terms({bb, -D(be), be * s, -(be * g)}),
            terms({-D(th * w), -D(th * be * s), th * bb * s}),
            terms({D(bb)}),
        };
      };
      break;
    }

    case ConditionSet::H2plus: {
      const double r = need(extra.r, "r", set), m = need(extra.m, "m", set);
      check_box(r, m);
      defs = {{"H1"}, {"H2+"}, {"log_concave"}, {"b_nondecreasing"}, {"gamma_nonincreasing"}};
      fn = [gamma, b, r, m](double t) {
        const V g = in(gamma.jet(t)), bb = in(b.jet(t));
        const PRecipe pr = p_recipe(g, b, r, m, t);
        const V s = pr.sigma;
        const V lb = in(Scaled(b.log_jet(t)));
        return std::vector<Margin>{
            terms({pr.xi0}),
            terms({s * (s - K(r + m) * g) * (K(2.0) * s + K(1.0 - 2.0 * (r + m)) * g), K(0.5) * D(D(s))}),
            terms({-D(D(lb))}),
            terms({D(bb)}),
            terms({-D(g)}),
        };
      };
      break;
    }

    case ConditionSet::Eq61: {
      const double p0 = need(extra.p0, "p0", set), r = need(extra.r, "r", set);
      const double kappa = std::min(0.0, p0 - r);
      defs = {{"Eq61"}, {"gamma_nonincreasing"}};
      fn = [gamma, kappa](double t) {
        const V g = in(gamma.jet(t));
        return std::vector<Margin>{terms({D(D(g)), K(-2.0 * kappa * kappa) * g * g * g}), terms({-D(g)})};
      };
      break;
    }

    case ConditionSet::HrGamma: {
      const double r = need(extra.r, "r", set);
      defs = {{"HrGamma"}, {"gamma_nonincreasing"}};
      fn = [gamma, r](double t) {
        const V g = in(gamma.jet(t));
        return std::vector<Margin>{terms({D(D(g)), K(-2.0 * r * r) * g * g * g}), terms({-D(g)})};
      };
      break;
    }
  }

  ConditionReport rep;
  rep.set = set;
  rep.grid = grid;
  for (const auto& d : defs) {
    ConditionSeries s;
    s.id = d.id;
    s.equality = d.equality;
    s.structural = d.structural;
    s.margin.reserve(grid.size());
    s.normalized.reserve(grid.size());
    s.relative.reserve(grid.size());
    rep.conditions.push_back(std::move(s));
  }
  std::vector<std::vector<double>> dominant(defs.size());
  for (double t : grid) {
    const std::vector<Margin> ms = fn(t);
    for (std::size_t k = 0; k < ms.size(); ++k) {
      auto& s = rep.conditions[k];
      s.margin.push_back(ms[k].value.value());
      s.normalized.push_back(ratio(ms[k].value, Scaled::constant(1.0) + ms[k].scale));
      s.relative.push_back(ms[k].scale.j.c[0] == 0.0 ? 0.0 : ratio(ms[k].value, ms[k].scale));
      dominant[k].push_back(ms[k].scale.value());
    }
  }

  // Verdict and worst point.
  const double tol = rep.tol_rel;
  bool violated = false;
  for (const auto& s : rep.conditions)
    for (double n : s.relative)
      if (!(n >= -tol)) violated = true;

  auto pick = [&](bool only_growth) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bk = rep.conditions.size(), bi = 0;
    for (std::size_t k = 0; k < rep.conditions.size(); ++k) {
      const auto& s = rep.conditions[k];
      if (only_growth && (s.structural || s.equality)) continue;
      for (std::size_t i = 0; i < s.relative.size(); ++i) {
        const double n = std::isnan(s.relative[i]) ? -std::numeric_limits<double>::infinity() : s.relative[i];
        if (n < best) {
          best = n;
          bk = k;
          bi = i;
        }
      }
    }
    return std::make_tuple(best, bk, bi);
  };

  auto [best, bk, bi] = pick(!violated);
  if (bk == rep.conditions.size()) std::tie(best, bk, bi) = pick(false);
  const auto& ws = rep.conditions[bk];
  rep.worst = {ws.id, grid[bi], ws.margin[bi]};
  rep.tol_margin = tol * std::abs(dominant[bk][bi]);
  if (violated) {
    rep.verdict = Verdict::Violated;
  } else if (!ws.structural && !ws.equality && best <= tol) {
    rep.verdict = Verdict::Boundary;
  } else {
    rep.verdict = Verdict::Satisfied;
  }
  return rep;
}

}  // namespace inertia
