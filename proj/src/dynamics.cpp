#include "inertia/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inertia/errors.hpp"

namespace inertia {

std::string to_string(Status s) {
  switch (s) {
    case Status::Completed: return "completed";
    case Status::StepFloorHit: return "step_floor_hit";
    case Status::MaxStepsHit: return "max_steps_hit";
    case Status::DomainRejected: return "domain_rejected";
  }
  return "unknown";
}

namespace {

// Evaluates the first-order field on y = [x; v] without allocating. NX > 0
// fixes the dimension at compile time so the small problems unroll.
template <int NX>
class Field {
 public:
  Field(const DynamicsSpec& spec, const Objective& obj)
      : spec_(spec), obj_(obj), n_(obj.dim), beta_zero_(spec.beta.is_zero()), g_(n_), hv_(n_), work_(3 * n_) {}

  int dim() const { return NX > 0 ? NX : n_; }

  void operator()(double t, const double* y, double* dy) {
    const int n = dim();
    const double* x = y;
    const double* v = y + n;
    const CSpan xs(x, n), vs(v, n);
    if (obj_.domain_guard && !obj_.domain_guard(xs)) throw DomainError("state left the objective's domain");
    obj_.grad(xs, g_);
    // The last two DP5 stages share a time, so one cached evaluation saves a
    // schedule call per step.
    if (t != t_) {
      t_ = t;
      gam_ = spec_.gamma.value(t);
      b_ = spec_.b.value(t);
      be_ = beta_zero_ ? 0.0 : spec_.beta.value(t);
    }
    const double gam = gam_, b = b_, be = be_;
    const double* g = g_.data();
    if (be != 0.0) {
      if (obj_.hvp) {
        obj_.hvp(xs, vs, hv_);
      } else {
        hvp_fd(obj_, xs, vs, hv_, work_);
      }
      const double* hv = hv_.data();
      for (int i = 0; i < n; ++i) dy[n + i] = -gam * v[i] - be * hv[i] - b * g[i];
    } else {
      for (int i = 0; i < n; ++i) dy[n + i] = -gam * v[i] - b * g[i];
    }
    for (int i = 0; i < n; ++i) dy[i] = v[i];
  }

  const Vec& last_grad() const { return g_; }
  // Coefficients at the time of the most recent evaluation.
  double gamma() const { return gam_; }
  double b() const { return b_; }
  double beta() const { return be_; }

 private:
  const DynamicsSpec& spec_;
  const Objective& obj_;
  int n_;
  bool beta_zero_;
  Vec g_, hv_, work_;
  double t_ = std::numeric_limits<double>::quiet_NaN();
  double gam_ = 0.0, b_ = 0.0, be_ = 0.0;
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
// Dense output.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller constants.
constexpr double kBeta = 0.04, kSafe = 0.9, kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kFacc1 = 1.0 / 0.2, kFacc2 = 1.0 / 10.0;

double norm2(const double* a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

}  // namespace

std::pair<Vec, Vec> rhs(const DynamicsSpec& spec, const Objective& obj, double t, const Vec& x, const Vec& v) {
  const int n = obj.dim;
  Vec y(2 * n), dy(2 * n);
  std::copy(x.begin(), x.end(), y.begin());
  std::copy(v.begin(), v.end(), y.begin() + n);
  Field<0> f(spec, obj);
  f(t, y.data(), dy.data());
  return {Vec(dy.begin(), dy.begin() + n), Vec(dy.begin() + n, dy.end())};
}

double energy(const Certificate& cert, const DynamicsSpec& spec, const Objective& obj, const Vec& z, double t,
              const Vec& x, const Vec& v) {
  const int n = obj.dim;
  const double sigma = cert.sigma.value(t);
  if (!(sigma > 0.0)) throw DomainError("energy needs sigma > 0");
  const double be = spec.beta.value(t);
  const Vec g = obj.gradient(x);
  double anchor = 0.0, dist = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = x[i] - z[i];
    const double a = d + (v[i] + be * g[i]) / sigma;
    anchor += a * a;
    dist += d * d;
  }
  const double xi = cert.xi.value(t);
  double e = cert.c2b.value(t) * (obj.f(x) - obj.f(z)) + 0.5 * cert.theta.value(t) * sigma * sigma * anchor;
  if (xi != 0.0) e += 0.5 * xi * dist;
  return e;
}

std::vector<double> checkpoint_times(double t0, double horizon, const IntegratorConfig& cfg) {
  if (!(horizon > t0)) throw ConfigError("horizon must exceed t0");
  std::vector<double> g;
  if (!cfg.checkpoint_grid.empty()) {
    g.push_back(t0);
    for (double t : cfg.checkpoint_grid)
      if (t > g.back() && t <= horizon) g.push_back(t);
    if (g.back() < horizon) g.push_back(horizon);
    return g;
  }
  if (t0 > 0.0) {
    const double decades = std::log10(horizon / t0);
    const int n = std::max(2, static_cast<int>(std::ceil(decades * cfg.per_decade)) + 1);
    g.resize(n);
    for (int i = 0; i < n; ++i) g[i] = t0 * std::pow(horizon / t0, static_cast<double>(i) / (n - 1));
  } else {
    const int n = std::max(2, cfg.linear_points);
    g.resize(n);
    for (int i = 0; i < n; ++i) g[i] = t0 + (horizon - t0) * static_cast<double>(i) / (n - 1);
  }
  g.front() = t0;
  g.back() = horizon;
  return g;
}

namespace {

template <int NX>
Trajectory integrate_impl(const DynamicsSpec& spec, const Objective& obj, const Vec& x0, const Vec& v0,
                          double horizon, const IntegratorConfig& cfg, const Certificate* cert, const Vec* z_in) {
  const int n = NX > 0 ? NX : obj.dim;
  const int N = 2 * n;
  const double t0 = spec.t0;
  const std::vector<double> cps = checkpoint_times(t0, horizon, cfg);

  Trajectory tr;
  Vec z;
  if (cert) z = z_in ? *z_in : obj.anchor(x0);
  const bool have_min = obj.known_min.has_value();
  tr.fstar = have_min ? *obj.known_min : 0.0;

  Field<NX> field(spec, obj);
  // Stage storage; y/y1 and k1/k7 swap roles through pointers after each step.
  Vec store(17 * N);
  double* y = store.data();
  double* y1 = y + N;
  double* ys = y1 + N;
  double* k1 = ys + N;
  double* k2 = k1 + N;
  double* k3 = k2 + N;
  double* k4 = k3 + N;
  double* k5 = k4 + N;
  double* k6 = k5 + N;
  double* k7 = k6 + N;
  double* rc1 = k7 + N;
  double* rc2 = rc1 + N;
  double* rc3 = rc2 + N;
  double* rc4 = rc3 + N;
  double* rc5 = rc4 + N;
  double* g0 = rc5 + N;  // n entries
  Vec gs(n);
  std::copy(x0.begin(), x0.end(), y);
  std::copy(v0.begin(), v0.end(), y + n);

  double prev_vw = 0.0, prev_qg = 0.0, prev_t = t0;
  auto record = [&](double t, const double* state) {
    Sample s;
    s.t = t;
    s.x.assign(state, state + n);
    s.v.assign(state + n, state + N);
    obj.grad(s.x, gs);
    s.f = obj.f(s.x);
    s.fgap = s.f - tr.fstar;
    s.grad_norm_sq = norm2(gs.data(), n);
    double vw = 0.0, qg = 0.0;
    if (cert) {
      s.energy = energy(*cert, spec, obj, z, t, s.x, s.v);
      // Integrands use fgap against the true minimum when known; otherwise
      // they are recomputed after the run.
      vw = values_weight(*cert, spec.gamma, spec.beta, spec.b, t) * (have_min ? s.fgap : 0.0);
      qg = weight_q(*cert, spec.beta, spec.b, t) * s.grad_norm_sq;
    }
    if (!tr.samples.empty()) {
      tr.integral_values += 0.5 * (prev_vw + vw) * (t - prev_t);
      tr.integral_grads += 0.5 * (prev_qg + qg) * (t - prev_t);
    }
    s.int_values = tr.integral_values;
    s.int_grads = tr.integral_grads;
    prev_vw = vw;
    prev_qg = qg;
    prev_t = t;
    tr.samples.push_back(std::move(s));
  };

  auto sc = [&](double a, double b) { return cfg.atol + cfg.rtol * std::max(std::abs(a), std::abs(b)); };

  double t = t0;
  field(t, y, k1);
  std::copy(field.last_grad().begin(), field.last_grad().end(), g0);
  record(t, y);
  if (cert) tr.e0 = tr.samples.front().energy;
  std::size_t next_cp = 1;

  // Curvature estimate for the stability cap. The coefficients come from the
  // last field evaluation, which is at the current t after every accepted step.
  double L_est = 0.0;
  auto hcap = [&]() {
    double cap = cfg.hmax;
    if (cfg.curvature_cap && L_est > 0.0) {
      const double b = field.b();
      if (b > 0.0) cap = std::min(cap, cfg.stability_factor / std::sqrt(b * L_est));
      const double damp = field.gamma() + field.beta() * L_est;
      if (damp > 0.0) cap = std::min(cap, 3.0 / damp);
    }
    return cap;
  };

  // Initial step (Hairer's heuristic).
  double h;
  {
    double dnf = 0.0, dny = 0.0;
    for (int i = 0; i < N; ++i) {
      const double s = cfg.atol + cfg.rtol * std::abs(y[i]);
      dnf += (k1[i] / s) * (k1[i] / s);
      dny += (y[i] / s) * (y[i] / s);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, std::min(cfg.hmax, horizon - t));
    double der2 = 0.0;
    try {
      for (int i = 0; i < N; ++i) y1[i] = y[i] + h * k1[i];
      field(t + h, y1, k2);
      for (int i = 0; i < N; ++i) {
        const double s = cfg.atol + cfg.rtol * std::abs(y[i]);
        der2 += ((k2[i] - k1[i]) / s) * ((k2[i] - k1[i]) / s);
      }
      der2 = std::sqrt(der2) / h;
    } catch (const DomainError&) {
      der2 = 1.0 / (h * h);
    }
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, cfg.hmax, horizon - t});
    h = std::max(h, cfg.hmin);
  }

  double log_facold = std::log(1e-4);
  bool last_rejected = false;
  bool domain_trouble = false;

  while (t < horizon) {
    if (tr.steps >= cfg.max_steps) {
      tr.status = Status::MaxStepsHit;
      tr.message = "max_steps reached at t = " + std::to_string(t);
      break;
    }
    h = std::min(h, hcap());
    bool last = false;
    if (t + h >= horizon || horizon - (t + h) <= 1e-12 * std::abs(horizon)) {
      h = horizon - t;
      last = true;
    }
    if (h < cfg.hmin && !last) {
      tr.status = domain_trouble ? Status::DomainRejected : Status::StepFloorHit;
      tr.message = "step size fell below hmin at t = " + std::to_string(t);
      break;
    }

    try {
      for (int i = 0; i < N; ++i) ys[i] = y[i] + h * a21 * k1[i];
      field(t + c2 * h, ys, k2);
      for (int i = 0; i < N; ++i) ys[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      field(t + c3 * h, ys, k3);
      for (int i = 0; i < N; ++i) ys[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      field(t + c4 * h, ys, k4);
      for (int i = 0; i < N; ++i) ys[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      field(t + c5 * h, ys, k5);
      for (int i = 0; i < N; ++i)
        ys[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      const double tph = last ? horizon : t + h;
      field(tph, ys, k6);
      for (int i = 0; i < N; ++i)
        y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      field(tph, y1, k7);
    } catch (const DomainError&) {
      ++tr.domain_rejections;
      domain_trouble = true;
      last_rejected = true;
      h *= 0.5;
      if (h < cfg.hmin) {
        tr.status = Status::DomainRejected;
        tr.message = "domain guard rejected steps down to hmin at t = " + std::to_string(t);
        break;
      }
      continue;
    }

    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double s = sc(y[i], y1[i]);
      err += (e / s) * (e / s);
    }
    err = std::sqrt(err / N);
    if (!std::isfinite(err)) err = 1e10;

    const double log_err = std::log(std::max(err, 1e-300));
    if (err <= 1.0) {
      ++tr.steps;
      const double log_fac = kExpo1 * log_err - kBeta * log_facold;
      log_facold = std::log(std::max(err, 1e-4));
      const double tnew = last ? horizon : t + h;

      if (next_cp < cps.size() && cps[next_cp] <= tnew) {
        for (int i = 0; i < N; ++i) {
          const double ydiff = y1[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          rc1[i] = y[i];
          rc2[i] = ydiff;
          rc3[i] = bspl;
          rc4[i] = ydiff - h * k7[i] - bspl;
          rc5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        while (next_cp < cps.size() && cps[next_cp] <= tnew) {
          const double tc = cps[next_cp];
          if (tc == tnew) {
            record(tc, y1);
          } else {
            const double th = (tc - t) / h, th1 = 1.0 - th;
            for (int i = 0; i < N; ++i) ys[i] = rc1[i] + th * (rc2[i] + th1 * (rc3[i] + th * (rc4[i] + th1 * rc5[i])));
            record(tc, ys);
          }
          ++next_cp;
        }
      }

      // Secant curvature from the gradients at both ends of the step.
      const double* g1 = field.last_grad().data();
      double dg = 0.0, dx = 0.0;
      for (int i = 0; i < n; ++i) {
        dg += (g1[i] - g0[i]) * (g1[i] - g0[i]);
        dx += (y1[i] - y[i]) * (y1[i] - y[i]);
      }
      L_est *= 0.999;
      if (dx > 0.0) L_est = std::max(L_est, std::sqrt(dg / dx));
      std::copy(g1, g1 + n, g0);

      std::swap(k1, k7);
      std::swap(y, y1);
      t = tnew;

      double fac = std::exp(log_fac);
      fac = std::max(kFacc2, std::min(kFacc1, fac / kSafe));
      double hnew = h / fac;
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      domain_trouble = false;
      h = hnew;
    } else {
      ++tr.rejected;
      last_rejected = true;
      h /= std::min(kFacc1, std::exp(kExpo1 * log_err) / kSafe);
    }
  }

  if (!have_min && !tr.samples.empty()) {
    double best = tr.samples.front().f;
    for (const auto& s : tr.samples) best = std::min(best, s.f);
    tr.fstar_observed = true;
    tr.fstar_margin = 1e-12 * (1.0 + std::abs(best));
    tr.fstar = best - tr.fstar_margin;
    double acc = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      Sample& s = tr.samples[i];
      s.fgap = s.f - tr.fstar;
      const double vw = cert ? values_weight(*cert, spec.gamma, spec.beta, spec.b, s.t) * s.fgap : 0.0;
      if (i > 0) acc += 0.5 * (prev + vw) * (s.t - tr.samples[i - 1].t);
      s.int_values = acc;
      prev = vw;
    }
    tr.integral_values = acc;
  }
  return tr;
}

}  // namespace

Trajectory integrate(const DynamicsSpec& spec, const Objective& obj, const Vec& x0, const Vec& v0, double horizon,
                     const IntegratorConfig& cfg, const Certificate* cert, const Vec* z_in) {
  const int n = obj.dim;
  if (static_cast<int>(x0.size()) != n || static_cast<int>(v0.size()) != n)
    throw ConfigError("initial state dimension does not match the objective");
  if (!(cfg.rtol > 0.0 && cfg.atol > 0.0)) throw ConfigError("rtol and atol must be positive");
  if (!(cfg.hmin > 0.0 && cfg.hmin <= cfg.hmax)) throw ConfigError("need 0 < hmin <= hmax");
  if (!(horizon > spec.t0)) throw ConfigError("horizon must exceed t0");
  if (!obj.admissible(x0)) throw DomainError("x0 is outside the objective's domain");
  switch (n) {
    case 1: return integrate_impl<1>(spec, obj, x0, v0, horizon, cfg, cert, z_in);
    case 2: return integrate_impl<2>(spec, obj, x0, v0, horizon, cfg, cert, z_in);
    case 3: return integrate_impl<3>(spec, obj, x0, v0, horizon, cfg, cert, z_in);
    default: return integrate_impl<0>(spec, obj, x0, v0, horizon, cfg, cert, z_in);
  }
}

}  // namespace inertia
