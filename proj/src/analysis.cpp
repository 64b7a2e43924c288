#include "inertia/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "inertia/errors.hpp"

namespace inertia {

GapSeries GapSeries::from(const Trajectory& tr) {
  GapSeries s;
  s.t.reserve(tr.samples.size());
  s.fgap.reserve(tr.samples.size());
  for (const auto& p : tr.samples) {
    s.t.push_back(p.t);
    s.fgap.push_back(p.fgap);
  }
  s.fstar = tr.fstar;
  return s;
}

double GapSeries::floor() const { return 100.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fstar)); }

MonotoneResult check_monotone(const std::vector<double>& values, double eps_rel, double eps_abs) {
  MonotoneResult r;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (!(values[k + 1] <= values[k] * (1.0 + eps_rel) + eps_abs)) {
      r.ok = false;
      r.first_violation = k + 1;
      break;
    }
  }
  return r;
}

Window default_window(double t0, double t_end) { return {std::max(t_end / 10.0, t0 + 0.2 * (t_end - t0)), t_end}; }

RateClaim RateClaim::power(double s, std::optional<Window> w) {
  RateClaim c;
  c.kind = Kind::Power;
  c.s = s;
  c.window = w;
  return c;
}

RateClaim RateClaim::exp_power(double coef, double q, std::optional<Window> w) {
  RateClaim c;
  c.kind = Kind::ExpPower;
  c.c = coef;
  c.q = q;
  c.window = w;
  return c;
}

RateClaim RateClaim::schedule(Schedule d, std::optional<Window> w) {
  RateClaim c;
  c.kind = Kind::Denominator;
  c.denominator = std::move(d);
  c.window = w;
  return c;
}

double RateClaim::log_denominator(double t) const {
  switch (kind) {
    case Kind::Power: return s * std::log(t);
    case Kind::ExpPower: return c * std::pow(t, q);
    case Kind::Denominator: return denominator.log_jet(t).c[0];
  }
  return 0.0;
}

std::string RateClaim::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Power: os << "power s=" << s; break;
    case Kind::ExpPower: os << "exp c=" << c << " q=" << q; break;
    case Kind::Denominator: os << "denominator " << denominator.describe(); break;
  }
  return os.str();
}

std::string to_string(RateStatus s) {
  switch (s) {
    case RateStatus::Bounded: return "bounded";
    case RateStatus::Growing: return "growing";
    case RateStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

Window resolve(const GapSeries& s, std::optional<Window> w) {
  if (s.t.size() != s.fgap.size()) throw WindowError("series t and fgap differ in length");
  if (s.t.empty()) throw WindowError("empty series");
  const double first = s.t.front(), last = s.t.back();
  const Window win = w ? *w : default_window(first, last);
  if (!(win.lo < win.hi)) throw WindowError("window needs lo < hi");
  const double slack = 1e-12 * std::max(1.0, std::abs(last));
  if (win.lo < first - slack || win.hi > last + slack) throw WindowError("window lies outside the sampled span");
  return win;
}

struct Line {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line l;
  l.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  l.intercept = my - l.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (l.intercept + l.slope * x[i]);
    ss += r * r;
  }
  l.rms = std::sqrt(ss / n);
  return l;
}

// Usable points (t, log fgap) inside the window.
struct Usable {
  std::vector<double> t, log_gap;
  std::size_t excluded = 0;
};

Usable usable(const GapSeries& s, Window w) {
  Usable u;
  const double fl = s.floor();
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < w.lo || s.t[i] > w.hi) continue;
    if (!(s.fgap[i] > fl)) {
      ++u.excluded;
      continue;
    }
    u.t.push_back(s.t[i]);
    u.log_gap.push_back(std::log(s.fgap[i]));
  }
  return u;
}

}  // namespace

RateVerdict bound_check(const GapSeries& s, const RateClaim& claim) {
  const Window w = resolve(s, claim.window);
  const Usable u = usable(s, w);
  RateVerdict v;
  v.claim = claim.describe();
  v.window = w;
  v.points = u.t.size();
  v.excluded_points = u.excluded;
  v.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  if (u.t.empty()) {
    v.all_zero = u.excluded > 0;
    v.verdict = v.all_zero ? RateStatus::Bounded : RateStatus::Inconclusive;
    return v;
  }

  const double mid = w.lo > 0.0 ? std::sqrt(w.lo * w.hi) : 0.5 * (w.lo + w.hi);
  std::vector<double> log_t, log_prod;
  double sup = -std::numeric_limits<double>::infinity();
  double sup1 = -std::numeric_limits<double>::infinity(), sup2 = sup1;
  for (std::size_t i = 0; i < u.t.size(); ++i) {
    const double lp = claim.log_denominator(u.t[i]) + u.log_gap[i];
    log_t.push_back(std::log(u.t[i]));
    log_prod.push_back(lp);
    sup = std::max(sup, lp);
    double& half = u.t[i] <= mid ? sup1 : sup2;
    half = std::max(half, lp);
  }
  v.log_sup_product = sup;
  v.sup_product = std::exp(sup);
  v.sup_first_half = std::exp(sup1);
  v.sup_second_half = std::exp(sup2);
  if (u.t.size() < 3 || sup1 == -std::numeric_limits<double>::infinity()) {
    v.verdict = RateStatus::Inconclusive;
    return v;
  }
  v.trend_slope = least_squares(log_t, log_prod).slope;
  const bool tail_ok = sup2 <= sup1 + std::log(kTailRatio);
  v.verdict = (v.trend_slope <= kSlopeTol && tail_ok) ? RateStatus::Bounded : RateStatus::Growing;
  return v;
}

RateVerdict bound_check(const Trajectory& tr, const RateClaim& claim) { return bound_check(GapSeries::from(tr), claim); }

namespace {

RateFit fit(const GapSeries& s, std::optional<Window> w, double q, bool power) {
  const Window win = resolve(s, w);
  const Usable u = usable(s, win);
  if (u.t.size() < 10)
    throw InsufficientDataError("rate fit needs at least 10 samples with fgap above the numerical floor, got " +
                                std::to_string(u.t.size()));
  std::vector<double> x(u.t.size()), y(u.t.size());
  for (std::size_t i = 0; i < u.t.size(); ++i) {
    x[i] = power ? std::log(u.t[i]) : std::pow(u.t[i], q);
    y[i] = -u.log_gap[i];
  }
  const Line l = least_squares(x, y);
  RateFit f;
  f.exponent = l.slope;
  f.intercept = l.intercept;
  f.residual = l.rms;
  f.points = u.t.size();
  f.excluded_points = u.excluded;
  return f;
}

}  // namespace

RateFit fit_power_rate(const GapSeries& s, std::optional<Window> w) { return fit(s, w, 0.0, true); }

RateFit fit_exp_rate(const GapSeries& s, double q, std::optional<Window> w) {
  if (!(q > 0.0)) throw ConfigError("exponential rate fit needs q > 0");
  return fit(s, w, q, false);
}

int oscillation_count(const std::vector<double>& values) {
  int count = 0, last_sign = 0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double d = values[k + 1] - values[k];
    const int sign = (d > 0.0) - (d < 0.0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++count;
    last_sign = sign;
  }
  return count;
}

int oscillation_count(const Trajectory& tr) {
  std::vector<double> g;
  g.reserve(tr.samples.size());
  for (const auto& p : tr.samples) g.push_back(p.fgap);
  return oscillation_count(g);
}

}  // namespace inertia
