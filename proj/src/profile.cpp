#include "inertia/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inertia/errors.hpp"
#include "inertia/quadrature.hpp"

namespace inertia {

std::string to_string(H0Verdict v) {
  switch (v) {
    case H0Verdict::Converges: return "converges";
    case H0Verdict::Diverges: return "diverges";
    case H0Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

constexpr double kMaxLog = 709.78;

// (k, p) with gamma = k t^p, when the schedule is a pure power.
std::optional<std::pair<double, double>> as_power(const Schedule& s) {
  switch (s.family()) {
    case Family::Power: return std::make_pair(s.params()[0], s.params()[1]);
    case Family::AlphaOverTPower: return std::make_pair(s.params()[0], s.params()[1] - 1.0);
    default: return std::nullopt;
  }
}

std::optional<double> as_constant(const Schedule& s) {
  if (s.family() == Family::Constant) return s.params()[0];
  if (s.family() == Family::ExpPower && (s.params()[1] == 0.0 || s.params()[2] == 0.0))
    return s.params()[0] * std::exp(s.params()[1]);
  if (auto pw = as_power(s); pw && pw->second == 0.0) return pw->first;
  return std::nullopt;
}

// int_a^b gamma in closed form where the family allows it.
std::optional<double> closed_integral(const Schedule& s, double a, double b) {
  if (auto k = as_constant(s)) return *k * (b - a);
  if (auto pw = as_power(s)) {
    const auto [k, p] = *pw;
    if (p == -1.0) return k * std::log(b / a);
    const double e = p + 1.0;
    if (a > 0.0) return k * std::pow(a, e) * std::expm1(e * std::log(b / a)) / e;
    return k * (std::pow(b, e) - std::pow(a, e)) / e;
  }
  if (s.family() == Family::Sum) {
    double total = 0.0;
    for (const auto& c : s.children()) {
      auto v = closed_integral(c, a, b);
      if (!v) return std::nullopt;
      total += *v;
    }
    return total;
  }
  if (s.family() == Family::Product) {
    double scale = 1.0;
    const Schedule* rest = nullptr;
    for (const auto& c : s.children()) {
      if (auto k = as_constant(c)) {
        scale *= *k;
      } else if (!rest) {
        rest = &c;
      } else {
        return std::nullopt;
      }
    }
    if (!rest) return scale * (b - a);
    auto v = closed_integral(*rest, a, b);
    if (!v) return std::nullopt;
    return scale * *v;
  }
  return std::nullopt;
}

double gk_integral(const Schedule& s, double a, double b) {
  if (a == b) return 0.0;
  QuadResult q = integrate_gk([&](double u) { return s.value(u); }, a, b, 1e-15, 1e-14, 4000);
  if (!q.converged && q.error > 1e-10 * (1.0 + std::abs(q.value)))
    throw QuadratureError("integral of " + s.describe() + " did not converge");
  return q.value;
}

H0Verdict analytic_h0(const Schedule& g) {
  if (auto k = as_constant(g)) return *k > 0.0 ? H0Verdict::Converges : H0Verdict::Diverges;
  if (auto pw = as_power(g)) {
    const auto [k, p] = *pw;
    if (k <= 0.0) return H0Verdict::Diverges;
    const double s = p + 1.0;
    if (s > 0.0) return H0Verdict::Converges;
    if (s == 0.0) return k > 1.0 ? H0Verdict::Converges : H0Verdict::Diverges;
    return H0Verdict::Diverges;
  }
  if (g.family() == Family::ExpPower) {
    const double k = g.params()[0], mu = g.params()[1], q = g.params()[2];
    if (k <= 0.0) return H0Verdict::Diverges;
    if (mu >= 0.0 && q >= 0.0) return H0Verdict::Converges;
  }
  return H0Verdict::Unknown;
}

}  // namespace

IntegralProfile::IntegralProfile(Schedule gamma, TailRule rule, double cache_horizon)
    : gamma_(std::move(gamma)), t0_(gamma_.t0()), rule_(rule), h0_(H0Verdict::Unknown) {
  closed_form_ = closed_integral(gamma_, std::max(t0_, 1.0), std::max(t0_, 1.0) + 1.0).has_value();
  if (!closed_form_) {
    const double horizon = cache_horizon > t0_ ? cache_horizon : 1e3 * std::max(t0_, 1.0);
    std::vector<double> knots;
    if (t0_ > 0.0) {
      const int n = std::max(2, static_cast<int>(std::ceil(64 * std::log10(horizon / t0_))));
      for (int i = 0; i <= n; ++i) knots.push_back(t0_ * std::pow(horizon / t0_, static_cast<double>(i) / n));
    } else {
      for (int i = 0; i <= 256; ++i) knots.push_back(t0_ + (horizon - t0_) * i / 256.0);
    }
    knots.back() = horizon;
    double acc = 0.0;
    cache_.emplace_back(t0_, 0.0);
    try {
      for (std::size_t i = 1; i < knots.size(); ++i) {
        acc += gk_integral(gamma_, knots[i - 1], knots[i]);
        cache_.emplace_back(knots[i], acc);
      }
    } catch (const DomainError&) {
      // Table schedules end at their last knot; keep what was computed.
    }
  }

  h0_ = analytic_h0(gamma_);
  if (h0_ == H0Verdict::Unknown) {
    // Partial tails over doubling horizons, in log space.
    try {
      double a = std::max(t0_, 1.0);
      double la = log_p(a);
      std::vector<double> logs;
      for (int k = 0; k < 60; ++k) {
        const double b = 2.0 * a;
        QuadResult q = integrate_gk([&](double u) { return std::exp(-(integral(a, u))); }, a, b, 0.0, 1e-10, 400);
        logs.push_back(-la + std::log(q.value));
        la += integral(a, b);
        a = b;
        if (logs.back() < logs.front() - 745.0) {
          h0_ = H0Verdict::Converges;
          break;
        }
        if (logs.size() >= 12) {
          bool all_small = true, all_large = true;
          for (std::size_t i = logs.size() - 8; i < logs.size(); ++i) {
            const double ratio = std::exp(logs[i] - logs[i - 1]);
            all_small = all_small && ratio <= 0.8;
            all_large = all_large && ratio >= 0.98;
          }
          if (all_small) h0_ = H0Verdict::Converges;
          if (all_large) h0_ = H0Verdict::Diverges;
          if (all_small || all_large) break;
        }
      }
    } catch (const Error&) {
      h0_ = H0Verdict::Unknown;
    }
  }
}

double IntegralProfile::integral(double a, double b) const {
  if (closed_form_) return *closed_integral(gamma_, a, b);
  return gk_integral(gamma_, a, b);
}

double IntegralProfile::log_p(double t) const {
  if (t < t0_) throw DomainError("log_p: t=" + std::to_string(t) + " is before t0");
  if (closed_form_) return *closed_integral(gamma_, t0_, t);
  auto it = std::upper_bound(cache_.begin(), cache_.end(), t,
                             [](double v, const std::pair<double, double>& e) { return v < e.first; });
  const auto& base = *(it - 1);
  return base.second + gk_integral(gamma_, base.first, t);
}

double IntegralProfile::p(double t) const {
  const double l = log_p(t);
  if (l > kMaxLog) throw OverflowError("p_gamma overflows at t=" + std::to_string(t) + "; use log_p");
  return std::exp(l);
}

Jet IntegralProfile::log_p_jet(double t) const {
  const Jet g = gamma_.jet(t).to_jet();
  Jet r;
  r.c[0] = log_p(t);
  for (int k = 0; k < Jet::kOrder; ++k) r.c[k + 1] = g.c[k] / (k + 1);
  return r;
}

H0Verdict IntegralProfile::check_H0() const { return h0_; }

double IntegralProfile::big_gamma(double t) const {
  if (h0_ != H0Verdict::Converges)
    throw DivergentTailError("Gamma undefined: (H0) verdict is " + to_string(h0_) + " for " + gamma_.describe());
  if (t < t0_) throw DomainError("big_gamma: t before t0");
  if (rule_ == TailRule::Analytic) {
    if (auto k = as_constant(gamma_)) return 1.0 / *k;
    if (auto a = gamma_.alpha_over_t()) return t / (*a - 1.0);
  }
  return tail_integral(t);
}

double IntegralProfile::tail_integral(double t) const {
  if (closed_form_ && t > 0.0) {
    bool ok = false;
    const double v = tail_by_substitution(t, ok);
    if (ok) return v;
  }
  return tail_by_doubling(t);
}

// u = t/s maps [t, inf) onto (0, 1].
double IntegralProfile::tail_by_substitution(double t, bool& ok) const {
  auto f = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double u = t / s;
    if (!std::isfinite(u)) return 0.0;
    const double e = integral(t, u);
    if (e > kMaxLog) return 0.0;
    return t / (s * s) * std::exp(-e);
  };
  QuadResult q = integrate_gk(f, 0.0, 1.0, 1e-10, 1e-13, 4000);
  ok = q.converged && std::isfinite(q.value);
  return q.value;
}

double IntegralProfile::tail_by_doubling(double t) const {
  double a = t;
  double lead = 0.0;  // int_t^a gamma
  double sum = 0.0;
  double prev = -1.0;
  int decreasing = 0;
  for (int k = 0; k < 200; ++k) {
    const double b = 2.0 * std::max(a, 1.0);
    QuadResult q = integrate_gk([&](double u) { return std::exp(-(lead + integral(a, u))); }, a, b, 1e-13, 1e-12, 400);
    sum += q.value;
    lead += integral(a, b);
    a = b;
    if (prev > 0.0 && q.value < prev) {
      ++decreasing;
    } else {
      decreasing = 0;
    }
    if (decreasing >= 3 && q.value < 0.9 * prev) {
      const double rho = q.value / prev;
      const double remainder = q.value * rho / (1.0 - rho);
      if (remainder <= std::max(1e-10, 1e-12 * sum)) return sum + remainder;
    }
    if (q.value == 0.0 && prev == 0.0) return sum;
    prev = q.value;
  }
  throw QuadratureError("tail integral for Gamma did not meet its error bound at t=" + std::to_string(t));
}

Jet IntegralProfile::big_gamma_jet(double t) const {
  const Jet g = gamma_.jet(t).to_jet();
  Jet G;
  G.c[0] = big_gamma(t);
  for (int k = 0; k < Jet::kOrder; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += g.c[i] * G.c[k - i];
    if (k == 0) s -= 1.0;
    G.c[k + 1] = s / (k + 1);
  }
  return G;
}

}  // namespace inertia
