#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "inertia/schedule.hpp"

namespace inertia {

enum class TailRule { Analytic, TruncatedQuadrature };
enum class H0Verdict { Converges, Diverges, Unknown };

std::string to_string(H0Verdict v);

// The accumulated damping L(t) = int_{t0}^t gamma, with p = exp(L) and
// Gamma(t) = p(t) int_t^inf 1/p.
//
// Closed forms are used for the constant, power and alpha/t^(1-q) families
// (and sums of them). Other families integrate with Gauss-Kronrod from a
// cache of partial integrals filled at construction.
class IntegralProfile {
 public:
  explicit IntegralProfile(Schedule gamma, TailRule rule = TailRule::Analytic,
                           double cache_horizon = 0.0);

  const Schedule& base() const { return gamma_; }
  double t0() const { return t0_; }
  TailRule tail_rule() const { return rule_; }
  const std::vector<std::pair<double, double>>& cache() const { return cache_; }
  bool closed_form() const { return closed_form_; }

  double log_p(double t) const;
  // exp(log_p); OverflowError when not representable.
  double p(double t) const;
  // Jet of log p at t: value from the integral, derivatives from gamma.
  Jet log_p_jet(double t) const;

  H0Verdict check_H0() const;
  // Throws DivergentTailError unless check_H0() converges.
  double big_gamma(double t) const;
  // Taylor jet of Gamma from its value and Gamma' = gamma Gamma - 1.
  Jet big_gamma_jet(double t) const;

 private:
  double integral(double a, double b) const;
  double tail_integral(double t) const;
  double tail_by_substitution(double t, bool& ok) const;
  double tail_by_doubling(double t) const;

  Schedule gamma_;
  double t0_;
  TailRule rule_;
  bool closed_form_;
  std::vector<std::pair<double, double>> cache_;
  H0Verdict h0_;
};

// Convenience wrappers with the names used throughout the docs.
inline double p_gamma(const IntegralProfile& prof, double t) { return prof.p(t); }
inline double log_p_gamma(const IntegralProfile& prof, double t) { return prof.log_p(t); }
inline double big_gamma(const IntegralProfile& prof, double t) { return prof.big_gamma(t); }
inline H0Verdict check_H0(const IntegralProfile& prof) { return prof.check_H0(); }

}  // namespace inertia
