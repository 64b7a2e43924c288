#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inertia/jet.hpp"

namespace inertia {

enum class Family { Constant, Power, AlphaOverTPower, ExpPower, Sum, Product, Table, Derived };

std::string to_string(Family f);

struct Eval {
  double value;
  double d1;
  double d2;
};

// A time-varying coefficient such as gamma(t), beta(t) or b(t).
//
// Families and their params:
//   Constant         {k}            k
//   Power            {k, p}         k t^p
//   AlphaOverTPower  {alpha, q}     alpha / t^(1-q)
//   ExpPower         {k, mu, q}     k exp(mu t^q)
//   Sum / Product    children
//   Table            knots t_i, values v_i (natural cubic spline)
//   Derived          built by the library from other schedules
//
// Schedules are immutable and cheap to copy; all evaluation is thread-safe.
class Schedule {
 public:
  class Node;

  Schedule();  // constant zero

  static Schedule constant(double k, double t0 = 0.0);
  static Schedule power(double k, double p, double t0 = 0.0);
  static Schedule alpha_over_t_power(double alpha, double q, double t0 = 0.0);
  static Schedule exp_power(double k, double mu, double q, double t0 = 0.0);
  static Schedule sum(std::vector<Schedule> terms);
  static Schedule product(std::vector<Schedule> factors);
  static Schedule table(std::vector<double> t, std::vector<double> v);
  // Arbitrary jet-valued function; log_fn (optional) gives log f for f > 0.
  static Schedule derived(std::string name, double t0, std::function<Scaled(double)> fn,
                          std::function<Jet(double)> log_fn = nullptr);

  Family family() const;
  const std::vector<double>& params() const;
  const std::vector<Schedule>& children() const;
  double t0() const;
  std::string describe() const;

  // Full Taylor jet at t. Throws DomainError outside the declared domain.
  Scaled jet(double t) const;
  // Value only; used in integrator hot loops.
  double value(double t) const;
  // Jet of log s(t) for a positive schedule, composed without overflow.
  Jet log_jet(double t) const;

  bool is_zero() const;
  // alpha when the schedule is exactly alpha/t.
  std::optional<double> alpha_over_t() const;

  // Sampled shape checks used by the p-recipe.
  bool nondecreasing_on(const std::vector<double>& grid, double rel_tol = 1e-12) const;
  bool log_concave_on(const std::vector<double>& grid, double rel_tol = 1e-12) const;

 private:
  explicit Schedule(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// (s(t), s'(t), s''(t)).
Eval eval(const Schedule& s, double t);

Schedule operator+(const Schedule& a, const Schedule& b);
Schedule operator*(const Schedule& a, const Schedule& b);
Schedule operator*(double k, const Schedule& a);

}  // namespace inertia
