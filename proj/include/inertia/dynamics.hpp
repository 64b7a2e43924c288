#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inertia/certificate.hpp"
#include "inertia/objective.hpp"
#include "inertia/schedule.hpp"

namespace inertia {

// x'' + gamma(t) x' + beta(t) Hess f(x) x' + b(t) grad f(x) = 0.
struct DynamicsSpec {
  Schedule gamma;
  Schedule beta;
  Schedule b;
  double t0 = 1.0;
};

struct IntegratorConfig {
  double rtol = 1e-9;
  double atol = 1e-9;
  double hmin = 1e-14;
  double hmax = std::numeric_limits<double>::infinity();
  std::int64_t max_steps = 500'000'000;
  // Explicit checkpoint times; when empty, checkpoints are log-spaced at
  // per_decade points per decade (t0 > 0) or linear_points evenly spaced.
  std::vector<double> checkpoint_grid;
  int per_decade = 200;
  int linear_points = 1000;
  // Cap h by stability_factor / sqrt(b L_est) from a running curvature estimate.
  bool curvature_cap = true;
  double stability_factor = 2.5;
};

enum class Status { Completed, StepFloorHit, MaxStepsHit, DomainRejected };

std::string to_string(Status s);

struct Sample {
  double t = 0.0;
  Vec x;
  Vec v;
  double f = 0.0;
  double fgap = 0.0;
  double grad_norm_sq = 0.0;
  double energy = std::numeric_limits<double>::quiet_NaN();
  double int_values = 0.0;  // running integral of values_weight * fgap
  double int_grads = 0.0;   // running integral of q * |grad f|^2
};

struct Trajectory {
  std::vector<Sample> samples;
  double integral_values = 0.0;
  double integral_grads = 0.0;
  Status status = Status::Completed;
  std::string message;
  std::int64_t steps = 0;
  std::int64_t rejected = 0;
  std::int64_t domain_rejections = 0;
  // Reference value subtracted to form fgap: known_min, or the best observed
  // f minus fstar_margin when the objective has no known minimum.
  double fstar = 0.0;
  bool fstar_observed = false;
  double fstar_margin = 0.0;
  double e0 = std::numeric_limits<double>::quiet_NaN();  // E(t0) when a certificate is attached

  double t_end() const { return samples.empty() ? 0.0 : samples.back().t; }
};

// First-order right-hand side: dx = v, dv = -gamma v - beta H v - b grad.
std::pair<Vec, Vec> rhs(const DynamicsSpec& spec, const Objective& obj, double t, const Vec& x, const Vec& v);

// E = c2b (f(x) - f(z)) + theta sigma^2 / 2 |x - z + (v + beta grad f(x)) / sigma|^2 + xi / 2 |x - z|^2.
double energy(const Certificate& cert, const DynamicsSpec& spec, const Objective& obj, const Vec& z, double t,
              const Vec& x, const Vec& v);

// Dormand-Prince 5(4) with PI step control and dense output at checkpoints.
// With a certificate the energy and both integral estimates are recorded;
// z defaults to the objective's anchor for x0.
Trajectory integrate(const DynamicsSpec& spec, const Objective& obj, const Vec& x0, const Vec& v0, double horizon,
                     const IntegratorConfig& cfg, const Certificate* cert = nullptr, const Vec* z = nullptr);

// Checkpoint times for [t0, horizon] under cfg.
std::vector<double> checkpoint_times(double t0, double horizon, const IntegratorConfig& cfg);

}  // namespace inertia
