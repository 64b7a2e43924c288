#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "inertia/schedule.hpp"

namespace inertia {

enum class Recipe { GammaNoHessian, GammaHessianAlphaOverT, PModel, PGeneral };

std::string to_string(Recipe r);

struct RecipeParams {
  double r;
  double m;
};

// Coefficients (c^2 b, theta, sigma, xi) of the energy
//   E = c^2 b (f(x) - f(z)) + theta sigma^2 / 2 |x - z + (x' + beta grad f)/sigma|^2 + xi/2 |x - z|^2
// together with the damping/rescaling schedules they were derived for.
struct Certificate {
  Schedule c2b;
  Schedule theta;
  Schedule sigma;
  Schedule xi;
  Schedule w;
  Recipe recipe = Recipe::GammaNoHessian;
  std::optional<RecipeParams> params;

  Schedule gamma;  // for PModel this is the composite gamma0 + 1/p0
  Schedule beta;
  Schedule b;

  // Condition ids ("A:v", "B:iv", ...) that the recipe satisfies by
  // construction. They are still checked for violation but never make a
  // report "boundary".
  std::set<std::string> structural;

  double t0() const { return c2b.t0(); }
};

// theta = Gamma^2, sigma = 1/Gamma, xi = 0. With beta != 0, gamma must be alpha/t
// and c^2 b = t^2 w / (alpha-1)^2 with w = b - beta' - beta/t.
Certificate derive_gamma_certificate(const Schedule& gamma, const Schedule& beta, const Schedule& b);

// theta = p^{2r} b^{-2/3}, sigma = m gamma + b'/(3b), xi = theta xi0.
// b is checked to be nondecreasing on monotone_grid (default: 400 log-spaced
// points on [t0, 1000 t0]).
Certificate derive_p_certificate(const Schedule& gamma, const Schedule& beta, const Schedule& b, double r, double m,
                                 const std::vector<double>& monotone_grid = {});

// gamma = gamma0 + 1/p0 with p0 = exp(int gamma0); theta = p0^2, sigma = 1/p0, xi = 0.
Certificate derive_model_certificate(const Schedule& gamma0, const Schedule& b = Schedule::constant(1.0));

// q = b theta beta - (theta beta^2)'/2, the weight of |grad f|^2 in the
// gradient integral estimate.
double weight_q(const Certificate& cert, const Schedule& beta, const Schedule& b, double t);
double weight_q(const Certificate& cert, double t);

// theta b sigma - (c^2 b + beta theta sigma)', the weight of f - min f in the
// value integral estimate.
double values_weight(const Certificate& cert, const Schedule& gamma, const Schedule& beta, const Schedule& b,
                     double t);
double values_weight(const Certificate& cert, double t);

// The p-recipe integrand as printed: (3 sigma - 2(r+m) gamma) w - w' - 2(1-r-m) gamma.
double upsilon_printed(const Certificate& cert, double t);

struct RecoveryResidual {
  double xi;   // |xi + (theta sigma)' + theta sigma (sigma - gamma)| / (1 + |terms|)
  double c2b;  // |c^2 b - b theta + beta theta (sigma - gamma) + (beta theta)'| / (1 + |terms|)
};

RecoveryResidual recovery_residual(const Certificate& cert, double t);

}  // namespace inertia
