#pragma once

#include <functional>

namespace inertia {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Stops when the summed
// error estimate is below max(abs_tol, rel_tol*|value|) or the interval budget
// is spent (converged = false).
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, int max_intervals = 2000);

}  // namespace inertia
