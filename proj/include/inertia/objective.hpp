#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace inertia {

using Vec = std::vector<double>;
using CSpan = std::span<const double>;
using MSpan = std::span<double>;

// Oracle bundle for f. Oracles write into caller-provided buffers so the
// integrator can run without allocating; the Vec-returning helpers are for
// everything else.
struct Objective {
  std::string name;
  int dim = 0;

  std::function<double(CSpan x)> value;
  std::function<void(CSpan x, MSpan g)> grad;
  std::function<void(CSpan x, CSpan v, MSpan out)> hvp;            // optional, exact
  std::function<void(CSpan x, double lambda, MSpan out)> prox;     // optional
  std::function<bool(CSpan x)> domain_guard;                       // optional, true = admissible
  std::function<void(CSpan x, MSpan out)> project_argmin;          // optional
  std::optional<double> known_min;
  std::optional<Vec> known_argmin;

  bool admissible(CSpan x) const { return !domain_guard || domain_guard(x); }

  double f(const Vec& x) const { return value(x); }
  Vec gradient(const Vec& x) const;
  // Exact HVP when available, otherwise the central difference.
  Vec hessian_vector(const Vec& x, const Vec& v) const;
  Vec proximal(const Vec& x, double lambda) const;
  // Closest point of the argmin set when a projection exists, else known_argmin.
  Vec anchor(const Vec& x) const;
};

// f(x) = 1/2 <Ax, x> - <l, x>. Throws NotPSDError unless A is symmetric PSD.
Objective make_quadratic(const Eigen::MatrixXd& A, const Eigen::VectorXd& l, std::string name = "quad-custom");

// f(x1, x2) = 1/2 (x1^2 + x2^2) - ln(x1 x2) on the open positive quadrant.
Objective make_log_barrier_strongly_convex();

// Named problems: "quad-diag" (diag(1, 1e3)), "quad-rank1" (a a^T, a = (1, 1e3)),
// "log-barrier", and the aliases "fig2-caption" (quad-diag) and "fig2-eq" (quad-rank1).
Objective make_problem(const std::string& name);

// Default step for the central-difference HVP.
double hvp_fd_step(CSpan x, CSpan v);

// (grad(x + h v) - grad(x - h v)) / (2h). work must hold 3 * dim doubles.
// h <= 0 selects hvp_fd_step.
void hvp_fd(const Objective& obj, CSpan x, CSpan v, MSpan out, MSpan work, double h = 0.0);
Vec hvp_fd(const Objective& obj, const Vec& x, const Vec& v, double h = 0.0);

}  // namespace inertia
