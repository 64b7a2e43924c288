#include "inertia/objective.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "inertia/errors.hpp"

namespace inertia {

Vec Objective::gradient(const Vec& x) const {
  Vec g(dim);
  grad(x, g);
  return g;
}

Vec Objective::hessian_vector(const Vec& x, const Vec& v) const {
  if (hvp) {
    Vec out(dim);
    hvp(x, v, out);
    return out;
  }
  return hvp_fd(*this, x, v);
}

Vec Objective::proximal(const Vec& x, double lambda) const {
  if (!prox) throw MissingProxError(name + " has no prox oracle");
  Vec out(dim);
  prox(x, lambda, out);
  return out;
}

Vec Objective::anchor(const Vec& x) const {
  if (project_argmin) {
    Vec out(dim);
    project_argmin(x, out);
    return out;
  }
  if (known_argmin) return *known_argmin;
  throw MissingArgminError(name + " has no known minimizer");
}

namespace {

struct QuadData {
  Eigen::MatrixXd A;
  Eigen::VectorXd l;
  Eigen::VectorXd diag;  // set when A is diagonal
  bool is_diag = false;
  Eigen::VectorXd xstar;
  Eigen::MatrixXd null_basis;  // orthonormal basis of ker A
};

void apply(const QuadData& q, CSpan x, MSpan out) {
  const int n = static_cast<int>(x.size());
  if (q.is_diag) {
    for (int i = 0; i < n; ++i) out[i] = q.diag[i] * x[i];
    return;
  }
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += q.A(i, j) * x[j];
    out[i] = s;
  }
}

}  // namespace

Objective make_quadratic(const Eigen::MatrixXd& A, const Eigen::VectorXd& l, std::string name) {
  const int n = static_cast<int>(A.rows());
  if (n == 0 || A.cols() != n || l.size() != n) throw ConfigError("quadratic needs a square A matching l");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw NotPSDError("A is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double tol = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -tol)
    throw NotPSDError("A has a negative eigenvalue " + std::to_string(ev.minCoeff()));

  auto q = std::make_shared<QuadData>();
  q->A = A;
  q->l = l;
  q->is_diag = A.isDiagonal();
  q->diag = A.diagonal();

  Objective o;
  o.name = std::move(name);
  o.dim = n;
  o.value = [q](CSpan x) {
    const int n = static_cast<int>(x.size());
    double quad = 0.0, lin = 0.0;
    if (q->is_diag) {
      for (int i = 0; i < n; ++i) quad += q->diag[i] * x[i] * x[i];
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) quad += x[i] * q->A(i, j) * x[j];
    }
    for (int i = 0; i < n; ++i) lin += q->l[i] * x[i];
    return 0.5 * quad - lin;
  };
  if (q->is_diag) {
    o.grad = [d = Vec(q->diag.data(), q->diag.data() + n), l = Vec(l.data(), l.data() + n)](CSpan x, MSpan g) {
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = d[i] * x[i] - l[i];
    };
  } else {
    o.grad = [q](CSpan x, MSpan g) {
      apply(*q, x, g);
      for (std::size_t i = 0; i < x.size(); ++i) g[i] -= q->l[i];
    };
  }
  o.hvp = [q](CSpan, CSpan v, MSpan out) { apply(*q, v, out); };
  o.prox = [q](CSpan x, double lambda, MSpan out) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = x[i] + lambda * q->l[i];
    Eigen::VectorXd sol;
    if (q->is_diag) {
      sol = rhs.array() / (1.0 + lambda * q->diag.array());
    } else {
      const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) + lambda * q->A;
      sol = M.ldlt().solve(rhs);
    }
    for (int i = 0; i < n; ++i) out[i] = sol[i];
  };

  // Minimum via the pseudo-inverse; it exists iff l lies in range(A).
  Eigen::VectorXd inv = ev;
  int null_dim = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(ev[i]) > tol) {
      inv[i] = 1.0 / ev[i];
    } else {
      inv[i] = 0.0;
      ++null_dim;
    }
  }
  const Eigen::MatrixXd V = es.eigenvectors();
  const Eigen::VectorXd xstar = V * inv.asDiagonal() * V.transpose() * l;
  if ((A * xstar - l).norm() <= 1e-10 * (1.0 + l.norm()) * scale) {
    q->xstar = xstar;
    o.known_min = -0.5 * l.dot(xstar);
    o.known_argmin = Vec(xstar.data(), xstar.data() + n);
    if (null_dim > 0) {
      q->null_basis.resize(n, null_dim);
      int k = 0;
      for (int i = 0; i < n; ++i)
        if (std::abs(ev[i]) <= tol) q->null_basis.col(k++) = V.col(i);
      o.project_argmin = [q](CSpan x, MSpan out) {
        const int n = static_cast<int>(x.size());
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) d[i] = x[i] - q->xstar[i];
        const Eigen::VectorXd p = q->xstar + q->null_basis * (q->null_basis.transpose() * d);
        for (int i = 0; i < n; ++i) out[i] = p[i];
      };
    }
  }
  return o;
}

Objective make_log_barrier_strongly_convex() {
  auto guard = [](CSpan x) { return x[0] > 0.0 && x[1] > 0.0; };
  auto check = [guard](CSpan x) {
    if (!guard(x)) throw DomainError("log-barrier evaluated outside x1 > 0, x2 > 0");
  };
  Objective o;
  o.name = "log-barrier";
  o.dim = 2;
  o.domain_guard = guard;
  o.value = [check](CSpan x) {
    check(x);
    return 0.5 * (x[0] * x[0] + x[1] * x[1]) - std::log(x[0] * x[1]);
  };
  o.grad = [check](CSpan x, MSpan g) {
    check(x);
    g[0] = x[0] - 1.0 / x[0];
    g[1] = x[1] - 1.0 / x[1];
  };
  o.hvp = [check](CSpan x, CSpan v, MSpan out) {
    check(x);
    out[0] = (1.0 + 1.0 / (x[0] * x[0])) * v[0];
    out[1] = (1.0 + 1.0 / (x[1] * x[1])) * v[1];
  };
  // Per coordinate: (1 + lambda) p^2 - y p - lambda = 0, positive root.
  o.prox = [](CSpan y, double lambda, MSpan out) {
    for (int i = 0; i < 2; ++i)
      out[i] = (y[i] + std::sqrt(y[i] * y[i] + 4.0 * lambda * (lambda + 1.0))) / (2.0 * (lambda + 1.0));
  };
  o.known_min = 1.0;
  o.known_argmin = Vec{1.0, 1.0};
  return o;
}

Objective make_problem(const std::string& name) {
  // The two readings of the oscillation figure's test function.
  if (name == "fig2-caption") return make_problem("quad-diag");
  if (name == "fig2-eq") return make_problem("quad-rank1");
  if (name == "quad-diag") {
    Eigen::MatrixXd A = Eigen::Vector2d(1.0, 1e3).asDiagonal();
    return make_quadratic(A, Eigen::VectorXd::Zero(2), name);
  }
  if (name == "quad-rank1") {
    const Eigen::Vector2d a(1.0, 1e3);
    return make_quadratic(a * a.transpose(), Eigen::VectorXd::Zero(2), name);
  }
  if (name == "log-barrier") return make_log_barrier_strongly_convex();
  throw ConfigError("unknown problem '" + name + "'");
}

double hvp_fd_step(CSpan x, CSpan v) {
  double nx = 0.0, nv = 0.0;
  for (double a : x) nx += a * a;
  for (double a : v) nv += a * a;
  const double eps = std::numeric_limits<double>::epsilon();
  return std::sqrt(eps) * (1.0 + std::sqrt(nx)) / std::max(std::sqrt(nv), eps);
}

void hvp_fd(const Objective& obj, CSpan x, CSpan v, MSpan out, MSpan work, double h) {
  const std::size_t n = x.size();
  bool zero = true;
  for (double a : v) zero = zero && a == 0.0;
  if (zero) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    return;
  }
  if (!(h > 0.0)) h = hvp_fd_step(x, v);
  MSpan xp = work.subspan(0, n), gp = work.subspan(n, n), gm = work.subspan(2 * n, n);
  for (std::size_t i = 0; i < n; ++i) xp[i] = x[i] + h * v[i];
  if (!obj.admissible(xp)) throw DomainError("hvp_fd: x + h v leaves the domain");
  obj.grad(xp, gp);
  for (std::size_t i = 0; i < n; ++i) xp[i] = x[i] - h * v[i];
  if (!obj.admissible(xp)) throw DomainError("hvp_fd: x - h v leaves the domain");
  obj.grad(xp, gm);
  for (std::size_t i = 0; i < n; ++i) out[i] = (gp[i] - gm[i]) / (2.0 * h);
}

Vec hvp_fd(const Objective& obj, const Vec& x, const Vec& v, double h) {
  Vec out(x.size()), work(3 * x.size());
  hvp_fd(obj, x, v, out, work, h);
  return out;
}

}  // namespace inertia
