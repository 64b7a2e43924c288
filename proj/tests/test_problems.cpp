#include <doctest.h>

#include <cmath>
#include <random>

#include "inertia/errors.hpp"
#include "inertia/objective.hpp"
#include "oracles.hpp"

using namespace inertia;

namespace {

double norm(const Vec& a) {
  double s = 0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double dist(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Vec random_point(std::mt19937_64& rng, const Objective& o) {
  std::uniform_real_distribution<double> box(-2.0, 2.0), pos(0.3, 3.0);
  Vec x(o.dim);
  for (double& a : x) a = o.domain_guard ? pos(rng) : box(rng);
  return x;
}

Vec random_dir(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (double& a : v) a = u(rng);
  return v;
}

std::vector<Objective> all_problems() {
  Eigen::MatrixXd M(3, 3);
  M << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  return {make_problem("quad-diag"), make_problem("quad-rank1"), make_problem("log-barrier"),
          make_quadratic(M, Eigen::Vector3d(1.0, -2.0, 0.5))};
}

}  // namespace

TEST_CASE("quadratic examples") {
  const Objective q = make_problem("quad-diag");
  CHECK(q.f({1.0, 1.0}) == 500.5);
  REQUIRE(q.known_min);
  CHECK(*q.known_min == 0.0);
  CHECK(norm(*q.known_argmin) == 0.0);

  const Objective r = make_problem("quad-rank1");
  CHECK(r.f({1.0, 1.0}) == doctest::Approx(0.5 * 1001.0 * 1001.0));
  CHECK(r.f({1e3, -1.0}) == 0.0);
  REQUIRE(r.known_min);
  CHECK(*r.known_min == doctest::Approx(0.0).scale(1.0));

  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  const Objective u = make_quadratic(one, Eigen::VectorXd::Zero(1));
  CHECK(u.proximal({3.0}, 1.0)[0] == 1.5);

  Eigen::MatrixXd bad(2, 2);
  bad << 1, 0, 0, -1;
  CHECK_THROWS_AS(make_quadratic(bad, Eigen::VectorXd::Zero(2)), NotPSDError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(make_quadratic(asym, Eigen::VectorXd::Zero(2)), NotPSDError);
  CHECK_THROWS_AS(make_problem("quad-nothing"), ConfigError);
}

TEST_CASE("quadratic minimum only when l is in the range") {
  Eigen::MatrixXd A = Eigen::Vector2d(2.0, 0.0).asDiagonal();
  const Objective bounded = make_quadratic(A, Eigen::Vector2d(4.0, 0.0));
  REQUIRE(bounded.known_min);
  CHECK(*bounded.known_min == doctest::Approx(-4.0));
  CHECK(bounded.anchor({0.0, 7.0})[0] == doctest::Approx(2.0));
  CHECK(bounded.anchor({0.0, 7.0})[1] == doctest::Approx(7.0));
  const Objective unbounded = make_quadratic(A, Eigen::Vector2d(4.0, 1.0));
  CHECK_FALSE(unbounded.known_min);
  CHECK_THROWS_AS(unbounded.anchor({0.0, 0.0}), MissingArgminError);
}

TEST_CASE("log-barrier examples") {
  const Objective o = make_log_barrier_strongly_convex();
  CHECK(o.f({1.0, 1.0}) == 1.0);
  const Vec g = o.gradient({1.0, 1.0});
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);
  const Vec h = o.hessian_vector({1.0, 1.0}, {1.0, 0.0});
  CHECK(h[0] == 2.0);
  CHECK(h[1] == 0.0);
  CHECK_THROWS_AS(o.f({-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(o.gradient({1.0, 0.0}), DomainError);
  CHECK_FALSE(o.admissible(Vec{0.0, 1.0}));
  const Vec fd = hvp_fd(o, {1.0, 1.0}, {1.0, 0.0});
  CHECK(std::abs(fd[0] - 2.0) <= 1e-6);
  CHECK(std::abs(fd[1]) <= 1e-6);
  CHECK_THROWS_AS(hvp_fd(o, {1e-9, 1.0}, {1.0, 0.0}, 1e-3), DomainError);
}

TEST_CASE("argmin gradient vanishes") {
  for (const auto& o : all_problems()) {
    REQUIRE(o.known_argmin);
    CHECK(norm(o.gradient(*o.known_argmin)) <= 1e-10);
    CHECK(o.f(*o.known_argmin) == doctest::Approx(*o.known_min).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(11);
  for (const auto& o : all_problems()) {
    for (int rep = 0; rep < 50; ++rep) {
      const Vec x = random_point(rng, o);
      const Vec g = o.gradient(x);
      for (int i = 0; i < o.dim; ++i) {
        auto fi = [&](double s) {
          Vec y = x;
          y[i] = s;
          return o.f(y);
        };
        const double fd = oracle::derivative(fi, x[i], 1e-3 * std::max(0.1, std::abs(x[i])));
        CHECK(std::abs(fd - g[i]) <= 1e-6 * (1.0 + norm(g)));
      }
    }
  }
}

TEST_CASE("hvp is linear in v") {
  std::mt19937_64 rng(12);
  for (const auto& o : all_problems()) {
    for (int rep = 0; rep < 30; ++rep) {
      const Vec x = random_point(rng, o);
      const Vec v = random_dir(rng, o.dim), w = random_dir(rng, o.dim);
      const double a = 1.7, b = -0.4;
      Vec comb(o.dim);
      for (int i = 0; i < o.dim; ++i) comb[i] = a * v[i] + b * w[i];
      const Vec lhs = o.hessian_vector(x, comb);
      const Vec hv = o.hessian_vector(x, v), hw = o.hessian_vector(x, w);
      for (int i = 0; i < o.dim; ++i) CHECK(std::abs(lhs[i] - (a * hv[i] + b * hw[i])) <= 1e-10 * (1 + std::abs(lhs[i])));
    }
  }
}

TEST_CASE("prox optimality identity") {
  std::mt19937_64 rng(13);
  for (const auto& o : all_problems()) {
    for (double lambda : {0.1, 1.0, 7.5}) {
      for (int rep = 0; rep < 20; ++rep) {
        const Vec x = random_point(rng, o);
        const Vec p = o.proximal(x, lambda);
        const Vec g = o.gradient(p);
        for (int i = 0; i < o.dim; ++i) CHECK(std::abs(p[i] + lambda * g[i] - x[i]) <= 1e-8 * (1 + std::abs(x[i])));
      }
    }
  }
  Objective no_prox = make_problem("quad-diag");
  no_prox.prox = nullptr;
  CHECK_THROWS_AS(no_prox.proximal({1.0, 1.0}, 1.0), MissingProxError);
}

TEST_CASE("rank-one quadratic ignores directions orthogonal to a") {
  const Objective o = make_problem("quad-rank1");
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 40; ++rep) {
    const Vec x = {u(rng), u(rng)};
    const double s = u(rng);
    const Vec y = {x[0] + s * 1e3, x[1] - s};  // n = s (1e3, -1) is orthogonal to a
    const Vec gx = o.gradient(x), gy = o.gradient(y);
    for (int i = 0; i < 2; ++i) CHECK(gy[i] == doctest::Approx(gx[i]).epsilon(1e-9).scale(1e-6));

    // The anchor is the orthogonal projection onto {x1 + 1e3 x2 = 0}.
    const Vec z = o.anchor(x);
    CHECK(std::abs(z[0] + 1e3 * z[1]) <= 1e-9 * (1 + std::abs(x[0]) + 1e3 * std::abs(x[1])));
    const double c = (x[0] + 1e3 * x[1]) / (1.0 + 1e6);
    CHECK(z[0] == doctest::Approx(x[0] - c).epsilon(1e-10));
    CHECK(z[1] == doctest::Approx(x[1] - 1e3 * c).epsilon(1e-10));
  }
}

TEST_CASE("finite-difference hvp agrees with the exact hvp") {
  std::mt19937_64 rng(15);
  for (const char* name : {"quad-diag", "log-barrier"}) {
    const Objective o = make_problem(name);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const Vec x = random_point(rng, o);
      const Vec v = random_dir(rng, o.dim);
      const Vec exact = o.hessian_vector(x, v);
      const Vec fd = hvp_fd(o, x, v);
      worst = std::max(worst, dist(exact, fd) / norm(exact));
    }
    INFO(name, " worst relative error ", worst);
    CHECK(worst <= 1e-6);
  }
  const Objective q = make_problem("quad-diag");
  const Vec zero = hvp_fd(q, {0.3, 0.4}, {0.0, 0.0});
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
}
