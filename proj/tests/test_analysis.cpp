#include <doctest.h>

#include <cmath>
#include <numbers>

#include "inertia/analysis.hpp"
#include "inertia/certificate.hpp"
#include "inertia/errors.hpp"
#include "oracles.hpp"

using namespace inertia;

namespace {

GapSeries synthetic(double lo, double hi, int n, double (*f)(double)) {
  GapSeries s;
  s.t = oracle::logspace(lo, hi, n);
  for (double t : s.t) s.fgap.push_back(f(t));
  return s;
}

}  // namespace

TEST_CASE("check_monotone") {
  CHECK(check_monotone({2.0, 2.0, 2.0}, 0.0, 0.0).ok);
  const MonotoneResult r = check_monotone({1.0, 2.0, 1.5}, 0.0, 0.0);
  CHECK_FALSE(r.ok);
  REQUIRE(r.first_violation);
  CHECK(*r.first_violation == 1);
  CHECK(check_monotone({1.0, 1.0 + 1e-10, 1.0}, 1e-9, 0.0).ok);
  CHECK(check_monotone({1.0, 1.0 + 1e-10, 1.0}, 0.0, 1e-9).ok);
  CHECK_FALSE(check_monotone({3.0, 2.0, 1.0, 1.0 + 1e-12}, 0.0, 0.0).ok);
  CHECK(*check_monotone({3.0, 2.0, 1.0, 1.0 + 1e-12}, 0.0, 0.0).first_violation == 3);
}

TEST_CASE("bound_check on exact power data") {
  const GapSeries s = synthetic(1.0, 100.0, 200, [](double t) { return 1.0 / (t * t); });
  const RateVerdict v = bound_check(s, RateClaim::power(2.0, Window{1.0, 100.0}));
  CHECK(v.sup_product == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(v.trend_slope) <= 1e-12);
  CHECK(v.verdict == RateStatus::Bounded);
  CHECK(v.points == 200);

  const GapSeries slow = synthetic(1.0, 100.0, 200, [](double t) { return 1.0 / t; });
  const RateVerdict g = bound_check(slow, RateClaim::power(2.0, Window{1.0, 100.0}));
  CHECK(g.trend_slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.verdict == RateStatus::Growing);

  // Scaling fgap changes the sup only.
  GapSeries scaled = s;
  for (double& g2 : scaled.fgap) g2 *= 37.0;
  const RateVerdict vs = bound_check(scaled, RateClaim::power(2.0, Window{1.0, 100.0}));
  CHECK(vs.sup_product == doctest::Approx(37.0).epsilon(1e-12));
  CHECK(vs.trend_slope == doctest::Approx(v.trend_slope).scale(1.0));
  CHECK(vs.verdict == v.verdict);
}

TEST_CASE("bound_check tail rule and exponential claims") {
  // A late bump: slope stays small but the second half exceeds the first.
  GapSeries bump = synthetic(1.0, 100.0, 200, [](double t) { return (t > 95 ? 2.0 : 1.0) / (t * t); });
  const RateVerdict b = bound_check(bump, RateClaim::power(2.0, Window{1.0, 100.0}));
  CHECK(b.trend_slope <= kSlopeTol);
  CHECK(b.verdict == RateStatus::Growing);

  const GapSeries e = synthetic(1.0, 25.0, 300, [](double t) { return std::exp(-1.5 * t); });
  CHECK(bound_check(e, RateClaim::exp_power(1.0, 1.0, Window{2.5, 25.0})).verdict == RateStatus::Bounded);
  CHECK(bound_check(e, RateClaim::exp_power(2.0, 1.0, Window{2.5, 25.0})).verdict == RateStatus::Growing);

  // A denominator schedule: D = e^{2 sqrt t} evaluated in log space.
  const GapSeries r = synthetic(1.0, 100.0, 300, [](double t) { return std::exp(-2.0 * std::sqrt(t)); });
  const RateVerdict d = bound_check(r, RateClaim::schedule(Schedule::exp_power(1.0, 2.0, 0.5, 1.0), Window{10, 100}));
  CHECK(d.sup_product == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d.verdict == RateStatus::Bounded);
}

TEST_CASE("bound_check exclusions and windows") {
  GapSeries s = synthetic(1.0, 100.0, 100, [](double t) { return 1.0 / (t * t); });
  for (std::size_t i = 90; i < 100; ++i) s.fgap[i] = 0.0;
  const RateVerdict v = bound_check(s, RateClaim::power(2.0, Window{1.0, 100.0}));
  CHECK(v.excluded_points == 10);
  CHECK(v.points == 90);
  CHECK(v.verdict == RateStatus::Bounded);

  GapSeries zeros = s;
  for (double& g : zeros.fgap) g = 1e-300;
  const RateVerdict z = bound_check(zeros, RateClaim::power(2.0));
  CHECK(z.all_zero);
  CHECK(z.verdict == RateStatus::Bounded);

  CHECK_THROWS_AS(bound_check(s, RateClaim::power(2.0, Window{5.0, 5.0})), WindowError);
  CHECK_THROWS_AS(bound_check(s, RateClaim::power(2.0, Window{0.5, 50.0})), WindowError);
  CHECK_THROWS_AS(bound_check(s, RateClaim::power(2.0, Window{2.0, 200.0})), WindowError);

  const Window w = default_window(1.0, 500.0);
  CHECK(w.lo == doctest::Approx(1.0 + 0.2 * 499.0));
  CHECK(w.hi == 500.0);
  CHECK(default_window(100.0, 1000.0).lo == doctest::Approx(280.0));
}

TEST_CASE("rate fits on synthetic data") {
  const GapSeries a = synthetic(1.0, 1000.0, 100, [](double t) { return std::pow(t, -5.0 / 3.0); });
  CHECK(fit_power_rate(a, Window{1.0, 1000.0}).exponent == doctest::Approx(5.0 / 3.0).epsilon(1e-6));
  const GapSeries b = synthetic(1.0, 1000.0, 100, [](double t) { return 3.0 / (t * t); });
  const RateFit fb = fit_power_rate(b, Window{1.0, 1000.0});
  CHECK(fb.exponent == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fb.intercept == doctest::Approx(-std::log(3.0)).epsilon(1e-9));
  CHECK(fb.residual <= 1e-10);

  const GapSeries e = synthetic(1.0, 30.0, 100, [](double t) { return std::exp(-t); });
  CHECK(fit_exp_rate(e, 1.0, Window{1.0, 30.0}).exponent == doctest::Approx(1.0).epsilon(1e-6));
  const GapSeries r = synthetic(1.0, 100.0, 100, [](double t) { return std::exp(-2.0 * std::sqrt(t)); });
  CHECK(fit_exp_rate(r, 0.5, Window{1.0, 100.0}).exponent == doctest::Approx(2.0).epsilon(1e-6));

  const GapSeries few = synthetic(1.0, 10.0, 9, [](double t) { return 1.0 / t; });
  CHECK_THROWS_AS(fit_power_rate(few, Window{1.0, 10.0}), InsufficientDataError);
  CHECK_THROWS_AS(fit_exp_rate(few, 0.0, Window{1.0, 10.0}), ConfigError);
}

TEST_CASE("oscillation_count") {
  CHECK(oscillation_count(std::vector<double>{5, 4, 3, 2, 1}) == 0);
  CHECK(oscillation_count(std::vector<double>{1, 2}) == 0);
  CHECK(oscillation_count(std::vector<double>{1, 2, 2, 3, 1}) == 1);
  // cos on [0, 4 pi]: interior extrema at pi, 2 pi, 3 pi.
  std::vector<double> c;
  for (int i = 0; i <= 4000; ++i) c.push_back(std::cos(4 * std::numbers::pi * i / 4000.0 + 1e-9));
  CHECK(oscillation_count(c) == 3);
}

TEST_CASE("integrated runs") {
  const Objective f = make_problem("quad-diag");
  const DynamicsSpec avd3{Schedule::alpha_over_t_power(3.0, 0.0, 1.0), Schedule::constant(0.0, 1.0),
                          Schedule::constant(1.0, 1.0), 1.0};
  const Trajectory tr = integrate(avd3, f, {1.0, 1.0}, {0.0, 0.0}, 200.0, IntegratorConfig{});
  const RateVerdict v = bound_check(tr, RateClaim::power(2.0, Window{10.0, 200.0}));
  INFO("sup ", v.sup_product, " slope ", v.trend_slope);
  CHECK(v.verdict == RateStatus::Bounded);

  const DynamicsSpec avd4{Schedule::alpha_over_t_power(4.0, 0.0, 1.0), Schedule::constant(0.0, 1.0),
                          Schedule::constant(1.0, 1.0), 1.0};
  const Certificate cert = derive_gamma_certificate(avd4.gamma, avd4.beta, avd4.b);
  IntegratorConfig cfg;
  const Trajectory t4 = integrate(avd4, f, {1.0, 1.0}, {0.0, 0.0}, 200.0, cfg, &cert);
  std::vector<double> e;
  for (const auto& p : t4.samples) e.push_back(p.energy);
  CHECK(check_monotone(e, 10 * cfg.rtol, 10 * cfg.atol).ok);
}
