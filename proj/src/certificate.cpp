#include "inertia/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "inertia/errors.hpp"
#include "inertia/profile.hpp"

namespace inertia {

std::string to_string(Recipe r) {
  switch (r) {
    case Recipe::GammaNoHessian: return "GammaNoHessian";
    case Recipe::GammaHessianAlphaOverT: return "GammaHessianAlphaOverT";
    case Recipe::PModel: return "PModel";
    case Recipe::PGeneral: return "PGeneral";
  }
  return "unknown";
}

namespace {

double common_t0(std::initializer_list<const Schedule*> xs) {
  double t0 = -std::numeric_limits<double>::infinity();
  for (const Schedule* s : xs) t0 = std::max(t0, s->t0());
  return t0;
}

Scaled abs_scaled(const Scaled& s) { return s.sign() < 0 ? -s : s; }

double normalized_residual(std::initializer_list<Scaled> terms) {
  Scaled sum;
  Scaled big;
  for (const Scaled& x : terms) {
    sum = sum + x;
    if (big.is_zero() || ratio(abs_scaled(x), big) > 1.0) big = abs_scaled(x);
  }
  return std::abs(ratio(sum, Scaled::constant(1.0) + big));
}

void add_structural_common(Certificate& c) {
  if (c.beta.is_zero()) {
    c.structural.insert("A:vii");
    c.structural.insert("B:vii");
  }
}

// Recipes with xi = 0 and theta sigma^2 = 1.
void add_structural_gamma_like(Certificate& c) {
  for (const char* id : {"A:iii", "A:iv", "A:v", "A:vi", "A:xi_nonneg", "B:iv", "B:v", "B:vi"})
    c.structural.insert(id);
  add_structural_common(c);
}

}  // namespace

Certificate derive_gamma_certificate(const Schedule& gamma, const Schedule& beta, const Schedule& b) {
  Certificate c;
  c.gamma = gamma;
  c.beta = beta;
  c.b = b;
  const double t0 = common_t0({&gamma, &beta, &b});

  if (!beta.is_zero()) {
    auto alpha = gamma.alpha_over_t();
    if (!alpha)
      throw UnsupportedRecipeError("Hessian-damped Gamma recipe needs gamma = alpha/t; got " + gamma.describe());
    const double a = *alpha;
    if (!(a > 1.0)) throw DivergentTailError("(H0) fails for gamma = alpha/t with alpha <= 1");
    c.recipe = Recipe::GammaHessianAlphaOverT;
    auto G = [a](double t) { return Jet::variable(t) / (a - 1.0); };
    c.theta = Schedule::derived("theta=Gamma^2", t0, [G](double t) { return Scaled(G(t) * G(t)); });
    c.sigma = Schedule::derived("sigma=1/Gamma", t0, [G](double t) { return Scaled(1.0 / G(t)); });
    c.xi = Schedule::derived("xi=0", t0, [](double) { return Scaled(); });
    c.w = Schedule::derived("w=b-beta'-beta/t", t0, [beta, b](double t) {
      const Scaled be = beta.jet(t);
      return b.jet(t) - be.derivative() - be / Scaled(Jet::variable(t));
    });
    Schedule w = c.w;
    c.c2b = Schedule::derived("c2b=t^2 w/(alpha-1)^2", t0, [w, a](double t) {
      const Jet tt = Jet::variable(t);
      return Scaled(tt * tt / ((a - 1.0) * (a - 1.0))) * w.jet(t);
    });
    add_structural_gamma_like(c);
    return c;
  }

  auto prof = std::make_shared<IntegralProfile>(gamma);
  if (prof->check_H0() != H0Verdict::Converges)
    throw DivergentTailError("Gamma recipe needs (H0); verdict is " + to_string(prof->check_H0()));
  c.recipe = Recipe::GammaNoHessian;
  c.theta = Schedule::derived("theta=Gamma^2", t0, [prof](double t) {
    const Jet G = prof->big_gamma_jet(t);
    return Scaled(G * G);
  });
  c.sigma = Schedule::derived("sigma=1/Gamma", t0, [prof](double t) { return Scaled(1.0 / prof->big_gamma_jet(t)); });
  c.xi = Schedule::derived("xi=0", t0, [](double) { return Scaled(); });
  c.w = b;
  c.c2b = Schedule::derived("c2b=Gamma^2 b", t0, [prof, b](double t) {
    const Jet G = prof->big_gamma_jet(t);
    return Scaled(G * G) * b.jet(t);
  });
  add_structural_gamma_like(c);
  return c;
}

Certificate derive_p_certificate(const Schedule& gamma, const Schedule& beta, const Schedule& b, double r, double m,
                                 const std::vector<double>& monotone_grid) {
  constexpr double eps = 1e-12;
  if (!(r > 0.0 && r <= 1.0 / 3.0 + eps && m >= 2.0 * r - eps && m <= 1.0 - r + eps))
    throw ParamError("p-recipe needs 0 < r <= 1/3 and 2r <= m <= 1-r; got r=" + std::to_string(r) +
                     ", m=" + std::to_string(m));
  const double t0 = common_t0({&gamma, &beta, &b});
  std::vector<double> grid = monotone_grid;
  if (grid.empty()) {
    const double lo = t0 > 0.0 ? t0 : 1.0;
    for (int i = 0; i < 400; ++i) grid.push_back(lo * std::pow(1e3, i / 399.0));
  }
  if (!b.nondecreasing_on(grid)) throw NonmonotoneBError("p-recipe needs b nondecreasing; " + b.describe());

  Certificate c;
  c.recipe = Recipe::PGeneral;
  c.params = RecipeParams{r, m};
  c.gamma = gamma;
  c.beta = beta;
  c.b = b;

  auto prof = std::make_shared<IntegralProfile>(gamma);
  auto log_theta = [prof, b, r](double t) { return prof->log_p_jet(t) * (2.0 * r) - b.log_jet(t) * (2.0 / 3.0); };
  auto sigma = [gamma, b, m](double t) { return gamma.jet(t).to_jet() * m + b.log_jet(t).derivative() / 3.0; };
  auto xi0 = [gamma, sigma, r, m](double t) {
    const Jet s = sigma(t);
    return ((1.0 - 2.0 * (r + m)) * gamma.jet(t).to_jet() + s) * s - s.derivative();
  };

  c.theta = Schedule::derived("theta=p^{2r} b^{-2/3}", t0, [log_theta](double t) { return exp_scaled(log_theta(t)); },
                              log_theta);
  c.sigma = Schedule::derived("sigma=m gamma+b'/(3b)", t0, [sigma](double t) { return Scaled(sigma(t)); });
  Schedule theta = c.theta;
  c.xi = Schedule::derived("xi=theta xi0", t0, [theta, xi0](double t) { return theta.jet(t) * Scaled(xi0(t)); });
  c.w = Schedule::derived("w=b-beta'+beta sigma+(1-2r-2m) gamma beta", t0, [gamma, beta, b, sigma, r, m](double t) {
    const Jet be = beta.jet(t).to_jet();
    const Jet hess = -be.derivative() + be * sigma(t) + (1.0 - 2.0 * r - 2.0 * m) * gamma.jet(t).to_jet() * be;
    return b.jet(t) + Scaled(hess);
  });
  Schedule w = c.w;
  c.c2b = Schedule::derived("c2b=theta w", t0, [theta, w](double t) { return theta.jet(t) * w.jet(t); });

  c.structural.insert("A:iii");
  c.structural.insert("A:iv");
  if (std::abs(m - (1.0 - r)) <= eps) {
    c.structural.insert("A:vi");
    c.structural.insert("B:vi");
  }
  if (beta.is_zero() && std::abs(m - 2.0 * r) <= eps) {
    c.structural.insert("A:ii");
    c.structural.insert("B:ii");
  }
  add_structural_common(c);
  return c;
}

Certificate derive_model_certificate(const Schedule& gamma0, const Schedule& b) {
  Certificate c;
  c.recipe = Recipe::PModel;
  const double t0 = common_t0({&gamma0, &b});
  auto prof = std::make_shared<IntegralProfile>(gamma0);
  c.theta = Schedule::derived("theta=p0^2", t0, [prof](double t) { return exp_scaled(prof->log_p_jet(t) * 2.0); },
                              [prof](double t) { return prof->log_p_jet(t) * 2.0; });
  c.sigma = Schedule::derived("sigma=1/p0", t0, [prof](double t) { return exp_scaled(-prof->log_p_jet(t)); },
                              [prof](double t) { return -prof->log_p_jet(t); });
  c.xi = Schedule::derived("xi=0", t0, [](double) { return Scaled(); });
  c.w = b;
  Schedule theta = c.theta;
  c.c2b = Schedule::derived("c2b=p0^2 b", t0, [theta, b](double t) { return theta.jet(t) * b.jet(t); });
  c.gamma = Schedule::sum({gamma0, c.sigma});
  c.beta = Schedule::constant(0.0, t0);
  c.b = b;
  add_structural_gamma_like(c);
  return c;
}

double weight_q(const Certificate& cert, const Schedule& beta, const Schedule& b, double t) {
  if (beta.is_zero()) return 0.0;
  const Scaled th = cert.theta.jet(t);
  const Scaled be = beta.jet(t);
  return (b.jet(t) * th * be - (th * be * be).derivative() * 0.5).value();
}

double weight_q(const Certificate& cert, double t) { return weight_q(cert, cert.beta, cert.b, t); }

double values_weight(const Certificate& cert, const Schedule& /*gamma*/, const Schedule& beta, const Schedule& b,
                     double t) {
  const Scaled th = cert.theta.jet(t);
  const Scaled si = cert.sigma.jet(t);
  const Scaled be = beta.jet(t);
  return (th * b.jet(t) * si - (cert.c2b.jet(t) + be * th * si).derivative()).value();
}

double values_weight(const Certificate& cert, double t) { return values_weight(cert, cert.gamma, cert.beta, cert.b, t); }

double upsilon_printed(const Certificate& cert, double t) {
  if (cert.recipe != Recipe::PGeneral || !cert.params)
    throw UnsupportedRecipeError("the printed integrand is defined for the p-recipe only");
  const double r = cert.params->r, m = cert.params->m;
  const Jet s = cert.sigma.jet(t).to_jet();
  const Jet g = cert.gamma.jet(t).to_jet();
  const Scaled w = cert.w.jet(t);
  const Scaled v = Scaled(3.0 * s - 2.0 * (r + m) * g) * w - w.derivative() + Scaled(-2.0 * (1.0 - r - m) * g);
  return v.value();
}

RecoveryResidual recovery_residual(const Certificate& cert, double t) {
  const Scaled th = cert.theta.jet(t);
  const Scaled si = cert.sigma.jet(t);
  const Scaled g = cert.gamma.jet(t);
  const Scaled be = cert.beta.jet(t);
  const Scaled bb = cert.b.jet(t);
  const Scaled ts = th * si;
  RecoveryResidual r{};
  r.xi = normalized_residual({cert.xi.jet(t), ts.derivative(), ts * si, -(ts * g)});
  r.c2b = normalized_residual({cert.c2b.jet(t), -(bb * th), be * th * si, -(be * th * g), (be * th).derivative()});
  return r;
}

}  // namespace inertia
