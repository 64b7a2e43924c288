#include "inertia/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "inertia/errors.hpp"

namespace inertia {

double AlphaRule::at(long k) const {
  if (kind == Kind::Constant) return value;
  if (k <= 0) return 0.0;
  return std::max(0.0, 1.0 - value / static_cast<double>(k));
}

double LambdaRule::at(long k) const {
  if (delta == 0.0) return c;
  return c * std::pow(static_cast<double>(std::max(k, 1L)), delta);
}

Vec prox_step(const Objective& obj, const Vec& y, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("prox needs lambda > 0");
  return obj.proximal(y, lambda);
}

IterateSequence inertial_proximal(const Objective& obj, const IPConfig& cfg) {
  if (!obj.prox) throw MissingProxError(obj.name + " has no prox oracle");
  if (cfg.K < 0) throw ConfigError("K must be nonnegative");
  if (static_cast<int>(cfg.x0.size()) != obj.dim) throw ConfigError("x0 dimension does not match the objective");
  if (cfg.x_prev && static_cast<int>(cfg.x_prev->size()) != obj.dim)
    throw ConfigError("x_prev dimension does not match the objective");
  if (cfg.alpha.kind == AlphaRule::Kind::Constant && cfg.alpha.value < 0.0)
    throw ConfigError("alpha_k must be nonnegative");
  if (!(cfg.lambda.c > 0.0)) throw ConfigError("lambda_k must be positive");

  IterateSequence seq;
  seq.has_fgap = obj.known_min.has_value();
  seq.fstar = seq.has_fgap ? *obj.known_min : 0.0;
  const int n = obj.dim;
  Vec prev = cfg.x_prev ? *cfg.x_prev : cfg.x0;
  Vec x = cfg.x0, y(n), next(n);
  auto push = [&](long k, const Vec& p) {
    // Floored at 0: roundoff can put f a few ulps below the minimum.
    const double gap = seq.has_fgap ? std::max(0.0, obj.f(p) - seq.fstar) : std::numeric_limits<double>::quiet_NaN();
    seq.iterates.push_back({k, p, gap});
    if (seq.has_fgap && k >= cfg.diag_from && k >= 1) {
      const double kd = static_cast<double>(k);
      seq.sup_k2_fgap = std::max(seq.sup_k2_fgap, kd * kd * gap);
      seq.sup_k2_delta_fgap = std::max(seq.sup_k2_delta_fgap, std::pow(kd, 2.0 + cfg.lambda.delta) * gap);
    }
  };
  seq.iterates.reserve(cfg.K + 1);
  push(0, x);
  for (long k = 0; k < cfg.K; ++k) {
    const double a = cfg.alpha.at(k);
    for (int i = 0; i < n; ++i) y[i] = x[i] + a * (x[i] - prev[i]);
    obj.prox(y, cfg.lambda.at(k), next);
    prev.swap(x);
    x.swap(next);
    push(k + 1, x);
  }
  return seq;
}

GapSeries to_series(const IterateSequence& seq) {
  GapSeries s;
  s.fstar = seq.fstar;
  for (const auto& it : seq.iterates) {
    if (it.k < 1) continue;  // log k needs k >= 1
    s.t.push_back(static_cast<double>(it.k));
    s.fgap.push_back(it.fgap);
  }
  return s;
}

double t_k_series(const AlphaRule& rule, long k, double cutoff, long max_terms) {
  double sum = 1.0, prod = 1.0;
  for (long i = k; i < k + max_terms; ++i) {
    prod *= rule.at(i);
    if (prod < cutoff) return sum + prod;
    sum += prod;
  }
  throw DivergentTailError("t_k series did not fall below the cutoff within max_terms");
}

}  // namespace inertia
