#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inertia/analysis.hpp"
#include "inertia/objective.hpp"

namespace inertia {

// alpha_k: a constant, or max(0, 1 - alpha/k) (0 at k = 0).
struct AlphaRule {
  enum class Kind { Constant, OneMinusAlphaOverK };
  Kind kind = Kind::Constant;
  double value = 0.0;

  static AlphaRule constant(double a) { return {Kind::Constant, a}; }
  static AlphaRule one_minus_over_k(double alpha) { return {Kind::OneMinusAlphaOverK, alpha}; }
  double at(long k) const;
};

// lambda_k = c max(k, 1)^delta; delta = 0 is the constant rule.
struct LambdaRule {
  double c = 1.0;
  double delta = 0.0;

  double at(long k) const;
};

struct IPConfig {
  AlphaRule alpha;
  LambdaRule lambda;
  long K = 100;
  Vec x0;
  std::optional<Vec> x_prev;  // the iterate before x0; defaults to x0 (no initial momentum)
  long diag_from = 20;        // sup diagnostics run over diag_from <= k <= K
};

struct Iterate {
  long k;
  Vec x;
  double fgap;  // NaN without a known minimum
};

struct IterateSequence {
  std::vector<Iterate> iterates;  // k = 0..K
  bool has_fgap = false;
  double sup_k2_fgap = 0.0;         // sup k^2 fgap_k over the diagnostic range
  double sup_k2_delta_fgap = 0.0;   // sup k^(2 + delta) fgap_k
  double fstar = 0.0;
};

// prox_{lambda f}(y). Throws ConfigError unless lambda > 0.
Vec prox_step(const Objective& obj, const Vec& y, double lambda);

// y_k = x_k + alpha_k (x_k - x_{k-1}), x_{k+1} = prox_{lambda_k f}(y_k) for k = 0..K-1.
IterateSequence inertial_proximal(const Objective& obj, const IPConfig& cfg);

// (k, fgap_k) as a rate series for bound_check and the fits.
GapSeries to_series(const IterateSequence& seq);

// t_k = 1 + sum_{i >= k} prod_{j=k}^{i} alpha_j, truncated once the product
// term drops below cutoff. Throws DivergentTailError after max_terms terms.
double t_k_series(const AlphaRule& rule, long k, double cutoff = 1e-16, long max_terms = 100'000'000);

}  // namespace inertia
