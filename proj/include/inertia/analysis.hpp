#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "inertia/dynamics.hpp"
#include "inertia/schedule.hpp"

namespace inertia {

// Sampled value gap, the input of every rate operation. Trajectories and
// iterate sequences convert to it.
struct GapSeries {
  std::vector<double> t;
  std::vector<double> fgap;
  double fstar = 0.0;  // sets the numerical-zero floor 100 eps (1 + |fstar|)

  static GapSeries from(const Trajectory& tr);
  double floor() const;
};

struct MonotoneResult {
  bool ok = true;
  std::optional<std::size_t> first_violation;  // index k + 1 of the first failing pair
};

// True iff value[k+1] <= value[k] (1 + eps_rel) + eps_abs for all k.
MonotoneResult check_monotone(const std::vector<double>& values, double eps_rel, double eps_abs);

struct Window {
  double lo;
  double hi;
};

// Default window: [max(T/10, t0 + 0.2 (T - t0)), T] for samples on [t0, T].
Window default_window(double t0, double t_end);

// f - min = O(1/D(t)) with D given as a power, an exponential of a power, or
// an arbitrary positive schedule. log D is used throughout so large D cannot
// overflow.
struct RateClaim {
  enum class Kind { Power, ExpPower, Denominator };
  Kind kind = Kind::Power;
  double s = 0.0;  // Power: D = t^s
  double c = 0.0;  // ExpPower: D = exp(c t^q)
  double q = 1.0;
  Schedule denominator;  // Denominator
  std::optional<Window> window;

  static RateClaim power(double s, std::optional<Window> w = std::nullopt);
  static RateClaim exp_power(double c, double q, std::optional<Window> w = std::nullopt);
  static RateClaim schedule(Schedule d, std::optional<Window> w = std::nullopt);

  double log_denominator(double t) const;
  std::string describe() const;
};

enum class RateStatus { Bounded, Growing, Inconclusive };

std::string to_string(RateStatus s);

struct RateVerdict {
  std::string claim;
  Window window{0.0, 0.0};
  double sup_product = 0.0;  // sup over the window of D fgap
  double log_sup_product = 0.0;
  double sup_first_half = 0.0;
  double sup_second_half = 0.0;
  double trend_slope = 0.0;  // d log(D fgap) / d log t, least squares
  double fitted_exponent = 0.0;  // filled by the fit operations, NaN otherwise
  RateStatus verdict = RateStatus::Inconclusive;
  std::size_t points = 0;
  std::size_t excluded_points = 0;  // fgap at or below the numerical floor
  bool all_zero = false;            // every point excluded: vacuously bounded
};

constexpr double kSlopeTol = 0.05;
constexpr double kTailRatio = 1.25;

// Bounded iff trend_slope <= 0.05 and the second half of the window does not
// exceed the first half by more than 25% (the sup is early or the tail is flat).
RateVerdict bound_check(const GapSeries& s, const RateClaim& claim);
RateVerdict bound_check(const Trajectory& tr, const RateClaim& claim);

struct RateFit {
  double exponent = 0.0;   // s for power fits, c for exponential fits
  double intercept = 0.0;  // of the regression line in the fitted coordinates
  double residual = 0.0;   // root mean square residual
  std::size_t points = 0;
  std::size_t excluded_points = 0;
};

// -slope of log fgap against log t. Needs at least 10 usable points.
RateFit fit_power_rate(const GapSeries& s, std::optional<Window> w = std::nullopt);
// Slope of -log fgap against t^q.
RateFit fit_exp_rate(const GapSeries& s, double q, std::optional<Window> w = std::nullopt);

// Sign changes of the discrete difference of the series; zero differences are
// skipped. Fewer than 3 samples count as 0.
int oscillation_count(const std::vector<double>& values);
int oscillation_count(const Trajectory& tr);

}  // namespace inertia
