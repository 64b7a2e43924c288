#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inertia/certificate.hpp"
#include "inertia/schedule.hpp"

namespace inertia {

enum class ConditionSet { SystemA, SystemB, GammaGrowth, ModelGrowth, G2G3, H1toH4, H2plus, Eq61, HrGamma };
enum class Verdict { Satisfied, Violated, Boundary };

std::string to_string(ConditionSet s);
std::string to_string(Verdict v);
ConditionSet condition_set_from_string(const std::string& name);

struct GridSpec {
  double t0 = 1.0;
  double t_end = 0.0;  // 0 means 1000 * t0
  int points = 400;
  bool log_spaced = true;
};

std::vector<double> make_grid(const GridSpec& spec);

// Parameters some sets need: (r, m) for H1toH4/H2plus, (p0, r) for Eq61,
// r for HrGamma, alpha for G2G3 when gamma is not given as alpha/t.
struct ExtraParams {
  std::optional<double> r;
  std::optional<double> m;
  std::optional<double> p0;
  std::optional<double> alpha;
};

struct ConditionSeries {
  std::string id;
  bool equality = false;    // margin is -|residual|
  bool structural = false;  // holds by construction of the certificate
  std::vector<double> margin;
  std::vector<double> normalized;  // margin / (1 + scale)
  std::vector<double> relative;    // margin / scale (0 when every term vanishes)
};

struct ConditionReport {
  ConditionSet set = ConditionSet::SystemA;
  std::vector<double> grid;
  std::vector<ConditionSeries> conditions;
  struct Worst {
    std::string condition;
    double t = 0.0;
    double margin = 0.0;
  } worst;
  Verdict verdict = Verdict::Satisfied;
  double tol_rel = 1e-9;
  double tol_margin = 0.0;  // 1e-9 * scale at the worst point

  const ConditionSeries& at(const std::string& id) const;
};

// Evaluates margin(t) = RHS - LHS for every condition of the set on the grid.
// For ModelGrowth the gamma argument is the base damping gamma0.
//
// The scale of a margin is the sum of the magnitudes of every monomial that
// went into it, so cancellation inside derivatives and products is visible.
// Verdict: violated if any margin is below -1e-9 * scale; boundary if the
// smallest relative margin among non-structural inequalities is within 1e-9
// of zero; satisfied otherwise. A relative rather than 1 + scale band keeps
// decaying margins such as 1/t^3 from reading as boundary.
ConditionReport check_conditions(ConditionSet set, const Schedule& gamma, const Schedule& beta, const Schedule& b,
                                 const Certificate* cert, const ExtraParams& extra, const std::vector<double>& grid);

ConditionReport check_conditions(ConditionSet set, const Schedule& gamma, const Schedule& beta, const Schedule& b,
                                 const Certificate* cert, const ExtraParams& extra, const GridSpec& grid);

}  // namespace inertia
