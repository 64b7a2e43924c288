#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "inertia/algorithms.hpp"
#include "inertia/analysis.hpp"
#include "inertia/certificate.hpp"
#include "inertia/conditions.hpp"
#include "inertia/dynamics.hpp"
#include "inertia/objective.hpp"

namespace inertia {

using Json = nlohmann::json;

enum class CertificateKind { None, Gamma, P };

struct CheckConfig {
  ConditionSet set = ConditionSet::SystemA;
  GridSpec grid;
  ExtraParams extra;
};

struct RateConfig {
  std::optional<std::string> trajectory;  // existing trajectory.csv; otherwise simulate inline
};

struct SweepConfig {
  std::string command = "simulate";
  // Cartesian product of grid axes, crossed with the explicit point list.
  std::vector<std::pair<std::string, std::vector<Json>>> grid;
  std::vector<Json> points;  // objects mapping key paths to values
  bool plot = false;         // write plot.gp over every point's trajectory.csv
  std::string plot_title;
};

// A validated run. Every block is parsed up front, so a typo anywhere in the
// document fails before any computation.
struct RunConfig {
  Json source;  // the merged document, echoed into summary.json
  std::optional<std::string> command;
  std::string description;

  std::string problem_name = "quad-diag";
  Objective problem;

  DynamicsSpec dynamics;
  Vec x0;
  Vec v0;
  double horizon = 100.0;
  IntegratorConfig integrator;

  CertificateKind certificate = CertificateKind::None;
  double cert_r = 1.0 / 3.0;
  double cert_m = 2.0 / 3.0;

  std::optional<RateClaim> claim;
  CheckConfig check;
  RateConfig rate;
  IPConfig ip;
  std::optional<SweepConfig> sweep;
};

// Parses and validates a document. Throws ConfigError with the offending key path.
RunConfig parse_config(const Json& doc);

// Schedule from its JSON form; a bare number is a constant.
Schedule parse_schedule(const Json& j, double t0, const std::string& path = "schedule");

// Loads a JSON file. Throws MissingInputError when it does not exist and
// ConfigError when it does not parse.
Json load_json(const std::string& path);

// Built-in named configs.
Json preset(const std::string& name);
std::vector<std::string> preset_names();

// Applies "path.to.key=value". The value is parsed as JSON when it parses,
// otherwise taken as a string. Numeric path segments index arrays.
void apply_override(Json& doc, const std::string& assignment);
void set_path(Json& doc, const std::string& path, const Json& value);

// The certificate requested by cfg, or nullopt for "none".
std::optional<Certificate> build_certificate(const RunConfig& cfg);

}  // namespace inertia
