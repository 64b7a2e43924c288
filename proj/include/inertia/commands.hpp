#pragma once

#include <filesystem>
#include <string>

#include "inertia/config.hpp"

namespace inertia {

// Process exit codes; part of the tested interface.
namespace exit_code {
inline constexpr int kOk = 0;            // completed / satisfied / bounded
inline constexpr int kInternal = 1;      // unexpected failure
inline constexpr int kConfig = 2;        // configuration or parameter error
inline constexpr int kEarlyStop = 3;     // integrator stopped before the horizon
inline constexpr int kViolated = 4;      // condition violated / rate not bounded
inline constexpr int kBoundary = 5;      // condition holds with equality
inline constexpr int kMissingInput = 6;  // an input file does not exist
}  // namespace exit_code

struct CommandResult {
  int exit = exit_code::kOk;
  Json summary;  // also written to <out>/summary.json
};

// Runs simulate, check, rate, ip or sweep on the document, writing artifacts
// under out. Never throws for run-level failures: they map to exit codes and
// summary.json records status and error. jobs bounds sweep concurrency.
CommandResult run_command(const std::string& command, const Json& doc, const std::filesystem::path& out, int jobs = 1);

// "%.17g" with fixed spellings for non-finite values.
std::string format_number(double x);

// Writes the trajectory CSV: t, x_i, v_i, fgap, grad_norm_sq, energy, int_values, int_grads.
void write_trajectory_csv(const Trajectory& tr, const std::filesystem::path& file);

}  // namespace inertia
