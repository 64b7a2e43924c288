// inertia-lab: config-driven runs of the damped inertial dynamics and the
// inertial proximal algorithm. See README.md for the config schema.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "inertia/commands.hpp"
#include "inertia/errors.hpp"

using namespace inertia;

int main(int argc, char** argv) {
  CLI::App app{"inertia-lab: simulate, check, rate, ip and sweep runs driven by a JSON config"};
  std::string command, config_path, preset_name, out_dir = "inertia-lab-out";
  std::vector<std::string> sets;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool list = false;

  app.add_option("command", command, "simulate | check | rate | ip | sweep")
      ->check(CLI::IsMember({"simulate", "check", "rate", "ip", "sweep"}));
  app.add_option("--config,-c", config_path, "JSON config file (merged over the preset, if any)");
  app.add_option("--preset,-p", preset_name, "built-in config to start from");
  app.add_option("--set,-s", sets, "override: path.to.key=value (value parsed as JSON when possible)");
  app.add_option("--out,-o", out_dir, "output directory");
  app.add_option("--jobs,-j", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
  app.add_flag("--list-presets", list, "print the preset names and exit");
  app.footer("Exit codes: 0 ok/satisfied/bounded, 2 config error, 3 early stop, 4 violated/growing, "
             "5 boundary, 6 missing input file.\nINERTIA_LAB_SEED is reserved for future stochastic features and "
             "is currently ignored.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::kOk : exit_code::kConfig;
  }

  if (list) {
    for (const auto& n : preset_names()) std::cout << n << "\n";
    return exit_code::kOk;
  }
  if (command.empty()) {
    std::cerr << "inertia-lab: a command is required (simulate, check, rate, ip, sweep)\n";
    return exit_code::kConfig;
  }
  if (config_path.empty() && preset_name.empty()) {
    std::cerr << "inertia-lab: give --config and/or --preset\n";
    return exit_code::kConfig;
  }

  // Assemble the document; failures here still leave a summary.json in --out.
  Json doc = Json::object();
  int code = exit_code::kOk;
  std::string error;
  try {
    if (!preset_name.empty()) doc = preset(preset_name);
    if (!config_path.empty()) doc.merge_patch(load_json(config_path));
    for (const auto& s : sets) apply_override(doc, s);
  } catch (const MissingInputError& e) {
    code = exit_code::kMissingInput;
    error = e.what();
  } catch (const Error& e) {
    code = exit_code::kConfig;
    error = e.what();
  }
  if (code != exit_code::kOk) {
    std::cerr << "inertia-lab: " << error << "\n";
    try {
      std::filesystem::create_directories(out_dir);
      std::FILE* f = std::fopen((std::filesystem::path(out_dir) / "summary.json").string().c_str(), "wb");
      if (f) {
        const Json s = {{"command", command},
                        {"status", code == exit_code::kMissingInput ? "missing_input" : "config_error"},
                        {"exit_code", code},
                        {"error", error},
                        {"config", doc}};
        const std::string text = s.dump(2) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
      }
    } catch (const std::exception&) {
    }
    return code;
  }

  const CommandResult r = run_command(command, doc, out_dir, jobs);
  if (r.summary.contains("error") && !r.summary.at("error").is_null())
    std::cerr << "inertia-lab: " << r.summary.at("error").get<std::string>() << "\n";
  std::cout << command << ": " << r.summary.value("status", "") << " (exit " << r.exit << ")\n";
  return r.exit;
}
