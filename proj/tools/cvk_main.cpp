// Batch front-end for the cvk shared library. Reads a JSON config file,
// applies command-line overrides, and dispatches through the C API.
//
// Exit status: 0 on success, 1 on non-convergence or failed checks,
// 2 on config errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <vector>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cvk.h"

int main(int argc, char** argv) {
  CLI::App app{"cvk - constrained von Karman plate solver"};
  app.set_version_flag("--version", std::string(cvk_version()));

  std::vector<std::string> positionals;
  std::optional<int> grid;
  std::optional<double> k_const;
  std::optional<std::string> out_dir;
  std::optional<long long> seed;
  std::optional<double> perturb;

  app.add_option("args", positionals,
                 "config file and/or command (solve | verify | converge | identities)");
  app.add_option("--grid", grid, "override the grid size");
  app.add_option("--k-const", k_const, "override k with a constant");
  app.add_option("--out", out_dir, "override the output directory");
  app.add_option("--seed", seed, "override the random seed");
  app.add_option("--perturb", perturb, "override the start perturbation amplitude");

  CLI11_PARSE(app, argc, argv);

  const auto is_command = [](const std::string& s) {
    return s == "solve" || s == "verify" || s == "converge" || s == "identities";
  };

  std::string config_text = "{}";
  std::string command;
  for (const std::string& arg : positionals) {
    if (is_command(arg)) {
      command = arg;
      continue;
    }
    std::ifstream in(arg, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config file '" << arg << "'\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    config_text = ss.str();
  }

  nlohmann::json overrides = nlohmann::json::object();
  if (!command.empty()) overrides["command"] = command;
  if (grid) overrides["grid"] = *grid;
  if (k_const) overrides["k"] = {{"constant", *k_const}};
  if (out_dir) overrides["out"] = *out_dir;
  if (seed) overrides["seed"] = *seed;
  if (perturb) overrides["perturb"] = *perturb;
  const std::string overrides_text = overrides.dump();

  int exit_code = 2;
  const cvk_status status = cvk_run_json(config_text.c_str(), overrides_text.c_str(), &exit_code);
  if (status != CVK_OK) {
    std::cerr << "error: " << cvk_status_string(status) << ": " << cvk_last_error() << "\n";
    return exit_code;
  }
  if (exit_code != 0)
    std::cerr << "run finished without convergence or with failed checks (exit 1)\n";
  return exit_code;
}
