#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvk/solver.hpp"

namespace cvk {

enum class Command { Solve, Verify, Converge, Identities };

const char* command_name(Command c);

/// One batch run, as described by a JSON config file.
struct RunConfig {
  Command command = Command::Solve;
  int grid = 33;
  double extent_x = 1.0;
  double extent_y = 1.0;
  KSpec k;  // defaults to constant 1
  SolverConfig solver;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<int> grids = {17, 33, 65};  // converge command
  double perturb_amplitude = 0.0;         // solve/verify starts; converge defaults to 0.05
  bool perturb_set = false;

  void validate() const;  // throws Validation with the offending field
};

/// Parse a config JSON document, optionally merged with an overrides JSON
/// object (shallow for scalars, replacing "k" wholesale). Fills defaults and
/// validates. Throws Parse on malformed JSON, Validation on bad fields.
RunConfig parse_config(const std::string& text, const std::string& overrides = "");

}  // namespace cvk
