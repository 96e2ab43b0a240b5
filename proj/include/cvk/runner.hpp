#pragma once

#include "cvk/config.hpp"

namespace cvk {

/// Execute a validated config: dispatch the command, write the output files
/// into config.out_dir, and return the process exit status (0 success,
/// 1 non-convergence or failed checks). Config problems are reported by
/// parse_config, not here; exit status 2 is assigned by the callers.
int run(const RunConfig& config);

/// parse_config + run.
int run_json(const std::string& config_text, const std::string& overrides = "");

const char* artifact_version();

}  // namespace cvk
