#pragma once

#include <string>

#include "cvk/grid.hpp"

namespace cvk {

/// CSV with header "i,j,x,y,value", one row per node, row-major over (i, j).
/// With interior_only, boundary nodes are skipped (multiplier fields).
void write_scalar_csv(const ScalarField& f, const std::string& path, bool interior_only = false);

ScalarField read_scalar_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace cvk
