#include "cvk/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace cvk {

namespace {

std::string format_row(int i, int j, double x, double y, double value) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", i, j, x, y, value);
  return buf;
}

}  // namespace

void write_scalar_csv(const ScalarField& f, const std::string& path, bool interior_only) {
  const GridDomain& g = f.domain;
  std::string out = "i,j,x,y,value\n";
  const int lo_i = interior_only ? 1 : 0;
  const int hi_i = interior_only ? g.nx - 2 : g.nx - 1;
  const int lo_j = interior_only ? 1 : 0;
  const int hi_j = interior_only ? g.ny - 2 : g.ny - 1;
  for (int i = lo_i; i <= hi_i; ++i)
    for (int j = lo_j; j <= hi_j; ++j) out += format_row(i, j, g.x(i), g.y(j), f.at(i, j));
  write_text_file(path, out);
}

ScalarField read_scalar_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,j,x,y,value", 0) != 0)
    fail(ErrorCode::Parse, path + ": expected header i,j,x,y,value");

  struct Row {
    int i, j;
    double value;
  };
  std::vector<Row> rows;
  int max_i = 0, max_j = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r{};
    double x, y;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &r.i, &r.j, &x, &y, &r.value) != 5)
      fail(ErrorCode::Parse, path + ": malformed row '" + line + "'");
    max_i = std::max(max_i, r.i);
    max_j = std::max(max_j, r.j);
    rows.push_back(r);
  }
  if (rows.empty()) fail(ErrorCode::Parse, path + ": no data rows");

  // Only full-grid files round-trip; extents are not stored in the CSV, so
  // a unit spacing reconstruction is used when reading back.
  GridDomain g(static_cast<double>(max_i), static_cast<double>(max_j), max_i + 1, max_j + 1);
  ScalarField f(g);
  for (const Row& r : rows) f.at(r.i, r.j) = r.value;
  return f;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open " + path + " for writing");
  out << content;
  if (!out) fail(ErrorCode::Io, "failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cvk
