#include "cvk/config.hpp"

#include <cmath>
#include <filesystem>

#include "json.hpp"

namespace cvk {

using nlohmann::json;

const char* command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Verify: return "verify";
    case Command::Converge: return "converge";
    case Command::Identities: return "identities";
  }
  return "unknown";
}

namespace {

Command parse_command(const std::string& s) {
  if (s == "solve") return Command::Solve;
  if (s == "verify") return Command::Verify;
  if (s == "converge") return Command::Converge;
  if (s == "identities") return Command::Identities;
  fail(ErrorCode::Validation, "command: unknown value '" + s + "'");
}

json parse_object(const std::string& text, const char* what) {
  json doc;
  try {
    doc = json::parse(text.empty() ? "{}" : text);
  } catch (const json::parse_error& err) {
    fail(ErrorCode::Parse, std::string(what) + ": " + err.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Parse, std::string(what) + ": top level must be an object");
  return doc;
}

double number_field(const json& obj, const char* name) {
  if (!obj.at(name).is_number())
    fail(ErrorCode::Validation, std::string(name) + ": expected a number");
  return obj.at(name).get<double>();
}

KSpec parse_k(const json& node) {
  KSpec spec;
  if (node.is_number()) {
    spec.constant = node.get<double>();
    return spec;
  }
  if (!node.is_object()) fail(ErrorCode::Validation, "k: expected a number or an object");
  if (node.contains("constant")) {
    spec.constant = number_field(node, "constant");
    return spec;
  }
  if (node.contains("poly")) {
    const json& terms = node.at("poly");
    if (!terms.is_array() || terms.empty())
      fail(ErrorCode::Validation, "k.poly: expected a non-empty array of [i, j, coeff] triples");
    for (const json& t : terms) {
      if (!t.is_array() || t.size() != 3)
        fail(ErrorCode::Validation, "k.poly: each term must be [i, j, coeff]");
      PolyTerm term;
      term.px = t.at(0).get<int>();
      term.py = t.at(1).get<int>();
      term.coeff = t.at(2).get<double>();
      if (term.px < 0 || term.py < 0)
        fail(ErrorCode::Validation, "k.poly: exponents must be non-negative");
      spec.poly.push_back(term);
    }
    return spec;
  }
  fail(ErrorCode::Validation, "k: expected {\"constant\": value} or {\"poly\": [[i,j,coeff],...]}");
}

void parse_solver(const json& node, SolverConfig& cfg) {
  if (!node.is_object()) fail(ErrorCode::Validation, "solver: expected an object");
  static const char* known[] = {"tol_constraint", "tol_stationarity", "max_outer",
                                "max_newton",     "initial_step",     "backtracking",
                                "min_step",       "convexity_margin"};
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string& key = it.key();
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(ErrorCode::Validation, "solver." + key + ": unknown field");
  }
  if (node.contains("tol_constraint")) cfg.tol_constraint = number_field(node, "tol_constraint");
  if (node.contains("tol_stationarity"))
    cfg.tol_stationarity = number_field(node, "tol_stationarity");
  if (node.contains("max_outer")) cfg.max_outer = node.at("max_outer").get<int>();
  if (node.contains("max_newton")) cfg.max_newton = node.at("max_newton").get<int>();
  if (node.contains("initial_step")) cfg.initial_step = number_field(node, "initial_step");
  if (node.contains("backtracking")) cfg.backtracking = number_field(node, "backtracking");
  if (node.contains("min_step")) cfg.min_step = number_field(node, "min_step");
  if (node.contains("convexity_margin"))
    cfg.convexity_margin = number_field(node, "convexity_margin");
}

}  // namespace

void RunConfig::validate() const {
  if (grid < 5) fail(ErrorCode::Validation, "grid: minimum 5");
  if (!(extent_x > 0.0) || !(extent_y > 0.0))
    fail(ErrorCode::Validation, "extent: side lengths must be positive");
  for (int n : grids)
    if (n < 5) fail(ErrorCode::Validation, "grids: minimum 5 per entry");
  if (grids.empty()) fail(ErrorCode::Validation, "grids: at least one entry");
  solver.validate();

  // k must sample to a finite nodal field on the requested grid.
  const GridDomain g(extent_x, extent_y, grid, grid);
  ScalarField k_field = k.sample(g);
  if (!k_field.all_finite()) fail(ErrorCode::Validation, "k: samples to non-finite values");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    fail(ErrorCode::Validation, "out: cannot create output directory '" + out_dir + "'");
}

RunConfig parse_config(const std::string& text, const std::string& overrides) {
  json doc = parse_object(text, "config");
  const json patch = parse_object(overrides, "overrides");
  for (auto it = patch.begin(); it != patch.end(); ++it) doc[it.key()] = it.value();

  static const char* known[] = {"command", "grid", "extent", "k",      "solver",
                                "out",     "seed", "grids",  "perturb"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(ErrorCode::Validation, key + ": unknown field");
  }

  RunConfig cfg;
  cfg.k.constant = 1.0;

  if (doc.contains("command")) {
    if (!doc.at("command").is_string())
      fail(ErrorCode::Validation, "command: expected a string");
    cfg.command = parse_command(doc.at("command").get<std::string>());
  }
  if (doc.contains("grid")) {
    if (!doc.at("grid").is_number_integer()) fail(ErrorCode::Validation, "grid: expected an integer");
    cfg.grid = doc.at("grid").get<int>();
  }
  if (doc.contains("extent")) {
    const json& e = doc.at("extent");
    if (!e.is_array() || e.size() != 2)
      fail(ErrorCode::Validation, "extent: expected [Lx, Ly]");
    cfg.extent_x = e.at(0).get<double>();
    cfg.extent_y = e.at(1).get<double>();
  }
  if (doc.contains("k")) cfg.k = parse_k(doc.at("k"));
  if (doc.contains("solver")) parse_solver(doc.at("solver"), cfg.solver);
  if (doc.contains("out")) {
    if (!doc.at("out").is_string()) fail(ErrorCode::Validation, "out: expected a string path");
    cfg.out_dir = doc.at("out").get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer())
      fail(ErrorCode::Validation, "seed: expected an integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("grids")) {
    const json& gs = doc.at("grids");
    if (!gs.is_array() || gs.empty())
      fail(ErrorCode::Validation, "grids: expected a non-empty integer array");
    cfg.grids.clear();
    for (const json& n : gs) cfg.grids.push_back(n.get<int>());
  }
  if (doc.contains("perturb")) {
    cfg.perturb_amplitude = number_field(doc, "perturb");
    cfg.perturb_set = true;
  }
  if (!cfg.perturb_set && cfg.command == Command::Converge)
    cfg.perturb_amplitude = 0.05;  // meaningful study by default

  cfg.validate();
  return cfg;
}

}  // namespace cvk
