#include "cvk/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "json.hpp"

#include "cvk/io.hpp"
#include "cvk/verify.hpp"

namespace cvk {

using ordered_json = nlohmann::ordered_json;

const char* artifact_version() { return "0.1.0"; }

namespace {

std::string join_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

ordered_json k_to_json(const KSpec& k) {
  ordered_json out;
  if (k.constant) {
    out["constant"] = *k.constant;
  } else {
    ordered_json terms = ordered_json::array();
    for (const PolyTerm& t : k.poly) terms.push_back({t.px, t.py, t.coeff});
    out["poly"] = terms;
  }
  return out;
}

ordered_json config_to_json(const RunConfig& cfg) {
  ordered_json out;
  out["command"] = command_name(cfg.command);
  out["grid"] = cfg.grid;
  out["extent"] = {cfg.extent_x, cfg.extent_y};
  out["k"] = k_to_json(cfg.k);
  out["solver"] = {{"tol_constraint", cfg.solver.tol_constraint},
                   {"tol_stationarity", cfg.solver.tol_stationarity},
                   {"max_outer", cfg.solver.max_outer},
                   {"max_newton", cfg.solver.max_newton},
                   {"initial_step", cfg.solver.initial_step},
                   {"backtracking", cfg.solver.backtracking},
                   {"min_step", cfg.solver.min_step},
                   {"convexity_margin", cfg.solver.convexity_margin}};
  out["out"] = cfg.out_dir;
  out["seed"] = cfg.seed;
  out["grids"] = cfg.grids;
  out["perturb"] = cfg.perturb_amplitude;
  return out;
}

ordered_json report_to_json(const RunConfig& cfg, const SolveReport& report,
                            const std::string& error) {
  ordered_json out;
  out["version"] = artifact_version();
  out["command"] = command_name(cfg.command);
  out["converged"] = report.converged;
  out["status"] = error.empty() ? solve_status_name(report.status) : "failed";
  if (!error.empty())
    out["error"] = error;
  else if (!report.message.empty())
    out["error"] = report.message;
  out["energy"] = report.energy;
  out["constraint_inf"] = report.constraint_inf;
  out["stationarity_norm"] = report.stationarity_norm;
  out["outer_iterations"] = report.outer_iterations;
  out["newton_iterations_total"] = report.newton_iterations_total;
  ordered_json history = ordered_json::array();
  for (const IterationRecord& rec : report.history)
    history.push_back({rec.energy, rec.constraint_inf, rec.stationarity_norm});
  out["history"] = history;
  out["config"] = config_to_json(cfg);
  return out;
}

void write_json_file(const std::string& path, const ordered_json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

/// Solve per the config; on solver errors a report with converged=false is
/// still produced so report.json always exists.
SolveReport guarded_solve(const RunConfig& cfg, const ConstraintData& data,
                          const std::optional<ScalarField>& start, std::string& error) {
  try {
    return minimize(start, data, cfg.solver);
  } catch (const Error& err) {
    error = err.what();
    SolveReport report;
    report.v = ScalarField(data.k.domain);
    report.lambda = ScalarField(data.k.domain);
    report.status = SolveStatus::Failed;
    report.message = err.what();
    return report;
  }
}

int run_solve(const RunConfig& cfg, ordered_json* verify_doc) {
  const GridDomain g(cfg.extent_x, cfg.extent_y, cfg.grid, cfg.grid);
  const ConstraintData data = ConstraintData::from_spec(g, cfg.k);

  std::optional<ScalarField> start;
  if (cfg.perturb_amplitude != 0.0) start = perturbed_start(g, data, cfg.perturb_amplitude);

  std::string error;
  const SolveReport report = guarded_solve(cfg, data, start, error);

  write_scalar_csv(report.v, join_path(cfg.out_dir, "v.csv"));
  write_scalar_csv(report.lambda, join_path(cfg.out_dir, "lambda.csv"), /*interior_only=*/true);
  write_json_file(join_path(cfg.out_dir, "report.json"), report_to_json(cfg, report, error));

  int exit_code = report.converged ? 0 : 1;
  if (verify_doc && error.empty()) {
    // Independent checks on the solve output.
    ordered_json& doc = *verify_doc;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // Adjointness of the divergence-form operator against the Hessian.
    double adj_dev = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      SymMatrixField m(g);
      for (int p = 0; p < m.size(); ++p) {
        m.a11[p] = unit(rng);
        m.a12[p] = unit(rng);
        m.a22[p] = unit(rng);
      }
      ScalarField h(g);
      for (double& x : h.values) x = unit(rng);
      const double lhs = quad_inner(m, hessian(h));
      const double rhs = nodal_dot(divdiv_adjoint(m), h);
      adj_dev = std::max(adj_dev, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }

    // Weak stationarity against random directions.
    double weak_dev = 0.0;
    double weak_bound = 0.0;
    const SymMatrixField hess_v = hessian(report.v);
    const SymMatrixField cof_v = cofactor(hess_v);
    for (int trial = 0; trial < 5; ++trial) {
      ScalarField h(g);
      for (double& x : h.values) x = unit(rng);
      const SymMatrixField hess_h = hessian(h);
      SymMatrixField weighted = cof_v;
      for (int i = 1; i <= g.nx - 2; ++i)
        for (int j = 1; j <= g.ny - 2; ++j) {
          const int p = weighted.iidx(i, j);
          weighted.a11[p] *= report.lambda.at(i, j);
          weighted.a12[p] *= report.lambda.at(i, j);
          weighted.a22[p] *= report.lambda.at(i, j);
        }
      const double gap = std::abs(quad_inner(hess_v, hess_h) - quad_inner(weighted, hess_h));
      weak_dev = std::max(weak_dev, gap);
      weak_bound = std::max(weak_bound, 10.0 * cfg.solver.tol_stationarity *
                                            std::sqrt(nodal_dot(h, h)));
    }

    const ScalarField el = el_residual(report.v, report.lambda);
    const double el_inf = inf_norm(el);

    const IdentitySuiteResult ids = identity_suite(cfg.seed);

    doc["adjointness_dev"] = adj_dev;
    doc["adjointness_pass"] = adj_dev <= 1e-12;
    doc["weak_el_dev"] = weak_dev;
    doc["weak_el_bound"] = weak_bound;
    doc["weak_el_pass"] = weak_dev <= weak_bound;
    doc["el_residual_inf"] = el_inf;
    doc["identity_suite_pass"] = ids.passed;
    doc["solve_converged"] = report.converged;
    if (data.is_constant() && data.k_min > 0.0) {
      const AnalyticComparison cmp = compare_to_analytic(report.v, data);
      doc["field_error_inf"] = cmp.field_error_inf;
      doc["energy_error"] = cmp.energy_error;
    }
    const bool ok = report.converged && adj_dev <= 1e-12 && weak_dev <= weak_bound && ids.passed;
    doc["passed"] = ok;
    exit_code = ok ? 0 : 1;
  } else if (verify_doc) {
    (*verify_doc)["passed"] = false;
    (*verify_doc)["error"] = error;
    exit_code = 1;
  }
  return exit_code;
}

int run_verify(const RunConfig& cfg) {
  ordered_json checks;
  const int code = run_solve(cfg, &checks);
  ordered_json doc;
  doc["version"] = artifact_version();
  doc["command"] = command_name(cfg.command);
  doc["checks"] = checks;
  doc["passed"] = checks.value("passed", false);
  doc["config"] = config_to_json(cfg);
  write_json_file(join_path(cfg.out_dir, "verify.json"), doc);
  return code;
}

int run_converge(const RunConfig& cfg) {
  ConvergenceStudyOptions opts;
  opts.extent_x = cfg.extent_x;
  opts.extent_y = cfg.extent_y;
  opts.perturb_amplitude = cfg.perturb_amplitude;
  opts.solver = cfg.solver;

  const std::vector<ConvergenceRow> rows = convergence_study(cfg.k, cfg.grids, opts);

  std::string csv = "n,h,field_err,energy_err,lambda_err,order\n";
  char buf[256];
  for (const ConvergenceRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,", row.n, row.h,
                  row.field_error_inf, row.energy_error, row.multiplier_error_inf);
    csv += buf;
    if (row.observed_order) {
      std::snprintf(buf, sizeof(buf), "%.17g", *row.observed_order);
      csv += buf;
    }
    csv += "\n";
  }
  write_text_file(join_path(cfg.out_dir, "convergence.csv"), csv);

  ordered_json doc;
  doc["version"] = artifact_version();
  doc["command"] = command_name(cfg.command);
  ordered_json jrows = ordered_json::array();
  bool all_converged = true;
  for (const ConvergenceRow& row : rows) {
    ordered_json r;
    r["n"] = row.n;
    r["h"] = row.h;
    r["field_err"] = row.field_error_inf;
    r["energy_err"] = row.energy_error;
    r["lambda_err"] = row.multiplier_error_inf;
    if (row.observed_order)
      r["order"] = *row.observed_order;
    else
      r["order"] = nullptr;
    r["field_err_l2"] = row.field_error_l2;
    r["lambda_err_l2"] = row.multiplier_error_l2;
    r["converged"] = row.converged;
    jrows.push_back(r);
    all_converged = all_converged && row.converged;
  }
  doc["rows"] = jrows;
  doc["all_converged"] = all_converged;
  doc["config"] = config_to_json(cfg);
  write_json_file(join_path(cfg.out_dir, "convergence.json"), doc);
  return all_converged ? 0 : 1;
}

int run_identities(const RunConfig& cfg) {
  const IdentitySuiteResult r = identity_suite(cfg.seed);
  ordered_json doc;
  doc["version"] = artifact_version();
  doc["command"] = command_name(cfg.command);
  doc["seed"] = cfg.seed;
  doc["passed"] = r.passed;
  doc["matrix_checks"] = r.matrix_checks;
  doc["field_checks"] = r.field_checks;
  doc["max_matrix_identity_dev"] = r.max_matrix_identity_dev;
  doc["max_field_identity_dev"] = r.max_field_identity_dev;
  doc["hyperbolic_constraint_inf"] = r.hyperbolic_constraint_inf;
  doc["hyperbolic_energy"] = r.hyperbolic_energy;
  doc["hyperbolic_energy_expected"] = r.hyperbolic_energy_expected;
  doc["hyperbolic_tracefree_dev"] = r.hyperbolic_tracefree_dev;
  doc["config"] = config_to_json(cfg);
  write_json_file(join_path(cfg.out_dir, "identities.json"), doc);
  return r.passed ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config) {
  switch (config.command) {
    case Command::Solve: return run_solve(config, nullptr);
    case Command::Verify: return run_verify(config);
    case Command::Converge: return run_converge(config);
    case Command::Identities: return run_identities(config);
  }
  fail(ErrorCode::Internal, "unhandled command");
}

int run_json(const std::string& config_text, const std::string& overrides) {
  return run(parse_config(config_text, overrides));
}

}  // namespace cvk
