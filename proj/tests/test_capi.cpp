#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cvk.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path = fs::temp_directory_path() / ("cvk_capi_" + std::to_string(stamp));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
  std::string file(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(cvk_version()) > 0);
  CHECK(std::string(cvk_status_string(CVK_OK)) == "ok");
  CHECK(std::string(cvk_status_string(CVK_ERROR_NOT_ELLIPTIC)) == "not elliptic");
  CHECK(cvk_last_error() != nullptr);
}

TEST_CASE("grid lifecycle and validation") {
  cvk_grid* grid = nullptr;
  REQUIRE(cvk_grid_create(1.0, 2.0, 9, 17, &grid) == CVK_OK);
  CHECK(cvk_grid_nx(grid) == 9);
  CHECK(cvk_grid_ny(grid) == 17);
  CHECK(cvk_grid_hx(grid) == doctest::Approx(1.0 / 8.0));
  CHECK(cvk_grid_hy(grid) == doctest::Approx(2.0 / 16.0));
  cvk_grid_destroy(grid);

  cvk_grid* bad = nullptr;
  CHECK(cvk_grid_create(1.0, 1.0, 3, 9, &bad) == CVK_ERROR_VALIDATION);
  CHECK(bad == nullptr);
  CHECK(std::string(cvk_last_error()).find("5") != std::string::npos);
  CHECK(cvk_grid_create(0.0, 1.0, 9, 9, &bad) == CVK_ERROR_VALIDATION);
  CHECK(cvk_grid_create(1.0, 1.0, 9, 9, nullptr) == CVK_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("fields") {
  cvk_grid* grid = nullptr;
  REQUIRE(cvk_grid_create(1.0, 1.0, 5, 5, &grid) == CVK_OK);
  cvk_field* field = nullptr;
  REQUIRE(cvk_field_create(grid, &field) == CVK_OK);
  CHECK(cvk_field_size(field) == 25);

  std::vector<double> values(25);
  for (int n = 0; n < 25; ++n) values[n] = 0.5 * n;
  CHECK(cvk_field_set_values(field, values.data(), 25) == CVK_OK);
  CHECK(cvk_field_set_values(field, values.data(), 24) == CVK_ERROR_INVALID_ARGUMENT);

  std::vector<double> back(25, 0.0);
  CHECK(cvk_field_get_values(field, back.data(), 25) == CVK_OK);
  CHECK(back == values);

  CHECK(cvk_field_set_constant(field, 2.0) == CVK_OK);
  CHECK(cvk_field_get_values(field, back.data(), 25) == CVK_OK);
  for (double x : back) CHECK(x == 2.0);

  TempDir dir;
  const std::string csv_path = dir.file("field.csv");
  CHECK(cvk_field_write_csv(field, csv_path.c_str()) == CVK_OK);
  CHECK(slurp(csv_path).rfind("i,j,x,y,value\n", 0) == 0);

  cvk_field_destroy(field);
  cvk_grid_destroy(grid);
}

TEST_CASE("solve through the C API") {
  cvk_grid* grid = nullptr;
  REQUIRE(cvk_grid_create(1.0, 1.0, 17, 17, &grid) == CVK_OK);
  cvk_field* k = nullptr;
  REQUIRE(cvk_field_create(grid, &k) == CVK_OK);
  REQUIRE(cvk_field_set_constant(k, 1.0) == CVK_OK);

  cvk_solver_options options;
  cvk_solver_options_init(&options);
  CHECK(options.tol_constraint == 1e-9);
  CHECK(options.tol_stationarity == 1e-6);
  CHECK(options.max_outer == 500);

  SUBCASE("default start converges to the closed form") {
    cvk_report* report = nullptr;
    REQUIRE(cvk_solve(grid, k, nullptr, &options, &report) == CVK_OK);
    CHECK(cvk_report_converged(report) == 1);
    const double interior_area = (15.0 / 16.0) * (15.0 / 16.0);
    CHECK(cvk_report_energy(report) == doctest::Approx(2.0 * interior_area).epsilon(1e-8));
    CHECK(cvk_report_constraint_inf(report) <= 1e-9);
    CHECK(cvk_report_stationarity(report) <= 1e-6);
    CHECK(cvk_report_outer_iterations(report) == 0);

    cvk_field* v = nullptr;
    REQUIRE(cvk_report_solution(report, &v) == CVK_OK);
    CHECK(cvk_field_size(v) == 17 * 17);
    cvk_field* lambda = nullptr;
    REQUIRE(cvk_report_multiplier(report, &lambda) == CVK_OK);
    std::vector<double> lam(17 * 17);
    REQUIRE(cvk_field_get_values(lambda, lam.data(), 17 * 17) == CVK_OK);
    CHECK(std::abs(lam[8 * 17 + 8] - 1.0) <= 1e-8);  // interior node (8, 8)
    cvk_field_destroy(v);
    cvk_field_destroy(lambda);
    cvk_report_destroy(report);
  }

  SUBCASE("negative k returns the not-elliptic status") {
    REQUIRE(cvk_field_set_constant(k, -1.0) == CVK_OK);
    cvk_report* report = nullptr;
    CHECK(cvk_solve(grid, k, nullptr, &options, &report) == CVK_ERROR_NOT_ELLIPTIC);
    CHECK(report == nullptr);
    CHECK(std::strlen(cvk_last_error()) > 0);
  }

  cvk_field_destroy(k);
  cvk_grid_destroy(grid);
}

TEST_CASE("batch runs through cvk_run_json") {
  TempDir dir;

  SUBCASE("solve writes outputs and reports exit 0") {
    const std::string config = R"({"command":"solve","grid":17,"k":{"constant":1.0}})";
    const std::string overrides = "{\"out\":\"" + dir.str() + "\"}";
    int exit_code = -1;
    CHECK(cvk_run_json(config.c_str(), overrides.c_str(), &exit_code) == CVK_OK);
    CHECK(exit_code == 0);
    CHECK(fs::exists(dir.file("v.csv")));
    CHECK(fs::exists(dir.file("lambda.csv")));
    CHECK(slurp(dir.file("report.json")).find("\"converged\": true") != std::string::npos);
  }

  SUBCASE("parse and validation errors set exit 2") {
    int exit_code = -1;
    CHECK(cvk_run_json("{broken", nullptr, &exit_code) == CVK_ERROR_PARSE);
    CHECK(exit_code == 2);
    const std::string config = R"({"command":"solve","grid":3})";
    CHECK(cvk_run_json(config.c_str(), nullptr, &exit_code) == CVK_ERROR_VALIDATION);
    CHECK(exit_code == 2);
  }

  SUBCASE("non-convergence exits 1 but still writes the report") {
    const std::string config = R"({"command":"solve","grid":17,"k":{"constant":-1.0}})";
    const std::string overrides = "{\"out\":\"" + dir.str() + "\"}";
    int exit_code = -1;
    CHECK(cvk_run_json(config.c_str(), overrides.c_str(), &exit_code) == CVK_OK);
    CHECK(exit_code == 1);
    CHECK(slurp(dir.file("report.json")).find("\"converged\": false") != std::string::npos);
  }
}
