#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "decaylab/suite.hpp"

using namespace decaylab;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_error);
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("config loading") {
  SUBCASE("minimal free-space plan") {
    const auto p = parse_config("[potential]\nkind = zero\n[experiments]\nrun = AC3\n");
    CHECK(p.potential.kind == "zero");
    CHECK(p.experiments == std::vector<std::string>{"AC3"});
    CHECK(p.times.size() == 6);
  }
  SUBCASE("every key of the shipped default plan") {
    const auto p = load_config(DECAYLAB_DEFAULT_CONFIG);
    CHECK(p.experiments.size() == list_experiments().size());
    CHECK(p.lambdas.front() == 0.25);
    CHECK(p.lambdas.back() == 8.0);
    CHECK(p.spectral.j_min == -6);
    CHECK(p.seed == 1234);
  }
  SUBCASE("field-level errors") {
    CHECK(config_error("[potential]\nc0 = 0.5\n").find("0<c0<1/4") != std::string::npos);
    CHECK(config_error("[grid]\npoints = 3\n").find("grid.points: unknown key") != std::string::npos);
    CHECK(config_error("[colour]\nx = 1\n").find("unknown key") != std::string::npos);
    CHECK(config_error("[grid]\npoints_per_unit = many\n").find("grid.points_per_unit") != std::string::npos);
    CHECK(config_error("[experiments]\nrun = AC11\n").find("AC11") != std::string::npos);
    CHECK(config_error("[times]\nvalues = 4, 2, 8, 16\n").find("times.values") != std::string::npos);
    CHECK(config_error("[potential]\namplitude = -0.5\n").find("potential") != std::string::npos);
    CHECK(config_error("[potential]\nkind = wedge\n").find("potential.kind") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/plan.ini"), Error);
  }
  SUBCASE("signed j range") {
    const auto p = parse_config("[spectral]\nj_min = -9\nj_max = 4\n");
    CHECK(p.spectral.j_min == -9);
    CHECK(p.spectral.j_max == 4);
  }
}

TEST_CASE("suite runs and reports") {
  SUBCASE("empty plan") {
    const auto b = run_suite(parse_config("[experiments]\nrun =\n"));
    CHECK(b.experiments.empty());
    CHECK(b.all_passed());
    CHECK(to_csv(b) == "experiment_id,theorem_ref,t_or_lambda,value,bound,ratio,slope,slope_ci,pass\n");
  }
  SUBCASE("injected failure") {
    const auto b = run_suite(parse_config("[experiments]\nrun = AC3\n[tolerances]\npartition = -1\n"));
    REQUIRE(b.experiments.size() == 1);
    CHECK_FALSE(b.all_passed());
  }
  SUBCASE("an experiment that throws is recorded and the rest run") {
    const auto b = run_suite(parse_config("[experiments]\nrun = AC6, AC3\n[data]\ncenter = 1.0\n"));
    REQUIRE(b.experiments.size() == 2);
    CHECK_FALSE(b.experiments[0].passed);
    CHECK_FALSE(b.experiments[0].error.empty());
    CHECK(b.experiments[1].passed);
  }
  SUBCASE("CSV, JSON, determinism and round trip") {
    const auto plan = parse_config("[experiments]\nrun = AC3, AC4, AC8\n[run]\nthreads = 3\n");
    const auto a = run_suite(plan);
    auto serial = plan;
    serial.threads = 1;
    const auto b = run_suite(serial);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(to_json(a) == to_json(b));
    CHECK(a.all_passed());
    std::size_t lines = 0;
    for (char ch : to_csv(a)) lines += ch == '\n';
    CHECK(lines == a.row_count() + 1);
    CHECK(a.experiments[0].rows.size() == 1);
    for (const auto& e : a.experiments)
      for (const auto& r : e.rows) {
        CHECK(r.experiment_id == e.id);
        CHECK(r.theorem_ref == e.theorem_ref);
      }
    const auto back = bundle_from_json(to_json(a));
    CHECK(back == a);
    CHECK(to_json(back) == to_json(a));

    const auto dir = std::filesystem::temp_directory_path() / "decaylab_suite_test";
    std::filesystem::create_directories(dir);
    emit_csv(a, (dir / "r.csv").string());
    emit_json(a, (dir / "r.json").string());
    CHECK(slurp((dir / "r.csv").string()) == to_csv(a));
    CHECK(slurp((dir / "r.json").string()) == to_json(a));
    CHECK_THROWS_AS(emit_csv(a, "/nonexistent/dir/r.csv"), Error);
  }
  SUBCASE("CSV formatting") {
    ReportBundle b;
    ExperimentReport e;
    e.id = "X";
    e.theorem_ref = "a,b";
    e.rows.push_back({"X", "a,b", 0.1, 1.0 / 3.0, std::numeric_limits<double>::quiet_NaN(), 2.0,
                      std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(), false});
    b.experiments.push_back(e);
    const std::string csv = to_csv(b);
    CHECK(csv.substr(csv.find('\n') + 1) == "X,\"a,b\",0.10000000000000001,0.33333333333333331,,2,,,false\n");
  }
}
