#include <cmath>
#include <string>

#include "doctest.h"

#include "decaylab/decaylab.h"

TEST_CASE("C interface") {
  CHECK(std::string(dl_version()).size() > 0);
  REQUIRE(dl_experiment_count() == 10);
  CHECK(std::string(dl_experiment_id(0)) == "AC1");
  CHECK(dl_experiment_id(10) == nullptr);

  dl_plan* plan = nullptr;
  CHECK(dl_plan_parse("[potential]\nc0 = 0.5\n", &plan) == DL_ERR_CONFIG);
  CHECK(std::string(dl_last_error()).find("0<c0<1/4") != std::string::npos);
  CHECK(dl_plan_load("/nonexistent.ini", &plan) == DL_ERR_CONFIG);
  CHECK(dl_plan_parse(nullptr, &plan) == DL_ERR_INVALID_ARGUMENT);

  REQUIRE(dl_plan_parse("[experiments]\nrun = AC3\n", &plan) == DL_OK);
  CHECK(dl_plan_set_threads(plan, 0) == DL_ERR_INVALID_ARGUMENT);
  CHECK(dl_plan_set_threads(plan, 2) == DL_OK);
  dl_report* rep = nullptr;
  REQUIRE(dl_run_suite(plan, &rep) == DL_OK);
  CHECK(dl_report_all_passed(rep) == 1);
  CHECK(dl_report_experiment_count(rep) == 1);
  CHECK(std::string(dl_report_experiment_id(rep, 0)) == "AC3");
  CHECK(dl_report_experiment_passed(rep, 0) == 1);
  CHECK(dl_report_row_count(rep) == 1);
  CHECK(dl_report_experiment_id(rep, 3) == nullptr);
  CHECK(dl_report_write_csv(rep, "/nonexistent/dir/x.csv") == DL_ERR_IO);
  dl_report_free(rep);
  dl_plan_free(plan);

  double re = 0, im = 0;
  REQUIRE(dl_free_kernel_point(2.0, DL_SIGN_PLUS, 1.5, &re, &im) == DL_OK);
  CHECK(re == doctest::Approx(std::cos(3.0) / (4 * M_PI * 1.5)).epsilon(1e-14));
  CHECK(im == doctest::Approx(std::sin(3.0) / (4 * M_PI * 1.5)).epsilon(1e-14));
  CHECK(dl_free_kernel_point(2.0, 7, 1.5, &re, &im) == DL_ERR_INVALID_ARGUMENT);
  double w = 0;
  REQUIRE(dl_lp_window(0, 1.0, &w) == DL_OK);
  CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(dl_lp_window(0, 3.0, &w) == DL_OK);
  CHECK(w == 0.0);
}
