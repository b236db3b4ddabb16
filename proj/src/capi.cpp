#include "decaylab/decaylab.h"

#include <string>

#include "decaylab/free_resolvent.hpp"
#include "decaylab/suite.hpp"

struct dl_plan {
  decaylab::ExperimentPlan plan;
};

struct dl_report {
  decaylab::ReportBundle bundle;
};

namespace {

thread_local std::string last_error;

template <class F>
int guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return DL_OK;
  } catch (const decaylab::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return DL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return DL_ERR_INTERNAL;
  }
}

int null_arg(const char* what) {
  last_error = std::string(what) + " must not be null";
  return DL_ERR_INVALID_ARGUMENT;
}

const decaylab::ExperimentReport* experiment_at(const dl_report* r, size_t i) {
  if (!r || i >= r->bundle.experiments.size()) return nullptr;
  return &r->bundle.experiments[i];
}

}  // namespace

extern "C" {

const char* dl_version(void) { return decaylab::library_version(); }
const char* dl_last_error(void) { return last_error.c_str(); }

int dl_plan_load(const char* path, dl_plan** out) {
  if (!path || !out) return null_arg("path and out");
  return guarded([&] { *out = new dl_plan{decaylab::load_config(path)}; });
}

int dl_plan_parse(const char* text, dl_plan** out) {
  if (!text || !out) return null_arg("text and out");
  return guarded([&] { *out = new dl_plan{decaylab::parse_config(text)}; });
}

int dl_plan_default(dl_plan** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new dl_plan{decaylab::ExperimentPlan::defaults()}; });
}

int dl_plan_set_threads(dl_plan* plan, unsigned threads) {
  if (!plan) return null_arg("plan");
  if (threads == 0) {
    last_error = "threads must be positive";
    return DL_ERR_INVALID_ARGUMENT;
  }
  plan->plan.threads = threads;
  return DL_OK;
}

void dl_plan_free(dl_plan* plan) { delete plan; }

size_t dl_experiment_count(void) { return decaylab::list_experiments().size(); }
const char* dl_experiment_id(size_t i) {
  const auto& r = decaylab::list_experiments();
  return i < r.size() ? r[i].id.c_str() : nullptr;
}
const char* dl_experiment_title(size_t i) {
  const auto& r = decaylab::list_experiments();
  return i < r.size() ? r[i].title.c_str() : nullptr;
}
const char* dl_experiment_theorem_ref(size_t i) {
  const auto& r = decaylab::list_experiments();
  return i < r.size() ? r[i].theorem_ref.c_str() : nullptr;
}

int dl_run_suite(const dl_plan* plan, dl_report** out) {
  if (!plan || !out) return null_arg("plan and out");
  return guarded([&] { *out = new dl_report{decaylab::run_suite(plan->plan)}; });
}

void dl_report_free(dl_report* report) { delete report; }

int dl_report_all_passed(const dl_report* report) { return report && report->bundle.all_passed() ? 1 : 0; }

size_t dl_report_experiment_count(const dl_report* report) {
  return report ? report->bundle.experiments.size() : 0;
}

const char* dl_report_experiment_id(const dl_report* report, size_t i) {
  const auto* e = experiment_at(report, i);
  return e ? e->id.c_str() : nullptr;
}

int dl_report_experiment_passed(const dl_report* report, size_t i) {
  const auto* e = experiment_at(report, i);
  return e && e->passed ? 1 : 0;
}

const char* dl_report_experiment_summary(const dl_report* report, size_t i) {
  const auto* e = experiment_at(report, i);
  return e ? e->summary.c_str() : nullptr;
}

size_t dl_report_row_count(const dl_report* report) { return report ? report->bundle.row_count() : 0; }

int dl_report_write_csv(const dl_report* report, const char* path) {
  if (!report || !path) return null_arg("report and path");
  return guarded([&] { decaylab::emit_csv(report->bundle, path); });
}

int dl_report_write_json(const dl_report* report, const char* path) {
  if (!report || !path) return null_arg("report and path");
  return guarded([&] { decaylab::emit_json(report->bundle, path); });
}

int dl_free_kernel_point(double lambda, int sign, double rho, double* re, double* im) {
  if (!re || !im) return null_arg("re and im");
  if (sign != DL_SIGN_PLUS && sign != DL_SIGN_MINUS) {
    last_error = "sign must be DL_SIGN_PLUS or DL_SIGN_MINUS";
    return DL_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const auto k = decaylab::free_kernel_point(lambda, sign == DL_SIGN_PLUS ? decaylab::Sign::plus
                                                                            : decaylab::Sign::minus, rho);
    *re = k.real();
    *im = k.imag();
  });
}

int dl_lp_window(int j, double lambda, double* value) {
  if (!value) return null_arg("value");
  return guarded([&] { *value = decaylab::lp_window(j)(lambda); });
}

}  // extern "C"
