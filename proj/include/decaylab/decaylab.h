#ifndef DECAYLAB_H
#define DECAYLAB_H

/* C interface to the decay lab: plans, suite runs, reports and a few kernels. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dl_plan dl_plan;
typedef struct dl_report dl_report;

enum {
  DL_OK = 0,
  DL_ERR_INVALID_ARGUMENT = 1,
  DL_ERR_DOMAIN = 2,
  DL_ERR_NEAR_SINGULAR = 3,
  DL_ERR_TOLERANCE = 4,
  DL_ERR_BUDGET = 5,
  DL_ERR_CONFIG = 6,
  DL_ERR_IO = 7,
  DL_ERR_INTERNAL = 99
};

enum { DL_SIGN_PLUS = 0, DL_SIGN_MINUS = 1 };

const char* dl_version(void);
/* Message of the last failed call on this thread ("" if none). */
const char* dl_last_error(void);

int dl_plan_load(const char* path, dl_plan** out);
int dl_plan_parse(const char* text, dl_plan** out);
int dl_plan_default(dl_plan** out);
int dl_plan_set_threads(dl_plan* plan, unsigned threads);
void dl_plan_free(dl_plan* plan);

size_t dl_experiment_count(void);
const char* dl_experiment_id(size_t i);
const char* dl_experiment_title(size_t i);
const char* dl_experiment_theorem_ref(size_t i);

int dl_run_suite(const dl_plan* plan, dl_report** out);
void dl_report_free(dl_report* report);
int dl_report_all_passed(const dl_report* report);
size_t dl_report_experiment_count(const dl_report* report);
const char* dl_report_experiment_id(const dl_report* report, size_t i);
int dl_report_experiment_passed(const dl_report* report, size_t i);
const char* dl_report_experiment_summary(const dl_report* report, size_t i);
size_t dl_report_row_count(const dl_report* report);
int dl_report_write_csv(const dl_report* report, const char* path);
int dl_report_write_json(const dl_report* report, const char* path);

/* Free outgoing/incoming kernel e^{+-i lambda rho} / (4 pi rho). */
int dl_free_kernel_point(double lambda, int sign, double rho, double* re, double* im);
/* Littlewood-Paley window phi_j(lambda). */
int dl_lp_window(int j, double lambda, double* value);

#ifdef __cplusplus
}
#endif

#endif
