#ifndef UC_CHP_H
#define UC_CHP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every call.
 */
typedef enum UcStatus {
  UC_STATUS_OK = 0,
  UC_STATUS_NULL_POINTER = 1,
  UC_STATUS_INVALID_UTF8 = 2,
  UC_STATUS_IO = 3,
  UC_STATUS_PARSE = 4,
  UC_STATUS_VALIDATION = 5,
  UC_STATUS_INVALID_INPUT = 6,
  UC_STATUS_INFEASIBLE = 7,
  UC_STATUS_UNBOUNDED = 8,
  UC_STATUS_NODE_LIMIT = 9,
  UC_STATUS_NUMERICAL = 10,
  UC_STATUS_OUT_OF_RANGE = 11,
  UC_STATUS_BUFFER_TOO_SMALL = 12,
  UC_STATUS_PANIC = 13,
} UcStatus;

typedef enum UcMethod {
  UC_METHOD_TLMP = 0,
  UC_METHOD_CHP = 1,
} UcMethod;

/**
 * A validated system instance.
 */
typedef struct UcInstance UcInstance;

/**
 * One or more pricing reports sharing an ISO schedule.
 */
typedef struct UcReport UcReport;

/**
 * The system MIP optimum and its schedule.
 */
typedef struct UcSolution UcSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or NULL. Owned by the
 * library; valid until the next failing call on the same thread.
 */
const char *uc_last_error(void);

/**
 * Loads and validates an instance file. `pieces` overrides the tangent count
 * of quadratic costs; pass 0 to keep the file's value.
 */
enum UcStatus uc_instance_load(const char *path, uint32_t pieces, struct UcInstance **instance);

/**
 * Same as [`uc_instance_load`] for a JSON document in memory.
 */
enum UcStatus uc_instance_parse(const char *json, uint32_t pieces, struct UcInstance **instance);

void uc_instance_free(struct UcInstance *instance);

enum UcStatus uc_instance_horizon(const struct UcInstance *instance, size_t *out_horizon);

enum UcStatus uc_instance_generator_count(const struct UcInstance *instance, size_t *out_count);

/**
 * Solves the system commitment problem. `node_limit = 0` uses the default.
 */
enum UcStatus uc_solve(const struct UcInstance *instance,
                       size_t node_limit,
                       struct UcSolution **solution);

void uc_solution_free(struct UcSolution *solution);

/**
 * Objective value and whether optimality was proven (1) or the node limit hit (0).
 */
enum UcStatus uc_solution_objective(const struct UcSolution *solution,
                                    double *out_objective,
                                    int32_t *out_proven);

/**
 * Dispatch of generator `generator` (0-based, file order) in every period.
 */
enum UcStatus uc_solution_dispatch(const struct UcSolution *solution,
                                   size_t generator,
                                   double *buf,
                                   size_t len,
                                   size_t *out_len);

/**
 * Solves the system and prices it with one method.
 */
enum UcStatus uc_price(const struct UcInstance *instance,
                       enum UcMethod method,
                       struct UcReport **report);

/**
 * Solves the system and prices it with both methods: entry 0 is TLMP, entry 1 CHP.
 */
enum UcStatus uc_compare(const struct UcInstance *instance, struct UcReport **report);

void uc_report_free(struct UcReport *report);

enum UcStatus uc_report_count(const struct UcReport *report, size_t *out_count);

enum UcStatus uc_report_method(const struct UcReport *report,
                               size_t index,
                               enum UcMethod *out_method);

enum UcStatus uc_report_prices(const struct UcReport *report,
                               size_t index,
                               double *buf,
                               size_t len,
                               size_t *out_len);

/**
 * Per-generator uplift, in file order.
 */
enum UcStatus uc_report_uplifts(const struct UcReport *report,
                                size_t index,
                                double *buf,
                                size_t len,
                                size_t *out_len);

/**
 * Summary numbers of one entry. Any out pointer may be NULL. `gap_tm` is
 * NaN unless the report came from [`uc_compare`].
 */
enum UcStatus uc_report_summary(const struct UcReport *report,
                                size_t index,
                                double *total_uplift,
                                double *z_qip,
                                double *relaxation_objective,
                                double *gap_tm);

/**
 * The report as CSV, identical to the command line output. Release with
 * [`uc_string_free`].
 */
enum UcStatus uc_report_csv(const struct UcReport *report, char **out_csv);

void uc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UC_CHP_H */
