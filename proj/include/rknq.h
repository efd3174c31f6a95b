/* C interface of the rknq integration library.
 *
 * Explicit Runge-Kutta-Nystrom methods for y'' = f(x, y) with adaptive
 * local error control (embedded 4/5 pair, local extrapolation) and
 * stepwise global error control by quenching against an order-10
 * tracker chain. First-order problems y' = g(x, y) can be transformed
 * into the required second-order form.
 *
 * All functions returning rknq_status leave outputs untouched on
 * failure; rknq_last_error() describes the most recent failure on the
 * calling thread.
 */
#ifndef RKNQ_H
#define RKNQ_H

#if defined(_WIN32)
#define RKNQ_API __declspec(dllexport)
#else
#define RKNQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rknq_status {
    RKNQ_OK = 0,
    RKNQ_ERROR_INVALID_ARGUMENT = 1,
    RKNQ_ERROR_UNKNOWN_NAME = 2,
    RKNQ_ERROR_EVALUATION = 3,
    RKNQ_ERROR_STEPSIZE_UNDERFLOW = 4,
    RKNQ_ERROR_REJECTION_STORM = 5,
    RKNQ_ERROR_TOLERANCE_INFEASIBLE = 6,
    RKNQ_ERROR_INTERNAL = 7
} rknq_status;

typedef enum rknq_norm_rule {
    RKNQ_NORM_MIXED = 0,   /* absolute below unit magnitude, relative above */
    RKNQ_NORM_ABSOLUTE = 1 /* plain max-abs */
} rknq_norm_rule;

/* Opaque handles. Tableaus are compiled-in constants and are borrowed,
 * never freed; problems and trajectories are owned by the caller. */
typedef struct rknq_tableau rknq_tableau;
typedef struct rknq_problem rknq_problem;
typedef struct rknq_first_order rknq_first_order;
typedef struct rknq_trajectory rknq_trajectory;

RKNQ_API const char* rknq_status_name(rknq_status s);
RKNQ_API const char* rknq_last_error(void);

/* ---- methods ------------------------------------------------------- */

/* name is one of "RKN4", "RKN5", "RKN10" */
RKNQ_API rknq_status rknq_tableau_builtin(const char* name, const rknq_tableau** out);
RKNQ_API int rknq_tableau_order(const rknq_tableau* t);
RKNQ_API int rknq_tableau_stages(const rknq_tableau* t);
RKNQ_API const char* rknq_tableau_name(const rknq_tableau* t);

typedef struct rknq_validation_report {
    int shape_ok;
    int explicit_ok;
    double explicit_residual;
    int position_sum_ok; /* |sum b - 1/2| <= 1e-13 */
    double position_sum_residual;
    int velocity_sum_ok; /* |sum bhat - 1| <= 1e-13 */
    double velocity_sum_residual;
    int all_passed;
    /* informational, not part of all_passed: b[p] = bhat[p] (1 - c[p]) */
    int weight_relation_holds;
    double weight_relation_residual;
} rknq_validation_report;

RKNQ_API rknq_status rknq_tableau_validate(const rknq_tableau* t, rknq_validation_report* out);

/* ---- problems ------------------------------------------------------ */

/* User evaluators return 0 on success; any other value (or non-finite
 * output) is treated as an evaluation failure. */
typedef int (*rknq_eval_fn)(double x, const double* y, double* out, int dim, void* user);
/* Row-major Jacobian, entry (j, i) = d g_j / d y_i. */
typedef int (*rknq_jacobian_fn)(double x, const double* y, double* jac, int dim, void* user);
/* Analytic solution; yprime is NULL for first-order problems. */
typedef int (*rknq_reference_fn)(double x, double* y, double* yprime, int dim, void* user);

/* name is "exp1000" or "sho"; the returned problem is the transformed
 * second-order form carrying its analytic reference. */
RKNQ_API rknq_status rknq_problem_builtin(const char* name, rknq_problem** out);
/* Natural error norm and default interval end of a built-in problem. */
RKNQ_API rknq_status rknq_problem_builtin_info(const char* name, rknq_norm_rule* norm,
                                               double* default_x_end);

RKNQ_API rknq_status rknq_problem_create(int dim, double x0, const double* y0,
                                         const double* y0prime, rknq_eval_fn f, void* f_user,
                                         rknq_reference_fn reference, void* reference_user,
                                         rknq_problem** out);

RKNQ_API rknq_status rknq_first_order_create(int dim, double x0, const double* y0, rknq_eval_fn g,
                                             void* g_user, rknq_jacobian_fn jacobian,
                                             void* jacobian_user, rknq_reference_fn reference,
                                             void* reference_user, int autonomous,
                                             rknq_first_order** out);

/* y' = g(x,y)  ->  y'' = sum_i (dg_j/dy_i) g_i, y0' = g(x0, y0) */
RKNQ_API rknq_status rknq_first_order_transform(const rknq_first_order* p, rknq_problem** out);

RKNQ_API void rknq_problem_destroy(rknq_problem* p);
RKNQ_API void rknq_first_order_destroy(rknq_first_order* p);

RKNQ_API int rknq_problem_dim(const rknq_problem* p);
RKNQ_API double rknq_problem_x0(const rknq_problem* p);
RKNQ_API int rknq_problem_has_reference(const rknq_problem* p);
RKNQ_API rknq_status rknq_problem_reference(const rknq_problem* p, double x, double* y,
                                            double* yprime);

/* ---- integration --------------------------------------------------- */

typedef struct rknq_tolerance {
    double tol_local;
    double tol_global; /* HUGE_VAL disables quenching */
    rknq_norm_rule norm;
} rknq_tolerance;

/* Adaptive pair integration (local extrapolation); high order must be
 * low order + 1. h0 <= 0 selects the default (x_end - x0)/1000. */
RKNQ_API rknq_status rknq_integrate_local(const rknq_tableau* low, const rknq_tableau* high,
                                          const rknq_problem* p, rknq_tolerance tol, double x_end,
                                          double h0, rknq_trajectory** out);

/* Pair integration plus an order-z tracker chain on the same nodes;
 * nodes whose estimated global error exceeds tol.tol_global are
 * replaced by the tracker state (position and velocity). */
RKNQ_API rknq_status rknq_integrate_quenched(const rknq_tableau* low, const rknq_tableau* high,
                                             const rknq_tableau* tracker, const rknq_problem* p,
                                             rknq_tolerance tol, double x_end, double h0,
                                             rknq_trajectory** out);

/* Fixed-step single-method integration; the last step is clipped. */
RKNQ_API rknq_status rknq_integrate_fixed(const rknq_tableau* t, const rknq_problem* p, double h,
                                          double x_end, rknq_norm_rule norm,
                                          rknq_trajectory** out);

RKNQ_API void rknq_trajectory_destroy(rknq_trajectory* tr);

RKNQ_API long rknq_trajectory_node_count(const rknq_trajectory* tr);
RKNQ_API int rknq_trajectory_dim(const rknq_trajectory* tr);

/* pos and vel receive dim values each. */
RKNQ_API rknq_status rknq_trajectory_node_state(const rknq_trajectory* tr, long i, double* x,
                                                double* pos, double* vel);

/* Unavailable quantities come back as NaN: h and err_local at node 0
 * and on fixed runs, err_global_est without a tracker chain, err_true
 * without a reference solution. Any output pointer may be NULL. */
RKNQ_API rknq_status rknq_trajectory_node_errors(const rknq_trajectory* tr, long i, double* h,
                                                 double* err_local, double* err_global_est,
                                                 double* err_true, int* quenched);

typedef struct rknq_run_summary {
    long node_count;
    long steps_accepted;
    long steps_rejected;
    long quench_count;
    double max_global_err_est; /* NaN when no tracker chain ran */
    double max_true_err;       /* NaN when the problem has no reference */
    long f_evals_working;      /* pair or single-method chain */
    long f_evals_tracker;
} rknq_run_summary;

RKNQ_API rknq_status rknq_trajectory_summary(const rknq_trajectory* tr, rknq_run_summary* out);

/* ---- diagnostics ---------------------------------------------------- */

typedef struct rknq_convergence_row {
    double h;
    /* max-norm position error at x_end scaled by the solution magnitude
     * max(1, max_j |y_j|) */
    double err;
    int at_floor;
    double slope; /* vs the previous row; NaN when absent */
    int has_slope;
} rknq_convergence_row;

/* Fixed-step convergence study over a descending h list; rows must hold
 * count entries. Requires a problem with a reference solution. */
RKNQ_API rknq_status rknq_convergence_study(const rknq_tableau* t, const rknq_problem* p,
                                            const double* h_list, int count, double x_end,
                                            rknq_convergence_row* rows);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RKNQ_H */
