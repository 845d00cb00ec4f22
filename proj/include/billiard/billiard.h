#ifndef BILLIARD_BILLIARD_H
#define BILLIARD_BILLIARD_H

/* C API for the billiard library. All functions return a bil_status; 0 means
 * success. On failure, bil_last_error() returns a thread-local message.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with bil_string_free(). */

#ifdef __cplusplus
extern "C" {
#endif

typedef int bil_status;

enum {
  BIL_OK = 0,
  BIL_SPEC_ERROR = 1,        /* bad domain spec / not convex */
  BIL_BAD_ARGUMENT = 2,      /* precondition violation */
  BIL_TANGENTIAL_STATE = 3,
  BIL_NO_CONVERGENCE = 4,
  BIL_NOT_ONE_ROTATION = 5,
  BIL_WRONG_COUNT = 6,
  BIL_NOT_CAUSTIC_FAMILY = 7,
  BIL_CROSS_CHECK_FAILED = 8,
  BIL_NEGATIVE_RADICAND = 9,
  BIL_UNDER_RESOLVED = 10,
  BIL_DEGENERATE_FIT = 11,
  BIL_ORIGIN_OUTSIDE = 12,
  BIL_COORDINATE_OUT_OF_RANGE = 13,
  BIL_INTERNAL = 14
};

/* Thread-local message describing the most recent failure on this thread.
 * Valid until the next failing call; never NULL. */
const char* bil_last_error(void);

/* Release a string returned through a char** out-parameter. */
void bil_string_free(char* s);

/* Worker threads used by parallel sections (default: BILLIARD_THREADS env
 * var, then hardware concurrency). n <= 0 is ignored. */
void bil_set_threads(int n);

/* ------------------------------------------------------------- domains -- */

typedef struct bil_domain bil_domain;

bil_status bil_domain_ellipse(double a, double b, bil_domain** out);

/* JSON spec: {"kind":"ellipse","a":2.0,"b":1.0} or
 * {"kind":"fourier","R":1.0,"cos":[...],"sin":[...]} */
bil_status bil_domain_from_json(const char* json_text, bil_domain** out);
bil_status bil_domain_from_file(const char* path, bil_domain** out);

void bil_domain_free(bil_domain* d);

/* Round-trippable domain spec. */
bil_status bil_domain_spec_json(const bil_domain* d, char** json_out);

bil_status bil_domain_length(const bil_domain* d, double* out);
bil_status bil_domain_area(const bil_domain* d, double* out);
bil_status bil_domain_centroid(const bil_domain* d, double* x, double* y);

/* ------------------------------------------------------------ commands -- */

/* Orbit trace from (s0, theta0), n bounces. CSV columns:
 * k,s_k,theta_k,x_k,alpha_k,point_x,point_y  (x,alpha are Lazutkin). */
bil_status bil_orbit_trace_csv(const bil_domain* d, double s0, double theta0,
                               int n, char** csv_out);

/* Loop function table for j reflections on a grid_n-point uniform grid.
 * CSV columns: q,psi,omega1,omega2,domega1_dqprime. */
bil_status bil_loop_function_csv(const bil_domain* d, int j, int grid_n,
                                 char** csv_out);

/* Periodic orbits of rotation number 1/j: critical points of the loop
 * function, extrema [t_j, T_j], caustic flag. JSON report. */
bil_status bil_periodic_json(const bil_domain* d, int j, int nseeds,
                             char** json_out);

/* Wave invariant c_j. origin_x/y is the base point for X(q); pass
 * use_centroid != 0 to use the area centroid instead. force != 0 evaluates
 * the invariant even when the loop function is non-constant. */
bil_status bil_invariant_json(const bil_domain* d, int j, double origin_x,
                              double origin_y, int use_centroid, int quad_n,
                              int force, char** json_out);

/* Singularity profile c_j Re{e^{i pi/4} (t - L_j - i eps)^{-3/2}} sampled on
 * n_points over [L_j - half_width, L_j + half_width]. CSV columns: t,value.
 * Runs the invariant computation internally (same origin handling). */
bil_status bil_singularity_profile_csv(const bil_domain* d, int j,
                                       double origin_x, double origin_y,
                                       int use_centroid, int quad_n, int force,
                                       double eps, double half_width,
                                       int n_points, char** csv_out);

/* Elliptic-integral oracle for the ellipse (a, b): caustic parameter zeta_j,
 * G, and the closed-form c_j in all radicand variants. JSON report. */
bil_status bil_ellipse_oracle_json(double a, double b, int j, int quad_n,
                                   char** json_out);

/* Stationary-phase order check options. Zero-initialize then override, or
 * call bil_trace_opts_default(); zeros mean "auto". */
typedef struct bil_trace_opts {
  double m;          /* symbol order under test (default 0.5) */
  int n_lambda;      /* lambda grid points (default 12) */
  double lambda_min; /* degenerate-regime lambda range (default [50, 400]) */
  double lambda_max;
  int grid_n;        /* loop-function grid (0 = auto) */
  double roll;       /* window roll-off width (0 = auto) */
  double flat;       /* window flat-top width (0 = auto) */
  double eta_span;   /* eta integration half-span (0 = auto) */
  int n_eta;         /* eta quadrature nodes (0 = auto) */
} bil_trace_opts;

void bil_trace_opts_default(bil_trace_opts* opts);

/* Windowed wave-trace order check near the length L_j. json_out gets the
 * OrderFit report with verdict; csv_out (optional, may be NULL) gets the
 * lambda,re,im,abs table. opts may be NULL for defaults. */
bil_status bil_trace_check(const bil_domain* d, int j,
                           const bil_trace_opts* opts, char** json_out,
                           char** csv_out);

/* Acceptance suites. suite: "all", "circle", or a single suite name
 * (circle-closed-forms, circle-wave-invariant, ellipse-cross-pipeline,
 * eight-orbits, lazutkin-defect, angle-band, stationary-phase-order,
 * poncelet, ft-identity, properties). table_out gets the PASS/FAIL table;
 * *all_pass is set to 1 iff every check passed. */
bil_status bil_verify(const char* suite, int* all_pass, char** table_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BILLIARD_BILLIARD_H */
