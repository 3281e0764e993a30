/* taxdyn - Cournot duopoly with tax evasion: equilibrium, stability and
 * delay-induced Hopf bifurcation analysis.
 *
 * C interface to the taxdyn shared library. All functions return a
 * td_status; outputs are written through pointers. Variable-length
 * results (trajectories, parameter sweeps) are returned as opaque
 * handles with accessor and free functions. On failure a thread-local
 * message is available through td_last_error().
 */
#ifndef TAXDYN_H
#define TAXDYN_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(TAXDYN_BUILD)
#define TAXDYN_API __declspec(dllexport)
#else
#define TAXDYN_API __declspec(dllimport)
#endif
#else
#define TAXDYN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum td_status {
  TD_OK = 0,
  TD_ERR_INVALID_PARAM = 1,     /* parameter invariant violated */
  TD_ERR_PRICE_SINGULARITY = 2, /* price evaluated at nonpositive total output */
  TD_ERR_NO_CONVERGENCE = 3,    /* iterative root solve did not converge */
  TD_ERR_DEGENERATE = 4,        /* degenerate crossing or transversality */
  TD_ERR_INVALID_ARGUMENT = 5,  /* null pointer, bad index or bad size */
  TD_ERR_INTERNAL = 6
} td_status;

/* Static name of a status code, e.g. "TD_ERR_INVALID_PARAM". */
TAXDYN_API const char *td_status_name(td_status status);

/* Thread-local message describing the most recent failure in this thread.
 * Cleared on every successful API call; never NULL. */
TAXDYN_API const char *td_last_error(void);

/* Economic parameters of the game: detection probability q in (0,1],
 * penalty scale s >= 1, ad valorem tax rate t1 in (0,1), marginal
 * costs c1, c2 > 0. */
typedef struct td_params {
  double q;
  double s;
  double t1;
  double c1;
  double c2;
} td_params;

/* Gradient-adjustment speeds of the dynamic system, all > 0. */
typedef struct td_speeds {
  double k1;
  double k2;
  double h1;
  double h2;
} td_speeds;

/* Outputs x1, x2 and declared revenues z1, z2. */
typedef struct td_state {
  double x1;
  double x2;
  double z1;
  double z2;
} td_state;

TAXDYN_API td_status td_params_validate(const td_params *params);
TAXDYN_API td_status td_speeds_validate(const td_speeds *speeds);

/* ---- static model ------------------------------------------------- */

typedef struct td_equilibrium_report {
  td_state state;         /* closed-form stationary point */
  double evaded;          /* common evaded revenue (1-q)/(q s) */
  int feasible;           /* both declared revenues nonnegative */
  double profit1;
  double profit2;
  double foc_residual[4]; /* first-order conditions evaluated at state */
} td_equilibrium_report;

typedef struct td_feasibility_report {
  int feasible;
  int attainable;  /* 0 when q s + q - 1 <= 0: nonnegative declarations
                      are impossible at any c2 */
  double c2_lower; /* feasibility bounds on c2 given the other params */
  double c2_upper;
} td_feasibility_report;

TAXDYN_API td_status td_equilibrium(const td_params *params,
                                    td_equilibrium_report *report);

TAXDYN_API td_status td_feasibility(const td_params *params,
                                    td_feasibility_report *report);

/* Expected profit of firm 1 or 2 at an arbitrary state. */
TAXDYN_API td_status td_profit(const td_params *params, const td_state *state,
                               int firm, double *value);

/* Residuals of the four first-order conditions
 * (dP1/dx1, dP2/dx2, dP1/dz1, dP2/dz2) at an arbitrary state. */
TAXDYN_API td_status td_foc_residual(const td_params *params,
                                     const td_state *state,
                                     double residual[4]);

/* ---- dynamics ----------------------------------------------------- */

/* Right-hand side (x1', x2', z1', z2') of the undelayed system. */
TAXDYN_API td_status td_ode_rhs(const td_params *params,
                                const td_speeds *speeds,
                                const td_state *state, double deriv[4]);

/* Right-hand side of the delayed system; x1_delayed is the leader output
 * observed tau time units earlier. */
TAXDYN_API td_status td_dde_rhs(const td_params *params,
                                const td_speeds *speeds,
                                const td_state *state, double x1_delayed,
                                double deriv[4]);

typedef struct td_trajectory td_trajectory; /* opaque */

/* Integrate from t = 0 to t_end (fixed-step classical 4th order; for
 * tau > 0 the step is snapped to an integer fraction of tau and the
 * history is the constant *initial state). tau = 0 gives the undelayed
 * system. On success *out must be released with td_trajectory_free.
 * A trajectory that hit a price singularity is truncated and flagged,
 * not failed. */
TAXDYN_API td_status td_simulate(const td_params *params,
                                 const td_speeds *speeds,
                                 const td_state *initial, double tau,
                                 double step, double t_end,
                                 td_trajectory **out);

TAXDYN_API size_t td_trajectory_size(const td_trajectory *traj);
TAXDYN_API double td_trajectory_step(const td_trajectory *traj);
TAXDYN_API int td_trajectory_truncated(const td_trajectory *traj);
TAXDYN_API td_status td_trajectory_node(const td_trajectory *traj,
                                        size_t index, double *time,
                                        td_state *state);
TAXDYN_API void td_trajectory_free(td_trajectory *traj);

typedef enum td_verdict {
  TD_VERDICT_DECAYING = 0,
  TD_VERDICT_SUSTAINED = 1,
  TD_VERDICT_GROWING = 2,
  TD_VERDICT_NONOSCILLATORY = 3
} td_verdict;

typedef struct td_oscillation_report {
  double growth_rate;     /* exponential envelope slope of x1(t) - x1* */
  int verdict;            /* td_verdict */
  size_t extremum_count;  /* extrema found in the trailing window */
} td_oscillation_report;

/* Classify the oscillation of x1 around reference->x1 over the trailing
 * `window` time units of the trajectory. */
TAXDYN_API td_status td_oscillation(const td_trajectory *traj,
                                    const td_state *reference, double window,
                                    td_oscillation_report *report);

/* ---- linear stability at zero delay ------------------------------- */

typedef struct td_stability_report {
  /* Jacobian partial-derivative coefficients, before speed scaling */
  double a10, a01, a001;
  double b10, b01, b001;
  double c10, c01, c001;
  double d10, d01, d001;
  double jacobian[4][4]; /* speed-scaled Jacobian at the stationary state */
  double m43, m42, m41, m40; /* characteristic quartic coefficients */
  double d1, d2, d3, d4;     /* Hurwitz determinant chain */
  int stable;                /* all four determinants positive */
  double eig_re[4], eig_im[4];
} td_stability_report;

TAXDYN_API td_status td_stability(const td_params *params,
                                  const td_speeds *speeds,
                                  td_stability_report *report);

/* ---- delay-induced Hopf bifurcation ------------------------------- */

typedef enum td_classification {
  TD_STABLE_FOR_ALL_DELAYS = 0,
  TD_STABLE_UNTIL_TAU0 = 1,
  TD_UNSTABLE_AT_ZERO_DELAY = 2
} td_classification;

typedef struct td_hopf_report {
  /* quasi-polynomial P(l) + Q(l) e^{-l tau}: quartic part n4*, delayed
     quadratic part n2* */
  double n43, n42, n41, n40;
  double n22, n21, n20;
  double r6, r4, r2, r0;  /* crossing polynomial in w^2 */
  double crossings[4];    /* positive crossing frequencies, ascending */
  int crossing_count;
  int classification;     /* td_classification */
  int has_crossing;       /* omega0/tau0/transversality below are valid */
  double omega0;          /* crossing frequency of the smallest tau0 */
  double tau0;            /* critical delay */
  double transversality;  /* Re(dl/dtau) at the crossing */
  double crossing_residual; /* |P(i w0) + Q(i w0) e^{-i w0 tau0}| */
} td_hopf_report;

TAXDYN_API td_status td_hopf(const td_params *params, const td_speeds *speeds,
                             td_hopf_report *report);

/* ---- static parameter sweep --------------------------------------- */

typedef struct td_sweep td_sweep; /* opaque */

typedef struct td_sweep_entry {
  double s;
  double z1_star;
  double z2_star;
  double p1_star;
  double p2_star;
  int feasible;
} td_sweep_entry;

/* Equilibrium declarations and profits across a grid of penalty scales.
 * Infeasible grid points are carried with feasible = 0, not dropped. */
TAXDYN_API td_status td_sweep_run(const td_params *base,
                                  const double *s_values, size_t count,
                                  td_sweep **out);

TAXDYN_API size_t td_sweep_size(const td_sweep *sweep);
TAXDYN_API td_status td_sweep_row(const td_sweep *sweep, size_t index,
                                  td_sweep_entry *entry);
TAXDYN_API void td_sweep_free(td_sweep *sweep);

#ifdef __cplusplus
}
#endif

#endif /* TAXDYN_H */
