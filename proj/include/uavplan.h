/* uavplan C API: multi-UAV hover-fly-hover mission planning.
 *
 * Handles are opaque; every function that can fail returns an up_status.
 * On error, up_last_error() returns a thread-local message describing the
 * failure. Buffers are caller-allocated; query sizes via the scenario /
 * result accessors before fetching arrays.
 */
#ifndef UAVPLAN_H
#define UAVPLAN_H

#include <stdint.h>

#if defined(_WIN32)
#define UAVPLAN_API __declspec(dllexport)
#else
#define UAVPLAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct up_scenario up_scenario;
typedef struct up_result up_result;

typedef enum up_status {
    UP_OK = 0,
    UP_ERR_ARGUMENT = 1,   /* null pointer, bad enum value, bad buffer size */
    UP_ERR_PARSE = 2,      /* malformed scenario file */
    UP_ERR_VALIDATION = 3, /* scenario violates a model invariant */
    UP_ERR_INFEASIBLE = 4, /* initialization or solve cannot satisfy constraints */
    UP_ERR_INTERNAL = 5
} up_status;

typedef enum up_scheme {
    UP_SCHEME_JOINT = 0,
    UP_SCHEME_POWER_ONLY = 1,
    UP_SCHEME_TRAJECTORY_ONLY = 2,
    UP_SCHEME_FIXED = 3
} up_scheme;

typedef enum up_termination {
    UP_TERM_THRESHOLD = 0,
    UP_TERM_MAX_ITERS = 1,
    UP_TERM_STALLED = 2
} up_termination;

typedef struct up_options {
    double epsilon;              /* convergence threshold on min-rate increase */
    int max_outer_iters;
    int max_sca_iters;           /* inner SCA rounds of the power subproblem */
    double line_search_tol_pos;  /* meters */
    double line_search_tol_time; /* seconds */
    double power_solver_tol;
} up_options;

UAVPLAN_API const char* up_status_string(up_status status);
UAVPLAN_API const char* up_last_error(void);

UAVPLAN_API void up_options_init(up_options* opts);

UAVPLAN_API up_status up_scenario_load(const char* path, up_scenario** out);
UAVPLAN_API up_status up_scenario_random(uint64_t seed, int users, int uavs, double area,
                                         up_scenario** out);
UAVPLAN_API up_status up_scenario_save(const up_scenario* s, const char* path);
UAVPLAN_API up_status up_scenario_set_slots(up_scenario* s, int slots);
UAVPLAN_API void up_scenario_free(up_scenario* s);

UAVPLAN_API int up_scenario_num_users(const up_scenario* s);
UAVPLAN_API int up_scenario_num_uavs(const up_scenario* s);
UAVPLAN_API int up_scenario_slots(const up_scenario* s);
UAVPLAN_API double up_scenario_period(const up_scenario* s);
UAVPLAN_API up_status up_scenario_user_id(const up_scenario* s, int user_index, int* out);
UAVPLAN_API up_status up_scenario_uav_id(const up_scenario* s, int uav_index, int* out);
UAVPLAN_API up_status up_scenario_digest(const up_scenario* s, uint64_t* out);

UAVPLAN_API up_status up_solve(const up_scenario* s, up_scheme scheme,
                               const up_options* opts, up_result** out);
UAVPLAN_API void up_result_free(up_result* r);

UAVPLAN_API double up_result_final_eta(const up_result* r);
UAVPLAN_API double up_result_wall_time_s(const up_result* r);
UAVPLAN_API int up_result_termination(const up_result* r);
UAVPLAN_API int up_result_eta_history_len(const up_result* r);
UAVPLAN_API up_status up_result_eta_history(const up_result* r, double* out, int len);

/* Per-user time-averaged rates, length = number of users. */
UAVPLAN_API up_status up_result_user_rates(const up_result* r, double* out, int len);
/* Serving UAV array index for one user. */
UAVPLAN_API up_status up_result_serving_uav(const up_result* r, int user_index, int* out);
/* Slot-midpoint times, length = slots. */
UAVPLAN_API up_status up_result_slot_times(const up_result* r, double* out, int len);
/* One UAV's sampled positions, row-major [slot][xyz], len = slots * 3. */
UAVPLAN_API up_status up_result_positions(const up_result* r, int uav_index, double* out,
                                          int len);
/* One user's per-slot instantaneous rates, length = slots. */
UAVPLAN_API up_status up_result_slot_rates(const up_result* r, int user_index, double* out,
                                           int len);

#ifdef __cplusplus
}
#endif

#endif /* UAVPLAN_H */
