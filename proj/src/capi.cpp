#include "uavplan.h"

#include <cstring>
#include <string>

#include "runner.hpp"
#include "scenario.hpp"

struct up_scenario {
    uavplan::Scenario s;
};

struct up_result {
    uavplan::RunReport report;
    int num_users = 0;
    int num_uavs = 0;
    int slots = 0;
    std::vector<double> slot_times;
};

namespace {

thread_local std::string g_last_error;

up_status fail(up_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
up_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const uavplan::ParseError& e) {
        return fail(UP_ERR_PARSE, e.what());
    } catch (const uavplan::ValidationError& e) {
        return fail(UP_ERR_VALIDATION, e.what());
    } catch (const uavplan::InfeasibleError& e) {
        return fail(UP_ERR_INFEASIBLE, e.what());
    } catch (const std::exception& e) {
        return fail(UP_ERR_INTERNAL, e.what());
    }
}

} // namespace

extern "C" {

const char* up_status_string(up_status status) {
    switch (status) {
        case UP_OK: return "ok";
        case UP_ERR_ARGUMENT: return "invalid argument";
        case UP_ERR_PARSE: return "parse error";
        case UP_ERR_VALIDATION: return "validation error";
        case UP_ERR_INFEASIBLE: return "infeasible";
        case UP_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* up_last_error(void) { return g_last_error.c_str(); }

void up_options_init(up_options* opts) {
    if (!opts) return;
    const uavplan::SolverOptions d;
    opts->epsilon = d.epsilon;
    opts->max_outer_iters = d.max_outer_iters;
    opts->max_sca_iters = d.max_sca_iters;
    opts->line_search_tol_pos = d.line_search_tol_pos;
    opts->line_search_tol_time = d.line_search_tol_time;
    opts->power_solver_tol = d.power_solver_tol;
}

up_status up_scenario_load(const char* path, up_scenario** out) {
    if (!path || !out) return fail(UP_ERR_ARGUMENT, "null path or output pointer");
    return guarded([&] {
        auto* h = new up_scenario{uavplan::load_scenario(path)};
        *out = h;
        return UP_OK;
    });
}

up_status up_scenario_random(uint64_t seed, int users, int uavs, double area,
                             up_scenario** out) {
    if (!out) return fail(UP_ERR_ARGUMENT, "null output pointer");
    return guarded([&] {
        auto* h = new up_scenario{uavplan::random_scenario(seed, users, uavs, area)};
        *out = h;
        return UP_OK;
    });
}

up_status up_scenario_save(const up_scenario* s, const char* path) {
    if (!s || !path) return fail(UP_ERR_ARGUMENT, "null scenario or path");
    return guarded([&] {
        uavplan::save_scenario(s->s, path);
        return UP_OK;
    });
}

up_status up_scenario_set_slots(up_scenario* s, int slots) {
    if (!s) return fail(UP_ERR_ARGUMENT, "null scenario");
    if (slots < 2) return fail(UP_ERR_VALIDATION, "slots must be at least 2");
    s->s.slots = slots;
    return UP_OK;
}

void up_scenario_free(up_scenario* s) { delete s; }

int up_scenario_num_users(const up_scenario* s) { return s ? s->s.num_users() : 0; }
int up_scenario_num_uavs(const up_scenario* s) { return s ? s->s.num_uavs() : 0; }
int up_scenario_slots(const up_scenario* s) { return s ? s->s.slots : 0; }
double up_scenario_period(const up_scenario* s) { return s ? s->s.period : 0.0; }

up_status up_scenario_user_id(const up_scenario* s, int user_index, int* out) {
    if (!s || !out) return fail(UP_ERR_ARGUMENT, "null scenario or output");
    if (user_index < 0 || user_index >= s->s.num_users())
        return fail(UP_ERR_ARGUMENT, "user index out of range");
    *out = s->s.users[user_index].id;
    return UP_OK;
}

up_status up_scenario_uav_id(const up_scenario* s, int uav_index, int* out) {
    if (!s || !out) return fail(UP_ERR_ARGUMENT, "null scenario or output");
    if (uav_index < 0 || uav_index >= s->s.num_uavs())
        return fail(UP_ERR_ARGUMENT, "uav index out of range");
    *out = s->s.uavs[uav_index].id;
    return UP_OK;
}

up_status up_scenario_digest(const up_scenario* s, uint64_t* out) {
    if (!s || !out) return fail(UP_ERR_ARGUMENT, "null scenario or output");
    *out = uavplan::scenario_digest(s->s);
    return UP_OK;
}

up_status up_solve(const up_scenario* s, up_scheme scheme, const up_options* opts,
                   up_result** out) {
    if (!s || !out) return fail(UP_ERR_ARGUMENT, "null scenario or output");
    uavplan::Scheme sch;
    switch (scheme) {
        case UP_SCHEME_JOINT: sch = uavplan::Scheme::joint; break;
        case UP_SCHEME_POWER_ONLY: sch = uavplan::Scheme::power_only; break;
        case UP_SCHEME_TRAJECTORY_ONLY: sch = uavplan::Scheme::trajectory_only; break;
        case UP_SCHEME_FIXED: sch = uavplan::Scheme::fixed; break;
        default: return fail(UP_ERR_ARGUMENT, "unknown scheme");
    }
    uavplan::SolverOptions options;
    if (opts) {
        options.epsilon = opts->epsilon;
        options.max_outer_iters = opts->max_outer_iters;
        options.max_sca_iters = opts->max_sca_iters;
        options.line_search_tol_pos = opts->line_search_tol_pos;
        options.line_search_tol_time = opts->line_search_tol_time;
        options.power_solver_tol = opts->power_solver_tol;
    }
    return guarded([&] {
        auto* r = new up_result;
        r->report = uavplan::run_scheme(s->s, sch, options);
        r->num_users = s->s.num_users();
        r->num_uavs = s->s.num_uavs();
        r->slots = s->s.slots;
        r->slot_times = uavplan::TimeGrid::make(s->s.period, s->s.slots).midpoints;
        *out = r;
        return UP_OK;
    });
}

void up_result_free(up_result* r) { delete r; }

double up_result_final_eta(const up_result* r) { return r ? r->report.final_eta : 0.0; }
double up_result_wall_time_s(const up_result* r) { return r ? r->report.wall_time_s : 0.0; }

int up_result_termination(const up_result* r) {
    if (!r) return UP_TERM_MAX_ITERS;
    switch (r->report.state.termination_reason) {
        case uavplan::Termination::threshold: return UP_TERM_THRESHOLD;
        case uavplan::Termination::max_iters: return UP_TERM_MAX_ITERS;
        case uavplan::Termination::stalled: return UP_TERM_STALLED;
    }
    return UP_TERM_MAX_ITERS;
}

int up_result_eta_history_len(const up_result* r) {
    return r ? static_cast<int>(r->report.eta_history.size()) : 0;
}

up_status up_result_eta_history(const up_result* r, double* out, int len) {
    if (!r || !out) return fail(UP_ERR_ARGUMENT, "null result or buffer");
    if (len < static_cast<int>(r->report.eta_history.size()))
        return fail(UP_ERR_ARGUMENT, "buffer too small for eta history");
    std::memcpy(out, r->report.eta_history.data(),
                r->report.eta_history.size() * sizeof(double));
    return UP_OK;
}

up_status up_result_user_rates(const up_result* r, double* out, int len) {
    if (!r || !out) return fail(UP_ERR_ARGUMENT, "null result or buffer");
    if (len < r->num_users) return fail(UP_ERR_ARGUMENT, "buffer too small for user rates");
    for (int k = 0; k < r->num_users; ++k) out[k] = r->report.user_rates[k];
    return UP_OK;
}

up_status up_result_serving_uav(const up_result* r, int user_index, int* out) {
    if (!r || !out) return fail(UP_ERR_ARGUMENT, "null result or output");
    if (user_index < 0 || user_index >= r->num_users)
        return fail(UP_ERR_ARGUMENT, "user index out of range");
    *out = r->report.pairing.serving[user_index];
    return UP_OK;
}

up_status up_result_slot_times(const up_result* r, double* out, int len) {
    if (!r || !out) return fail(UP_ERR_ARGUMENT, "null result or buffer");
    if (len < r->slots) return fail(UP_ERR_ARGUMENT, "buffer too small for slot times");
    std::memcpy(out, r->slot_times.data(), r->slot_times.size() * sizeof(double));
    return UP_OK;
}

up_status up_result_positions(const up_result* r, int uav_index, double* out, int len) {
    if (!r || !out) return fail(UP_ERR_ARGUMENT, "null result or buffer");
    if (uav_index < 0 || uav_index >= r->num_uavs)
        return fail(UP_ERR_ARGUMENT, "uav index out of range");
    if (len < r->slots * 3) return fail(UP_ERR_ARGUMENT, "buffer too small for positions");
    const auto& pos = r->report.positions[uav_index];
    for (int n = 0; n < r->slots; ++n)
        for (int c = 0; c < 3; ++c) out[n * 3 + c] = pos(n, c);
    return UP_OK;
}

up_status up_result_slot_rates(const up_result* r, int user_index, double* out, int len) {
    if (!r || !out) return fail(UP_ERR_ARGUMENT, "null result or buffer");
    if (user_index < 0 || user_index >= r->num_users)
        return fail(UP_ERR_ARGUMENT, "user index out of range");
    if (len < r->slots) return fail(UP_ERR_ARGUMENT, "buffer too small for slot rates");
    for (int n = 0; n < r->slots; ++n) out[n] = r->report.slot_rates(user_index, n);
    return UP_OK;
}

} // extern "C"
