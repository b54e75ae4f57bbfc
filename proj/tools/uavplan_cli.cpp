// Command-line front end for the uavplan shared library. Loads or
// generates a scenario, runs one or all comparison schemes, and writes
// plot-ready CSV traces plus a structured text report. Output files are
// deterministic given the flags; wall time goes to stderr only.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavplan.h"

namespace {

constexpr int kExitBadFlags = 2;
constexpr int kExitLoadFailure = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitInternal = 5;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int status_exit_code(up_status st) {
    switch (st) {
        case UP_OK: return 0;
        case UP_ERR_ARGUMENT: return kExitBadFlags;
        case UP_ERR_PARSE:
        case UP_ERR_VALIDATION: return kExitLoadFailure;
        case UP_ERR_INFEASIBLE: return kExitInfeasible;
        default: return kExitInternal;
    }
}

struct ResultView {
    up_result* r = nullptr;
    ~ResultView() { up_result_free(r); }
};

struct ScenarioView {
    up_scenario* s = nullptr;
    ~ScenarioView() { up_scenario_free(s); }
};

const char* scheme_names[] = {"joint", "power-only", "trajectory-only", "fixed"};

int write_run_outputs(const up_scenario* scen, up_scheme scheme, const up_result* res,
                      const up_options& opts, const std::string& out_dir) {
    const int K = up_scenario_num_users(scen);
    const int M = up_scenario_num_uavs(scen);
    const int N = up_scenario_slots(scen);
    const char* name = scheme_names[scheme];

    std::vector<double> times(N);
    up_result_slot_times(res, times.data(), N);

    std::vector<double> user_rates(K);
    up_result_user_rates(res, user_rates.data(), K);

    const int hist_len = up_result_eta_history_len(res);
    std::vector<double> history(hist_len);
    up_result_eta_history(res, history.data(), hist_len);

    uint64_t digest = 0;
    up_scenario_digest(scen, &digest);

    std::ostringstream report;
    report << "scheme: " << name << "\n";
    report << "final_eta_bps_hz: " << fmt(up_result_final_eta(res)) << "\n";
    report << "eta_history:";
    for (double e : history) report << " " << fmt(e);
    report << "\n";
    report << "per_user_rates_bps_hz:\n";
    for (int k = 0; k < K; ++k) {
        int uid = 0;
        up_scenario_user_id(scen, k, &uid);
        report << "  user " << uid << ": " << fmt(user_rates[k]) << "\n";
    }
    const char* term[] = {"threshold", "max_iters", "stalled"};
    report << "termination: " << term[up_result_termination(res)] << "\n";
    report << "options: epsilon=" << fmt(opts.epsilon)
           << " max_outer_iters=" << opts.max_outer_iters
           << " max_sca_iters=" << opts.max_sca_iters
           << " line_search_tol_pos=" << fmt(opts.line_search_tol_pos)
           << " line_search_tol_time=" << fmt(opts.line_search_tol_time)
           << " power_solver_tol=" << fmt(opts.power_solver_tol) << "\n";
    char dig[32];
    std::snprintf(dig, sizeof(dig), "%016" PRIx64, digest);
    report << "scenario_digest: " << dig << "\n";

    if (out_dir.empty()) {
        std::cout << report.str();
        return 0;
    }

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    {
        std::ofstream f(dir / (std::string(name) + "_report.txt"));
        f << report.str();
    }
    {
        std::ofstream f(dir / (std::string(name) + "_trajectory.csv"));
        f << "slot,time_s,uav_id,x_m,y_m,z_m\n";
        std::vector<double> pos(static_cast<size_t>(N) * 3);
        for (int m = 0; m < M; ++m) {
            up_result_positions(res, m, pos.data(), N * 3);
            int uid = 0;
            up_scenario_uav_id(scen, m, &uid);
            for (int n = 0; n < N; ++n) {
                f << n << "," << fmt(times[n]) << "," << uid << "," << fmt(pos[n * 3]) << ","
                  << fmt(pos[n * 3 + 1]) << "," << fmt(pos[n * 3 + 2]) << "\n";
            }
        }
    }
    {
        std::ofstream f(dir / (std::string(name) + "_rates.csv"));
        f << "slot,user_id,serving_uav,rate_bps_hz\n";
        std::vector<double> rates(N);
        for (int k = 0; k < K; ++k) {
            up_result_slot_rates(res, k, rates.data(), N);
            int uid = 0, serving_idx = 0, serving_id = 0;
            up_scenario_user_id(scen, k, &uid);
            up_result_serving_uav(res, k, &serving_idx);
            up_scenario_uav_id(scen, serving_idx, &serving_id);
            for (int n = 0; n < N; ++n)
                f << n << "," << uid << "," << serving_id << "," << fmt(rates[n]) << "\n";
        }
    }
    return 0;
}

bool parse_range(const std::string& text, int& lo, int& hi) {
    const auto pos = text.find("..");
    if (pos == std::string::npos) return false;
    try {
        lo = std::stoi(text.substr(0, pos));
        hi = std::stoi(text.substr(pos + 2));
    } catch (...) {
        return false;
    }
    return lo >= 1 && hi >= lo;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uavplan: multi-UAV hover-fly-hover mission planner"};

    std::string scenario_path, scheme_arg = "joint", out_dir;
    bool use_random = false, do_sweep = false;
    std::uint64_t seed = 0;
    int users = 8, uavs = 2;
    double area = 1000.0;
    int slots = -1, max_iters = -1, seeds = 5;
    double epsilon = -1.0;
    std::string users_range = "1..8", uavs_range = "1..2";

    app.add_option("--scenario", scenario_path, "scenario file path");
    app.add_flag("--random", use_random, "generate a random scenario");
    app.add_option("--seed", seed, "random scenario seed");
    app.add_option("--users", users, "random scenario user count")
        ->check(CLI::PositiveNumber);
    app.add_option("--uavs", uavs, "random scenario UAV count")
        ->check(CLI::PositiveNumber);
    app.add_option("--area", area, "random scenario square side, meters");
    app.add_option("--scheme", scheme_arg, "joint|power-only|trajectory-only|fixed|all");
    app.add_option("--slots", slots, "time discretization override");
    app.add_option("--epsilon", epsilon, "convergence threshold override");
    app.add_option("--max-iters", max_iters, "outer iteration cap override");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--sweep", do_sweep, "run the (users, uavs) sweep table");
    app.add_option("--users-range", users_range, "sweep user range a..b");
    app.add_option("--uavs-range", uavs_range, "sweep UAV range a..b");
    app.add_option("--seeds", seeds, "sweep seeds per cell");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadFlags;
    }

    if (!do_sweep && scenario_path.empty() && !use_random) {
        std::cerr << "error: need --scenario <path> or --random\n";
        return kExitBadFlags;
    }
    if (!scenario_path.empty() && use_random) {
        std::cerr << "error: --scenario and --random are mutually exclusive\n";
        return kExitBadFlags;
    }

    up_options opts;
    up_options_init(&opts);
    if (epsilon > 0) opts.epsilon = epsilon;
    if (max_iters > 0) opts.max_outer_iters = max_iters;

    auto configure = [&](up_scenario* s) -> up_status {
        if (slots > 0) return up_scenario_set_slots(s, slots);
        return UP_OK;
    };

    if (do_sweep) {
        int k_lo, k_hi, m_lo, m_hi;
        if (!parse_range(users_range, k_lo, k_hi) || !parse_range(uavs_range, m_lo, m_hi)) {
            std::cerr << "error: ranges must be a..b with 1 <= a <= b\n";
            return kExitBadFlags;
        }
        if (seeds < 1) {
            std::cerr << "error: --seeds must be at least 1\n";
            return kExitBadFlags;
        }
        std::ostringstream table;
        table << "uavs,users,mean_eta_bps_hz,mean_user_rate_bps_hz\n";
        for (int m = m_lo; m <= m_hi; ++m) {
            for (int k = k_lo; k <= k_hi; ++k) {
                double eta_sum = 0.0, rate_sum = 0.0;
                for (int sd = 0; sd < seeds; ++sd) {
                    ScenarioView scen;
                    up_status st = up_scenario_random(seed + sd, k, m, area, &scen.s);
                    if (st == UP_OK) st = configure(scen.s);
                    ResultView res;
                    if (st == UP_OK) st = up_solve(scen.s, UP_SCHEME_JOINT, &opts, &res.r);
                    if (st != UP_OK) {
                        std::cerr << "error: " << up_last_error() << "\n";
                        return status_exit_code(st);
                    }
                    eta_sum += up_result_final_eta(res.r);
                    std::vector<double> rates(k);
                    up_result_user_rates(res.r, rates.data(), k);
                    double mean = 0.0;
                    for (double v : rates) mean += v;
                    rate_sum += mean / k;
                }
                table << m << "," << k << "," << fmt(eta_sum / seeds) << ","
                      << fmt(rate_sum / seeds) << "\n";
            }
        }
        std::cout << table.str();
        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            std::ofstream f(std::filesystem::path(out_dir) / "sweep.csv");
            f << table.str();
        }
        return 0;
    }

    ScenarioView scen;
    up_status st = use_random ? up_scenario_random(seed, users, uavs, area, &scen.s)
                              : up_scenario_load(scenario_path.c_str(), &scen.s);
    if (st != UP_OK) {
        std::cerr << "error: " << up_last_error() << "\n";
        return status_exit_code(st);
    }
    if ((st = configure(scen.s)) != UP_OK) {
        std::cerr << "error: " << up_last_error() << "\n";
        return status_exit_code(st);
    }

    std::vector<up_scheme> schemes;
    if (scheme_arg == "all") {
        schemes = {UP_SCHEME_JOINT, UP_SCHEME_POWER_ONLY, UP_SCHEME_TRAJECTORY_ONLY,
                   UP_SCHEME_FIXED};
    } else {
        bool found = false;
        for (int i = 0; i < 4; ++i) {
            if (scheme_arg == scheme_names[i]) {
                schemes = {static_cast<up_scheme>(i)};
                found = true;
            }
        }
        if (!found) {
            std::cerr << "error: unknown scheme '" << scheme_arg << "'\n";
            return kExitBadFlags;
        }
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::string path =
            (std::filesystem::path(out_dir) / "scenario.json").string();
        if ((st = up_scenario_save(scen.s, path.c_str())) != UP_OK) {
            std::cerr << "error: " << up_last_error() << "\n";
            return status_exit_code(st);
        }
    }

    for (up_scheme scheme : schemes) {
        ResultView res;
        if ((st = up_solve(scen.s, scheme, &opts, &res.r)) != UP_OK) {
            std::cerr << "error: " << up_last_error() << "\n";
            return status_exit_code(st);
        }
        write_run_outputs(scen.s, scheme, res.r, opts, out_dir);
        std::cerr << scheme_names[scheme] << ": eta=" << fmt(up_result_final_eta(res.r))
                  << " wall_time_s=" << fmt(up_result_wall_time_s(res.r)) << "\n";
    }
    return 0;
}
