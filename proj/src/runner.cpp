#include "runner.hpp"

#include <chrono>
#include <cmath>

namespace uavplan {

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::joint: return "joint";
        case Scheme::power_only: return "power-only";
        case Scheme::trajectory_only: return "trajectory-only";
        case Scheme::fixed: return "fixed";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "joint") return Scheme::joint;
    if (name == "power-only") return Scheme::power_only;
    if (name == "trajectory-only") return Scheme::trajectory_only;
    if (name == "fixed") return Scheme::fixed;
    throw ValidationError("unknown scheme '" + name + "'");
}

RunReport run_scheme(const Scenario& s, Scheme scheme, const SolverOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const TimeGrid grid = TimeGrid::make(s.period, s.slots);
    const Pairing pairing = assign_users(s);
    SolveState init = default_initialization(s, pairing);

    RunReport report;
    report.scheme = scheme;
    report.options = options;
    report.pairing = pairing;
    report.scenario_digest = scenario_digest(s);

    switch (scheme) {
        case Scheme::joint:
            report.state = block_coordinate_descent(s, pairing, init, options, true, true);
            break;
        case Scheme::power_only:
            report.state = block_coordinate_descent(s, pairing, init, options, false, true);
            break;
        case Scheme::trajectory_only:
            report.state = block_coordinate_descent(s, pairing, init, options, true, false);
            break;
        case Scheme::fixed: {
            report.state = init;
            const double eta = exact_eta(init.trajectories, init.powers, pairing, s, grid);
            report.state.eta_history = {eta};
            report.state.converged = true;
            report.state.termination_reason = Termination::threshold;
            break;
        }
    }

    const SolveState& st = report.state;
    report.eta_history = st.eta_history;
    report.user_rates = average_rates(st.trajectories, st.powers, pairing, s, grid);
    report.final_eta = min_rate(report.user_rates);

    report.positions.reserve(st.trajectories.size());
    for (const auto& tr : st.trajectories)
        report.positions.push_back(sample_positions(tr, grid));

    const GainTensor gains = compute_gains(report.positions, s);
    report.slot_rates.resize(s.num_users(), s.slots);
    for (int k = 0; k < s.num_users(); ++k) {
        const int m = pairing.serving[k];
        for (int n = 0; n < s.slots; ++n) {
            double interference = 0.0;
            for (int j = 0; j < s.num_uavs(); ++j)
                if (j != m) interference += st.powers(j, n) * gains.at(j, k, n);
            const double gamma =
                st.powers(m, n) * gains.at(m, k, n) / (interference + s.noise_power);
            report.slot_rates(k, n) = std::log2(1.0 + gamma);
        }
    }

    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace uavplan
