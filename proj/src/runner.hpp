#ifndef UAVPLAN_RUNNER_HPP
#define UAVPLAN_RUNNER_HPP

#include <string>

#include "assignment.hpp"
#include "optimizer.hpp"

namespace uavplan {

// The four comparison schemes. All share default_initialization so their
// final min-rates are directly comparable.
enum class Scheme { joint, power_only, trajectory_only, fixed };

const char* scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name); // throws ValidationError

struct RunReport {
    Scheme scheme = Scheme::joint;
    double final_eta = 0.0;
    std::vector<double> eta_history;
    Eigen::VectorXd user_rates;      // K
    Eigen::MatrixXd slot_rates;      // K x N, log2(1+sinr) at slot midpoints
    PositionsGrid positions;         // per UAV, N x 3
    Pairing pairing;
    SolveState state;
    SolverOptions options;
    std::uint64_t scenario_digest = 0;
    double wall_time_s = 0.0;
};

RunReport run_scheme(const Scenario& s, Scheme scheme, const SolverOptions& options);

} // namespace uavplan

#endif
