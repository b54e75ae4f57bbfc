#ifndef UAVPLAN_OPTIMIZER_HPP
#define UAVPLAN_OPTIMIZER_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "physics.hpp"
#include "surrogate.hpp"
#include "trajectory.hpp"

namespace uavplan {

struct SolverOptions {
    double epsilon = 1e-4;           // convergence threshold on eta increase
    int max_outer_iters = 50;
    int max_sca_iters = 20;          // inner SCA rounds of the power subproblem
    double line_search_tol_pos = 0.5;  // meters, x_F / y_F blocks
    double line_search_tol_time = 0.05; // seconds, t_I block
    double power_solver_tol = 1e-6;  // bisection tolerance on eta_p
};

enum class Termination { threshold, max_iters, stalled };

struct SolveState {
    int iteration = 0;
    std::vector<OhfhTrajectory> trajectories;
    Eigen::MatrixXd powers; // M x N, watts
    std::vector<double> eta_history;
    bool converged = false;
    Termination termination_reason = Termination::max_iters;
    bool power_solver_warning = false;
};

enum class TrajBlock { x_final, y_final, hover_initial };

// Exact discretized min-rate of a state.
double exact_eta(const std::vector<OhfhTrajectory>& trajs, const Eigen::MatrixXd& powers,
                 const Pairing& pairing, const Scenario& s, const TimeGrid& grid);

// Inner SCA on the power block: bisection on the surrogate min-rate with a
// projected-gradient feasibility search over the power box, re-expanding
// until the surrogate gain drops below options.epsilon. Returns feasible
// powers and their true min-rate; never worse than init_powers.
std::pair<Eigen::MatrixXd, double> optimize_power_fixed_traj(
    const std::vector<OhfhTrajectory>& trajs, const Pairing& pairing, const Scenario& s,
    const TimeGrid& grid, const Eigen::MatrixXd& init_powers, const SolverOptions& options,
    bool* warning = nullptr);

// Scalar line search (coarse scan + golden-section refinement) on the
// trajectory surrogate for one block of one UAV; accepts the candidate
// only if the exact objective does not decrease.
OhfhTrajectory update_trajectory_block(TrajBlock block, int uav, const SolveState& state,
                                       const Pairing& pairing, const Scenario& s,
                                       const TimeGrid& grid, const SolverOptions& options);

// Algorithm: per outer iteration, update x_F, y_F, t_I for every UAV in
// turn, then re-optimize powers; stop when the eta gain falls below
// epsilon. do_trajectory / do_power select the comparison schemes.
SolveState block_coordinate_descent(const Scenario& s, const Pairing& pairing,
                                    const SolveState& init, const SolverOptions& options,
                                    bool do_trajectory = true, bool do_power = true);

// Final positions at assigned-user centroids (clipped to reach, pushed
// apart to d_min), zero initial hover, full power. Falls back to pure
// hover when separation cannot be restored.
SolveState default_initialization(const Scenario& s, const Pairing& pairing);

struct OracleSpec {
    int xy_points = 11;    // grid points for x_F and y_F per UAV
    int t_points = 11;     // grid points for t_I per UAV
    int power_levels = 1;  // 1 = fixed at P_max
};

struct OracleResult {
    double eta = 0.0;
    std::vector<OhfhTrajectory> trajectories;
    Eigen::MatrixXd powers;
};

// Exhaustive evaluation of the exact discretized objective over a coarse
// Cartesian grid; only for tiny instances (validation oracle).
OracleResult grid_search_oracle(const Scenario& s, const Pairing& pairing,
                                const OracleSpec& spec);

} // namespace uavplan

#endif
