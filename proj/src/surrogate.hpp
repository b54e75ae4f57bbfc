#ifndef UAVPLAN_SURROGATE_HPP
#define UAVPLAN_SURROGATE_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "physics.hpp"
#include "trajectory.hpp"

namespace uavplan {

// The iterate (q^l, p^l) every first-order Taylor bound is built around.
struct ExpansionPoint {
    PositionsGrid positions;  // per UAV, N x 3
    Eigen::MatrixXd powers;   // M x N
    int iteration = 0;
};

// Taylor coefficients of both SCA bounds at an expansion point:
// a (1/m^2) multiplies squared-distance deviations in the trajectory
// bound and is <= 0 (< 0 wherever the UAV transmits); b (1/watt)
// multiplies power deviations in the power bound and is >= 0.
struct SurrogateCoefficients {
    int num_uavs = 0;
    int num_users = 0;
    int slots = 0;
    std::vector<double> a;
    std::vector<double> b;

    double a_at(int m, int k, int n) const {
        return a[(static_cast<size_t>(m) * num_users + k) * slots + n];
    }
    double b_at(int m, int k, int n) const {
        return b[(static_cast<size_t>(m) * num_users + k) * slots + n];
    }
};

SurrogateCoefficients compute_surrogate_coefficients(const ExpansionPoint& expansion,
                                                     const Pairing& pairing,
                                                     const Scenario& s);

// Signal-plus-interference log term of the rate decomposition:
// log2(sum_j p_j rho0 / ||q_j - q_k||^2 + sigma^2).
double hat_rate(const std::vector<Eigen::Vector3d>& uav_positions,
                const Eigen::VectorXd& powers, const Eigen::Vector3d& user_pos,
                double ref_gain, double noise);

// First-order lower bound on hat_rate: the log term frozen at the
// expansion positions plus the A-coefficient linearization in the
// squared distances. Tight when candidate == expansion.
double hat_rate_lb(const std::vector<Eigen::Vector3d>& candidate_positions,
                   const std::vector<Eigen::Vector3d>& expansion_positions,
                   const Eigen::VectorXd& powers, const Eigen::Vector3d& user_pos,
                   double ref_gain, double noise);

// Affine lower bound on ||q - q_k||^2 around q^l. Can go non-positive far
// from the expansion point; callers treat that as a trust-region exit.
double lambda_lb(const Eigen::Vector3d& candidate, const Eigen::Vector3d& expansion,
                 const Eigen::Vector3d& user_pos);

// Affine lower bound on ||q_m - q_j||^2 around (q_m^l, q_j^l).
double xi_lb(const Eigen::Vector3d& cand_m, const Eigen::Vector3d& cand_j,
             const Eigen::Vector3d& exp_m, const Eigen::Vector3d& exp_j);

// Interference log term log2(sum_{j != serving} p_j h_j + sigma^2).
double check_rate(const Eigen::VectorXd& powers, const Eigen::VectorXd& gains,
                  int serving, double noise);

// First-order upper bound on check_rate in the powers (B-coefficient
// linearization); tight at the expansion powers.
double check_rate_ub(const Eigen::VectorXd& candidate_powers,
                     const Eigen::VectorXd& expansion_powers,
                     const Eigen::VectorXd& gains, int serving, double noise);

// Trajectory-block surrogate: min over users of the slot-averaged
// (hat_rate_lb - log2(interference with lambda_lb + sigma^2)).
// nullopt when lambda_lb <= 0 at any required interferer/user/slot
// (candidate outside the surrogate's trust region).
std::optional<double> surrogate_trajectory_objective(
    const std::vector<OhfhTrajectory>& candidate_trajs, const ExpansionPoint& expansion,
    const Eigen::MatrixXd& powers, const Pairing& pairing, const Scenario& s,
    const TimeGrid& grid);

// Power-block surrogate: min over users of the slot-averaged
// (log2(total received + sigma^2) - check_rate_ub). Concave in the
// candidate powers; a global lower bound on the true min-rate.
double surrogate_power_objective(const Eigen::MatrixXd& candidate_powers,
                                 const ExpansionPoint& expansion,
                                 const std::vector<OhfhTrajectory>& trajs,
                                 const Pairing& pairing, const Scenario& s,
                                 const TimeGrid& grid);

// Gain-tensor overload used by the optimizer's inner loop.
double surrogate_power_objective(const Eigen::MatrixXd& candidate_powers,
                                 const Eigen::MatrixXd& expansion_powers,
                                 const GainTensor& gains, const Pairing& pairing,
                                 double noise);

} // namespace uavplan

#endif
