#ifndef UAVPLAN_PHYSICS_HPP
#define UAVPLAN_PHYSICS_HPP

#include <vector>

#include <Eigen/Dense>

#include "scenario.hpp"

namespace uavplan {

struct OhfhTrajectory; // trajectory.hpp

// Uniform discretization of [0, T]; rates are evaluated at slot midpoints
// (midpoint rule for the time-average integral).
struct TimeGrid {
    double period = 0.0;
    int slots = 0;
    double slot_duration = 0.0;
    std::vector<double> midpoints;

    static TimeGrid make(double period, int slots);
};

// Per-UAV N x 3 sampled positions.
using PositionsGrid = std::vector<Eigen::Matrix<double, Eigen::Dynamic, 3>>;

// M x K x N linear channel gains h_{m,k}[n].
struct GainTensor {
    int num_uavs = 0;
    int num_users = 0;
    int slots = 0;
    std::vector<double> values;

    double& at(int m, int k, int n) { return values[(static_cast<size_t>(m) * num_users + k) * slots + n]; }
    double at(int m, int k, int n) const { return values[(static_cast<size_t>(m) * num_users + k) * slots + n]; }
};

// User -> serving UAV, both as array indices into Scenario::users / uavs.
struct Pairing {
    std::vector<int> serving;
};

double channel_gain(const Eigen::Vector3d& uav_pos, const Eigen::Vector3d& user_pos,
                    double ref_gain);

GainTensor compute_gains(const PositionsGrid& positions, const Scenario& s);

// powers: per-UAV transmit power at one slot; gains: per-UAV gain toward
// the user at that slot.
double sinr(const Eigen::VectorXd& powers, const Eigen::VectorXd& gains, int serving,
            double noise);

double instantaneous_rate(double gamma);

// Discretized per-user time-average rate (1/N) sum_n log2(1 + sinr).
Eigen::VectorXd average_rates(const std::vector<OhfhTrajectory>& trajs,
                              const Eigen::MatrixXd& powers, const Pairing& pairing,
                              const Scenario& s, const TimeGrid& grid);

// Same, from precomputed gains (avoids resampling inside inner loops).
Eigen::VectorXd average_rates_from_gains(const GainTensor& gains,
                                         const Eigen::MatrixXd& powers,
                                         const Pairing& pairing, double noise);

double min_rate(const Eigen::VectorXd& rates);

} // namespace uavplan

#endif
