#ifndef UAVPLAN_TRAJECTORY_HPP
#define UAVPLAN_TRAJECTORY_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "physics.hpp"

namespace uavplan {

// One-way hover-fly-hover path: hover at `initial` for hover_initial
// seconds, fly the straight segment to `final_pos` at constant speed,
// hover there for the rest of the period. hover_final is derived from
// the time-budget identity t_I + dist/V + t_F = T.
struct OhfhTrajectory {
    Eigen::Vector3d initial = Eigen::Vector3d::Zero();
    Eigen::Vector3d final_pos = Eigen::Vector3d::Zero();
    double hover_initial = 0.0;
    double hover_final = 0.0;
    double speed = 1.0;
    double period = 0.0;

    double flight_distance() const { return (final_pos - initial).norm(); }
    double flight_time() const { return flight_distance() / speed; }

    Eigen::Vector3d position_at(double t) const;
};

// Throws InfeasibleError when hover_initial + flight time exceeds period.
OhfhTrajectory make_trajectory(const Eigen::Vector3d& initial,
                               const Eigen::Vector3d& final_pos,
                               double hover_initial, double speed, double period);

// N x 3 positions at the grid's slot midpoints.
Eigen::Matrix<double, Eigen::Dynamic, 3> sample_positions(const OhfhTrajectory& traj,
                                                          const TimeGrid& grid);

struct SeparationViolation {
    int uav_a = 0;
    int uav_b = 0;
    int slot = 0;
    double distance = 0.0;
};

// Checks pairwise distance >= d_min at every slot midpoint; returns the
// first violation (by slot, then pair) or nullopt.
std::optional<SeparationViolation> check_separation(
    const std::vector<OhfhTrajectory>& trajs, double d_min, const TimeGrid& grid);

} // namespace uavplan

#endif
