#include "trajectory.hpp"

#include <cmath>

#include "errors.hpp"

namespace uavplan {

Eigen::Vector3d OhfhTrajectory::position_at(double t) const {
    if (t < -1e-12 || t > period + 1e-12)
        throw ValidationError("position_at: time outside [0, T]");
    const double dist = flight_distance();
    if (dist == 0.0) return initial; // pure hover, direction undefined
    const double t_fly_end = period - hover_final;
    if (t < hover_initial) return initial;
    if (t >= t_fly_end) return final_pos;
    const Eigen::Vector3d dir = (final_pos - initial) / dist;
    return initial + (t - hover_initial) * speed * dir;
}

OhfhTrajectory make_trajectory(const Eigen::Vector3d& initial,
                               const Eigen::Vector3d& final_pos, double hover_initial,
                               double speed, double period) {
    if (!(speed > 0)) throw ValidationError("trajectory speed must be positive");
    if (hover_initial < 0) throw ValidationError("initial hover time must be non-negative");
    OhfhTrajectory tr;
    tr.initial = initial;
    tr.final_pos = final_pos;
    tr.hover_initial = hover_initial;
    tr.speed = speed;
    tr.period = period;
    const double fly = tr.flight_time();
    const double hover_final = period - hover_initial - fly;
    if (hover_final < -1e-9 * std::max(1.0, period))
        throw InfeasibleError("trajectory time budget exceeded: hover " +
                              std::to_string(hover_initial) + " s + flight " +
                              std::to_string(fly) + " s > period " +
                              std::to_string(period) + " s");
    tr.hover_final = std::max(0.0, hover_final);
    return tr;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> sample_positions(const OhfhTrajectory& traj,
                                                          const TimeGrid& grid) {
    Eigen::Matrix<double, Eigen::Dynamic, 3> out(grid.slots, 3);
    for (int n = 0; n < grid.slots; ++n)
        out.row(n) = traj.position_at(grid.midpoints[n]).transpose();
    return out;
}

std::optional<SeparationViolation> check_separation(
    const std::vector<OhfhTrajectory>& trajs, double d_min, const TimeGrid& grid) {
    const int M = static_cast<int>(trajs.size());
    if (M < 2) return std::nullopt;
    for (int n = 0; n < grid.slots; ++n) {
        const double t = grid.midpoints[n];
        for (int a = 0; a < M; ++a) {
            const Eigen::Vector3d pa = trajs[a].position_at(t);
            for (int b = a + 1; b < M; ++b) {
                const double d = (pa - trajs[b].position_at(t)).norm();
                // Relative slack so paths at exactly d_min survive rounding.
                if (d < d_min * (1.0 - 1e-12)) return SeparationViolation{a, b, n, d};
            }
        }
    }
    return std::nullopt;
}

} // namespace uavplan
