#include "physics.hpp"

#include <cmath>

#include "trajectory.hpp"

namespace uavplan {

TimeGrid TimeGrid::make(double period, int slots) {
    if (!(period > 0) || slots < 1)
        throw ValidationError("time grid needs positive period and at least one slot");
    TimeGrid g;
    g.period = period;
    g.slots = slots;
    g.slot_duration = period / slots;
    g.midpoints.resize(slots);
    for (int n = 0; n < slots; ++n) g.midpoints[n] = (n + 0.5) * g.slot_duration;
    return g;
}

double channel_gain(const Eigen::Vector3d& uav_pos, const Eigen::Vector3d& user_pos,
                    double ref_gain) {
    const double d2 = (uav_pos - user_pos).squaredNorm();
    if (d2 <= 0.0)
        throw ValidationError("channel_gain: coincident UAV and user positions");
    return ref_gain / d2;
}

GainTensor compute_gains(const PositionsGrid& positions, const Scenario& s) {
    const int M = s.num_uavs();
    const int K = s.num_users();
    const int N = s.slots;
    GainTensor g;
    g.num_uavs = M;
    g.num_users = K;
    g.slots = N;
    g.values.resize(static_cast<size_t>(M) * K * N);
    for (int m = 0; m < M; ++m) {
        for (int k = 0; k < K; ++k) {
            const Eigen::Vector3d& uk = s.users[k].position;
            for (int n = 0; n < N; ++n) {
                const Eigen::Vector3d qm = positions[m].row(n).transpose();
                g.at(m, k, n) = channel_gain(qm, uk, s.ref_gain);
            }
        }
    }
    return g;
}

double sinr(const Eigen::VectorXd& powers, const Eigen::VectorXd& gains, int serving,
            double noise) {
    double interference = 0.0;
    for (int j = 0; j < powers.size(); ++j) {
        if (j != serving) interference += powers[j] * gains[j];
    }
    return powers[serving] * gains[serving] / (interference + noise);
}

double instantaneous_rate(double gamma) { return std::log2(1.0 + gamma); }

Eigen::VectorXd average_rates_from_gains(const GainTensor& gains,
                                         const Eigen::MatrixXd& powers,
                                         const Pairing& pairing, double noise) {
    const int M = gains.num_uavs;
    const int K = gains.num_users;
    const int N = gains.slots;
    Eigen::VectorXd rates = Eigen::VectorXd::Zero(K);
    for (int k = 0; k < K; ++k) {
        const int m = pairing.serving[k];
        double acc = 0.0;
        for (int n = 0; n < N; ++n) {
            double interference = 0.0;
            for (int j = 0; j < M; ++j) {
                if (j != m) interference += powers(j, n) * gains.at(j, k, n);
            }
            const double gamma = powers(m, n) * gains.at(m, k, n) / (interference + noise);
            acc += std::log2(1.0 + gamma);
        }
        rates[k] = acc / N;
    }
    return rates;
}

Eigen::VectorXd average_rates(const std::vector<OhfhTrajectory>& trajs,
                              const Eigen::MatrixXd& powers, const Pairing& pairing,
                              const Scenario& s, const TimeGrid& grid) {
    if (static_cast<int>(pairing.serving.size()) != s.num_users())
        throw ValidationError("pairing size does not match user count");
    for (int m : pairing.serving) {
        if (m < 0 || m >= s.num_uavs())
            throw ValidationError("pairing references unknown UAV index");
    }
    PositionsGrid pos;
    pos.reserve(trajs.size());
    for (const auto& tr : trajs) pos.push_back(sample_positions(tr, grid));
    const GainTensor gains = compute_gains(pos, s);
    return average_rates_from_gains(gains, powers, pairing, s.noise_power);
}

double min_rate(const Eigen::VectorXd& rates) {
    if (rates.size() == 0) throw ValidationError("min_rate: empty rate vector");
    return rates.minCoeff();
}

} // namespace uavplan
