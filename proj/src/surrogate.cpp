#include "surrogate.hpp"

#include <cmath>

namespace uavplan {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

SurrogateCoefficients compute_surrogate_coefficients(const ExpansionPoint& expansion,
                                                     const Pairing& pairing,
                                                     const Scenario& s) {
    const int M = s.num_uavs();
    const int K = s.num_users();
    const int N = static_cast<int>(expansion.positions.empty()
                                       ? 0
                                       : expansion.positions[0].rows());
    SurrogateCoefficients c;
    c.num_uavs = M;
    c.num_users = K;
    c.slots = N;
    c.a.assign(static_cast<size_t>(M) * K * N, 0.0);
    c.b.assign(static_cast<size_t>(M) * K * N, 0.0);

    for (int k = 0; k < K; ++k) {
        const int serving = pairing.serving[k];
        const Eigen::Vector3d& uk = s.users[k].position;
        for (int n = 0; n < N; ++n) {
            double total = s.noise_power;
            double interference = s.noise_power;
            std::vector<double> lam(M), h(M);
            for (int j = 0; j < M; ++j) {
                const Eigen::Vector3d qj = expansion.positions[j].row(n).transpose();
                lam[j] = (qj - uk).squaredNorm();
                h[j] = s.ref_gain / lam[j];
                total += expansion.powers(j, n) * h[j];
                if (j != serving) interference += expansion.powers(j, n) * h[j];
            }
            for (int j = 0; j < M; ++j) {
                const size_t i = (static_cast<size_t>(j) * K + k) * N + n;
                c.a[i] = -expansion.powers(j, n) * s.ref_gain / (lam[j] * lam[j]) /
                         (total * kLn2);
                if (j != serving) c.b[i] = h[j] / (interference * kLn2);
            }
        }
    }
    return c;
}

double hat_rate(const std::vector<Eigen::Vector3d>& uav_positions,
                const Eigen::VectorXd& powers, const Eigen::Vector3d& user_pos,
                double ref_gain, double noise) {
    double total = noise;
    for (size_t j = 0; j < uav_positions.size(); ++j) {
        const double d2 = (uav_positions[j] - user_pos).squaredNorm();
        if (d2 <= 0.0) throw ValidationError("hat_rate: coincident UAV and user");
        total += powers[static_cast<int>(j)] * ref_gain / d2;
    }
    return std::log2(total);
}

double hat_rate_lb(const std::vector<Eigen::Vector3d>& candidate_positions,
                   const std::vector<Eigen::Vector3d>& expansion_positions,
                   const Eigen::VectorXd& powers, const Eigen::Vector3d& user_pos,
                   double ref_gain, double noise) {
    const size_t M = expansion_positions.size();
    double total = noise;
    std::vector<double> lam_exp(M);
    for (size_t j = 0; j < M; ++j) {
        lam_exp[j] = (expansion_positions[j] - user_pos).squaredNorm();
        if (lam_exp[j] <= 0.0) throw ValidationError("hat_rate_lb: coincident expansion point");
        total += powers[static_cast<int>(j)] * ref_gain / lam_exp[j];
    }
    double value = std::log2(total);
    for (size_t j = 0; j < M; ++j) {
        const double a = -powers[static_cast<int>(j)] * ref_gain /
                         (lam_exp[j] * lam_exp[j]) / (total * kLn2);
        const double lam_cand = (candidate_positions[j] - user_pos).squaredNorm();
        value += a * (lam_cand - lam_exp[j]);
    }
    return value;
}

double lambda_lb(const Eigen::Vector3d& candidate, const Eigen::Vector3d& expansion,
                 const Eigen::Vector3d& user_pos) {
    const Eigen::Vector3d r = expansion - user_pos;
    return r.squaredNorm() + 2.0 * r.dot(candidate - expansion);
}

double xi_lb(const Eigen::Vector3d& cand_m, const Eigen::Vector3d& cand_j,
             const Eigen::Vector3d& exp_m, const Eigen::Vector3d& exp_j) {
    const Eigen::Vector3d r = exp_m - exp_j;
    return -r.squaredNorm() + 2.0 * r.dot(cand_m - cand_j);
}

double check_rate(const Eigen::VectorXd& powers, const Eigen::VectorXd& gains,
                  int serving, double noise) {
    double interference = noise;
    for (int j = 0; j < powers.size(); ++j) {
        if (j != serving) interference += powers[j] * gains[j];
    }
    return std::log2(interference);
}

double check_rate_ub(const Eigen::VectorXd& candidate_powers,
                     const Eigen::VectorXd& expansion_powers,
                     const Eigen::VectorXd& gains, int serving, double noise) {
    double interference = noise;
    for (int j = 0; j < expansion_powers.size(); ++j) {
        if (j != serving) interference += expansion_powers[j] * gains[j];
    }
    double value = std::log2(interference);
    for (int j = 0; j < expansion_powers.size(); ++j) {
        if (j == serving) continue;
        const double b = gains[j] / (interference * kLn2);
        value += b * (candidate_powers[j] - expansion_powers[j]);
    }
    return value;
}

std::optional<double> surrogate_trajectory_objective(
    const std::vector<OhfhTrajectory>& candidate_trajs, const ExpansionPoint& expansion,
    const Eigen::MatrixXd& powers, const Pairing& pairing, const Scenario& s,
    const TimeGrid& grid) {
    const int M = s.num_uavs();
    const int K = s.num_users();
    const int N = grid.slots;

    PositionsGrid cand;
    cand.reserve(candidate_trajs.size());
    for (const auto& tr : candidate_trajs) cand.push_back(sample_positions(tr, grid));

    double worst = std::numeric_limits<double>::infinity();
    std::vector<Eigen::Vector3d> cand_slot(M), exp_slot(M);
    for (int k = 0; k < K; ++k) {
        const int m = pairing.serving[k];
        const Eigen::Vector3d& uk = s.users[k].position;
        double acc = 0.0;
        for (int n = 0; n < N; ++n) {
            for (int j = 0; j < M; ++j) {
                cand_slot[j] = cand[j].row(n).transpose();
                exp_slot[j] = expansion.positions[j].row(n).transpose();
            }
            const double lb =
                hat_rate_lb(cand_slot, exp_slot, powers.col(n), uk, s.ref_gain, s.noise_power);
            double interference = s.noise_power;
            for (int j = 0; j < M; ++j) {
                if (j == m) continue;
                const double lam = lambda_lb(cand_slot[j], exp_slot[j], uk);
                if (lam <= 0.0) return std::nullopt; // outside trust region
                interference += powers(j, n) * s.ref_gain / lam;
            }
            acc += lb - std::log2(interference);
        }
        worst = std::min(worst, acc / N);
    }
    return worst;
}

double surrogate_power_objective(const Eigen::MatrixXd& candidate_powers,
                                 const Eigen::MatrixXd& expansion_powers,
                                 const GainTensor& gains, const Pairing& pairing,
                                 double noise) {
    const int M = gains.num_uavs;
    const int K = gains.num_users;
    const int N = gains.slots;
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        const int m = pairing.serving[k];
        double acc = 0.0;
        for (int n = 0; n < N; ++n) {
            double total = noise;
            double interference_exp = noise;
            for (int j = 0; j < M; ++j) {
                const double h = gains.at(j, k, n);
                total += candidate_powers(j, n) * h;
                if (j != m) interference_exp += expansion_powers(j, n) * h;
            }
            double ub = std::log2(interference_exp);
            for (int j = 0; j < M; ++j) {
                if (j == m) continue;
                const double b = gains.at(j, k, n) / (interference_exp * kLn2);
                ub += b * (candidate_powers(j, n) - expansion_powers(j, n));
            }
            acc += std::log2(total) - ub;
        }
        worst = std::min(worst, acc / N);
    }
    return worst;
}

double surrogate_power_objective(const Eigen::MatrixXd& candidate_powers,
                                 const ExpansionPoint& expansion,
                                 const std::vector<OhfhTrajectory>& trajs,
                                 const Pairing& pairing, const Scenario& s,
                                 const TimeGrid& grid) {
    PositionsGrid pos;
    pos.reserve(trajs.size());
    for (const auto& tr : trajs) pos.push_back(sample_positions(tr, grid));
    const GainTensor gains = compute_gains(pos, s);
    return surrogate_power_objective(candidate_powers, expansion.powers, gains, pairing,
                                     s.noise_power);
}

} // namespace uavplan
