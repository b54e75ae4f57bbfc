#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uavplan {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kAscentSlack = 1e-9;

Eigen::VectorXd max_powers(const Scenario& s) {
    Eigen::VectorXd p(s.num_uavs());
    for (int m = 0; m < s.num_uavs(); ++m) p[m] = s.uavs[m].max_power;
    return p;
}

void clamp_to_box(Eigen::MatrixXd& p, const Eigen::VectorXd& pmax) {
    for (int m = 0; m < p.rows(); ++m)
        for (int n = 0; n < p.cols(); ++n) p(m, n) = std::clamp(p(m, n), 0.0, pmax[m]);
}

// Per-user surrogate rates and gradients for a fixed expansion point.
// g_k(p) = (1/N) sum_n [log2(sum_j p_jn h_jkn + s2) - log2(I_kn)
//                        - sum_{j != m_k} B_jkn (p_jn - p^l_jn)]
// with I_kn the expansion-point interference-plus-noise of user k.
class PowerSurrogate {
public:
    PowerSurrogate(const GainTensor& gains, const Eigen::MatrixXd& expansion,
                   const Pairing& pairing, double noise)
        : gains_(gains), pairing_(pairing), noise_(noise) {
        const int M = gains.num_uavs, K = gains.num_users, N = gains.slots;
        log_i_exp_.resize(K, N);
        b_.assign(static_cast<size_t>(M) * K * N, 0.0);
        lin_const_.resize(K, N);
        for (int k = 0; k < K; ++k) {
            const int m = pairing.serving[k];
            for (int n = 0; n < N; ++n) {
                double interference = noise;
                for (int j = 0; j < M; ++j)
                    if (j != m) interference += expansion(j, n) * gains.at(j, k, n);
                log_i_exp_(k, n) = std::log2(interference);
                double lin = 0.0;
                for (int j = 0; j < M; ++j) {
                    if (j == m) continue;
                    const double b = gains.at(j, k, n) / (interference * kLn2);
                    b_[idx(j, k, n)] = b;
                    lin += b * expansion(j, n);
                }
                lin_const_(k, n) = lin; // subtracted back inside value()
            }
        }
    }

    Eigen::VectorXd values(const Eigen::MatrixXd& p) const {
        const int M = gains_.num_uavs, K = gains_.num_users, N = gains_.slots;
        Eigen::VectorXd v(K);
        for (int k = 0; k < K; ++k) {
            const int m = pairing_.serving[k];
            double acc = 0.0;
            for (int n = 0; n < N; ++n) {
                double total = noise_;
                double lin = 0.0;
                for (int j = 0; j < M; ++j) {
                    total += p(j, n) * gains_.at(j, k, n);
                    if (j != m) lin += b_[idx(j, k, n)] * p(j, n);
                }
                acc += std::log2(total) - log_i_exp_(k, n) - (lin - lin_const_(k, n));
            }
            v[k] = acc / N;
        }
        return v;
    }

    // d g_k / d p, M x N.
    Eigen::MatrixXd gradient(const Eigen::MatrixXd& p, int k) const {
        const int M = gains_.num_uavs, N = gains_.slots;
        const int m = pairing_.serving[k];
        Eigen::MatrixXd g(M, N);
        for (int n = 0; n < N; ++n) {
            double total = noise_;
            for (int j = 0; j < M; ++j) total += p(j, n) * gains_.at(j, k, n);
            for (int j = 0; j < M; ++j) {
                double d = gains_.at(j, k, n) / (total * kLn2);
                if (j != m) d -= b_[idx(j, k, n)];
                g(j, n) = d / N;
            }
        }
        return g;
    }

private:
    size_t idx(int m, int k, int n) const {
        return (static_cast<size_t>(m) * gains_.num_users + k) * gains_.slots + n;
    }
    const GainTensor& gains_;
    const Pairing& pairing_;
    double noise_;
    Eigen::MatrixXd log_i_exp_;
    Eigen::MatrixXd lin_const_;
    std::vector<double> b_;
};

// Projected gradient ascent on min_k g_k(p) - eta over the power box.
// Returns as soon as the violation clears; otherwise runs until the step
// stalls or the budget runs out.
struct FeasibilityResult {
    bool feasible = false;
    Eigen::MatrixXd p;
};

FeasibilityResult feasibility_search(const PowerSurrogate& surr, double eta,
                                     const Eigen::MatrixXd& start,
                                     const Eigen::VectorXd& pmax) {
    const int max_iters = 150;
    Eigen::MatrixXd p = start;
    clamp_to_box(p, pmax);
    Eigen::VectorXd v = surr.values(p);
    double f = v.minCoeff() - eta;
    if (f > 0) return {true, p};

    for (int it = 0; it < max_iters; ++it) {
        // Supergradient of the min: average over near-active users.
        const double vmin = v.minCoeff();
        const double vmax = v.maxCoeff();
        const double act_eps = 1e-15 + 1e-3 * (vmax - vmin);
        Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(p.rows(), p.cols());
        int active = 0;
        for (int k = 0; k < v.size(); ++k) {
            if (v[k] <= vmin + act_eps) {
                dir += surr.gradient(p, k);
                ++active;
            }
        }
        dir /= active;
        const double dmax = dir.cwiseAbs().maxCoeff();
        if (dmax <= 0) break;

        // Scale-free initial step: a quarter of the largest power budget.
        double step = 0.25 * pmax.maxCoeff() / dmax;
        bool improved = false;
        for (int bt = 0; bt < 30; ++bt) {
            Eigen::MatrixXd cand = p + step * dir;
            clamp_to_box(cand, pmax);
            Eigen::VectorXd vc = surr.values(cand);
            const double fc = vc.minCoeff() - eta;
            if (fc > f) {
                p = std::move(cand);
                v = std::move(vc);
                f = fc;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (f > 0) return {true, p};
        if (!improved) break; // stationary for the violation objective
    }
    return {false, p};
}

} // namespace

double exact_eta(const std::vector<OhfhTrajectory>& trajs, const Eigen::MatrixXd& powers,
                 const Pairing& pairing, const Scenario& s, const TimeGrid& grid) {
    return min_rate(average_rates(trajs, powers, pairing, s, grid));
}

std::pair<Eigen::MatrixXd, double> optimize_power_fixed_traj(
    const std::vector<OhfhTrajectory>& trajs, const Pairing& pairing, const Scenario& s,
    const TimeGrid& grid, const Eigen::MatrixXd& init_powers, const SolverOptions& options,
    bool* warning) {
    if (warning) *warning = false;

    PositionsGrid pos;
    pos.reserve(trajs.size());
    for (const auto& tr : trajs) pos.push_back(sample_positions(tr, grid));
    const GainTensor gains = compute_gains(pos, s);
    const Eigen::VectorXd pmax = max_powers(s);

    Eigen::MatrixXd p = init_powers;
    clamp_to_box(p, pmax);
    const double init_eta =
        min_rate(average_rates_from_gains(gains, p, pairing, s.noise_power));

    // Fixed bracket ceiling: interference can only reduce the rate below
    // the interference-free, best-gain value.
    double total_max_gain = 0.0;
    for (int j = 0; j < gains.num_uavs; ++j) {
        double gj = 0.0;
        for (int k = 0; k < gains.num_users; ++k)
            for (int n = 0; n < gains.slots; ++n) gj = std::max(gj, gains.at(j, k, n));
        total_max_gain += pmax[j] * gj;
    }
    const double eta_ceiling = std::log2(1.0 + total_max_gain / s.noise_power);

    bool hit_budget = true;
    for (int sca = 0; sca < options.max_sca_iters; ++sca) {
        PowerSurrogate surr(gains, p, pairing, s.noise_power);
        double lo = surr.values(p).minCoeff(); // tight: equals the true eta at p
        const double expansion_eta = lo;
        double hi = std::max(eta_ceiling, lo);
        Eigen::MatrixXd best_p = p;

        int guard = 0;
        while (hi - lo > options.power_solver_tol && guard++ < 100) {
            const double mid = 0.5 * (lo + hi);
            FeasibilityResult r = feasibility_search(surr, mid, best_p, pmax);
            if (r.feasible) {
                best_p = std::move(r.p);
                lo = std::max(surr.values(best_p).minCoeff(), mid);
            } else {
                hi = mid;
            }
        }

        p = std::move(best_p);
        if (lo - expansion_eta < options.epsilon) {
            hit_budget = false;
            break;
        }
    }
    if (hit_budget && warning) *warning = true;

    double eta = min_rate(average_rates_from_gains(gains, p, pairing, s.noise_power));
    if (eta < init_eta) { // never return a worse point than the input
        p = init_powers;
        eta = init_eta;
    }
    return {p, eta};
}

namespace {

struct ScalarInterval {
    double lo = 0.0;
    double hi = 0.0;
    double current = 0.0;
};

ScalarInterval block_interval(TrajBlock block, const OhfhTrajectory& tr) {
    ScalarInterval iv;
    const double reach = tr.speed * (tr.period - tr.hover_initial);
    const Eigen::Vector3d d = tr.final_pos - tr.initial;
    switch (block) {
        case TrajBlock::x_final: {
            const double slack2 = reach * reach - d.y() * d.y() - d.z() * d.z();
            const double half = std::sqrt(std::max(0.0, slack2));
            iv = {tr.initial.x() - half, tr.initial.x() + half, tr.final_pos.x()};
            break;
        }
        case TrajBlock::y_final: {
            const double slack2 = reach * reach - d.x() * d.x() - d.z() * d.z();
            const double half = std::sqrt(std::max(0.0, slack2));
            iv = {tr.initial.y() - half, tr.initial.y() + half, tr.final_pos.y()};
            break;
        }
        case TrajBlock::hover_initial: {
            iv = {0.0, tr.period - tr.flight_time(), tr.hover_initial};
            break;
        }
    }
    iv.current = std::clamp(iv.current, iv.lo, iv.hi);
    return iv;
}

OhfhTrajectory with_scalar(TrajBlock block, const OhfhTrajectory& tr, double v) {
    Eigen::Vector3d f = tr.final_pos;
    double hover = tr.hover_initial;
    switch (block) {
        case TrajBlock::x_final: f.x() = v; break;
        case TrajBlock::y_final: f.y() = v; break;
        case TrajBlock::hover_initial: hover = v; break;
    }
    return make_trajectory(tr.initial, f, hover, tr.speed, tr.period);
}

} // namespace

OhfhTrajectory update_trajectory_block(TrajBlock block, int uav, const SolveState& state,
                                       const Pairing& pairing, const Scenario& s,
                                       const TimeGrid& grid, const SolverOptions& options) {
    const OhfhTrajectory& cur = state.trajectories[uav];
    const double tol = (block == TrajBlock::hover_initial) ? options.line_search_tol_time
                                                           : options.line_search_tol_pos;
    const ScalarInterval iv = block_interval(block, cur);
    if (iv.hi - iv.lo < tol) return cur;

    ExpansionPoint expansion;
    expansion.positions.reserve(state.trajectories.size());
    for (const auto& tr : state.trajectories)
        expansion.positions.push_back(sample_positions(tr, grid));
    expansion.powers = state.powers;
    expansion.iteration = state.iteration;

    constexpr double kInfeasible = -std::numeric_limits<double>::infinity();
    auto trajs_with = [&](double v) {
        std::vector<OhfhTrajectory> trajs = state.trajectories;
        trajs[uav] = with_scalar(block, cur, v);
        return trajs;
    };
    auto eval = [&](double v) -> double {
        std::vector<OhfhTrajectory> trajs;
        try {
            trajs = trajs_with(v);
        } catch (const InfeasibleError&) {
            return kInfeasible;
        }
        if (check_separation(trajs, s.min_separation, grid)) return kInfeasible;
        const auto val =
            surrogate_trajectory_objective(trajs, expansion, state.powers, pairing, s, grid);
        return val ? *val : kInfeasible;
    };

    double best_v = iv.current;
    double best_val = eval(iv.current);

    constexpr int kScanPoints = 25;
    const double span = iv.hi - iv.lo;
    for (int i = 0; i < kScanPoints; ++i) {
        const double v = iv.lo + span * i / (kScanPoints - 1);
        const double val = eval(v);
        if (val > best_val) {
            best_val = val;
            best_v = v;
        }
    }
    if (best_val == kInfeasible) return cur;

    // Golden-section refinement inside the scan bracket around the best
    // sample; infeasible probes count as -inf and the best probe wins.
    const double h = span / (kScanPoints - 1);
    double a = std::max(iv.lo, best_v - h);
    double b = std::min(iv.hi, best_v + h);
    constexpr double kGolden = 0.6180339887498949;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    int guard = 0;
    while (b - a > tol && guard++ < 120) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = eval(x2);
        }
        const double v = (f1 >= f2) ? x1 : x2;
        const double fv = std::max(f1, f2);
        if (fv > best_val) {
            best_val = fv;
            best_v = v;
        }
    }

    if (best_v == iv.current) return cur;

    // Accept only if the exact objective does not decrease.
    std::vector<OhfhTrajectory> cand_trajs;
    try {
        cand_trajs = trajs_with(best_v);
    } catch (const InfeasibleError&) {
        return cur;
    }
    if (check_separation(cand_trajs, s.min_separation, grid)) return cur;
    const double old_eta = exact_eta(state.trajectories, state.powers, pairing, s, grid);
    const double new_eta = exact_eta(cand_trajs, state.powers, pairing, s, grid);
    if (new_eta >= old_eta) return cand_trajs[uav];
    return cur;
}

SolveState block_coordinate_descent(const Scenario& s, const Pairing& pairing,
                                    const SolveState& init, const SolverOptions& options,
                                    bool do_trajectory, bool do_power) {
    const TimeGrid grid = TimeGrid::make(s.period, s.slots);
    const Eigen::VectorXd pmax = max_powers(s);

    if (auto v = check_separation(init.trajectories, s.min_separation, grid))
        throw InfeasibleError("initial state violates UAV separation (uavs " +
                              std::to_string(v->uav_a) + ", " + std::to_string(v->uav_b) +
                              " at slot " + std::to_string(v->slot) + ")");
    for (int m = 0; m < init.powers.rows(); ++m) {
        for (int n = 0; n < init.powers.cols(); ++n) {
            if (init.powers(m, n) < 0 || init.powers(m, n) > pmax[m] * (1 + 1e-12))
                throw InfeasibleError("initial power outside [0, P_max] for uav " +
                                      std::to_string(m));
        }
    }

    SolveState state = init;
    double eta = exact_eta(state.trajectories, state.powers, pairing, s, grid);
    state.eta_history = {eta};
    state.converged = false;
    state.termination_reason = Termination::max_iters;

    const std::array<TrajBlock, 3> blocks = {TrajBlock::x_final, TrajBlock::y_final,
                                             TrajBlock::hover_initial};
    for (int l = 1; l <= options.max_outer_iters; ++l) {
        state.iteration = l;
        bool changed = false;
        if (do_trajectory) {
            for (TrajBlock block : blocks) {
                for (int m = 0; m < s.num_uavs(); ++m) {
                    OhfhTrajectory updated =
                        update_trajectory_block(block, m, state, pairing, s, grid, options);
                    if ((updated.final_pos - state.trajectories[m].final_pos).norm() > 0 ||
                        updated.hover_initial != state.trajectories[m].hover_initial)
                        changed = true;
                    state.trajectories[m] = updated;
                }
            }
        }
        if (do_power) {
            bool warn = false;
            auto [p, eta_p] = optimize_power_fixed_traj(state.trajectories, pairing, s, grid,
                                                        state.powers, options, &warn);
            if ((p - state.powers).cwiseAbs().maxCoeff() > 0) changed = true;
            state.powers = std::move(p);
            state.power_solver_warning = state.power_solver_warning || warn;
        }

        const double new_eta = exact_eta(state.trajectories, state.powers, pairing, s, grid);
        state.eta_history.push_back(new_eta);
        const double gain = new_eta - eta;
        eta = new_eta;
        if (gain < options.epsilon) {
            state.converged = true;
            state.termination_reason = changed ? Termination::threshold : Termination::stalled;
            break;
        }
    }
    return state;
}

SolveState default_initialization(const Scenario& s, const Pairing& pairing) {
    const TimeGrid grid = TimeGrid::make(s.period, s.slots);
    const int M = s.num_uavs();

    std::vector<Eigen::Vector3d> finals(M);
    for (int m = 0; m < M; ++m) {
        const Eigen::Vector3d qi = s.uavs[m].initial_position;
        Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
        int count = 0;
        for (int k = 0; k < s.num_users(); ++k) {
            if (pairing.serving[k] == m) {
                centroid += s.users[k].position.head<2>();
                ++count;
            }
        }
        if (count == 0) {
            finals[m] = qi;
            continue;
        }
        centroid /= count;
        Eigen::Vector3d target(centroid.x(), centroid.y(), s.altitude);
        const double reach = s.uavs[m].speed * s.period;
        const Eigen::Vector3d d = target - qi;
        finals[m] = (d.norm() > reach) ? Eigen::Vector3d(qi + d * (reach / d.norm())) : target;
    }

    // Push too-close final positions apart to exactly d_min.
    auto within_reach = [&](int m, const Eigen::Vector3d& f) {
        return (f - s.uavs[m].initial_position).norm() <= s.uavs[m].speed * s.period;
    };
    for (int round = 0; round < 10; ++round) {
        bool moved = false;
        for (int a = 0; a < M; ++a) {
            for (int b = a + 1; b < M; ++b) {
                Eigen::Vector3d d = finals[b] - finals[a];
                double dist = d.norm();
                if (dist >= s.min_separation) continue;
                Eigen::Vector3d dir =
                    (dist > 1e-12) ? Eigen::Vector3d(d / dist) : Eigen::Vector3d::UnitX();
                const double push = (s.min_separation - dist) / 2.0;
                finals[a] -= push * dir;
                finals[b] += push * dir;
                moved = true;
            }
        }
        if (!moved) break;
    }

    bool ok = true;
    for (int a = 0; a < M && ok; ++a) {
        if (!within_reach(a, finals[a])) ok = false;
        for (int b = a + 1; b < M && ok; ++b)
            if ((finals[a] - finals[b]).norm() < s.min_separation - 1e-9) ok = false;
    }

    SolveState state;
    auto build = [&](bool hover_everywhere) {
        state.trajectories.clear();
        for (int m = 0; m < M; ++m) {
            const Eigen::Vector3d f =
                hover_everywhere ? s.uavs[m].initial_position : finals[m];
            state.trajectories.push_back(
                make_trajectory(s.uavs[m].initial_position, f, 0.0, s.uavs[m].speed, s.period));
        }
    };
    build(!ok);
    if (ok && check_separation(state.trajectories, s.min_separation, grid))
        build(true); // paths cross even though finals are separated

    state.powers = Eigen::MatrixXd(M, s.slots);
    for (int m = 0; m < M; ++m) state.powers.row(m).setConstant(s.uavs[m].max_power);
    return state;
}

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    if (count <= 1) return {0.5 * (lo + hi)};
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
}

} // namespace

OracleResult grid_search_oracle(const Scenario& s, const Pairing& pairing,
                                const OracleSpec& spec) {
    const int M = s.num_uavs();
    const int K = s.num_users();
    const int N = s.slots;
    if (M > 2 || K > 3 || N > 4)
        throw ValidationError("grid_search_oracle: instance too large (M<=2, K<=3, N<=4)");
    if (spec.xy_points > 11 || spec.t_points > 11 || spec.power_levels > 3 ||
        spec.xy_points < 1 || spec.t_points < 1 || spec.power_levels < 1)
        throw ValidationError("grid_search_oracle: resolution out of range");

    const TimeGrid grid = TimeGrid::make(s.period, s.slots);

    std::vector<std::vector<OhfhTrajectory>> candidates(M);
    for (int m = 0; m < M; ++m) {
        const Eigen::Vector3d qi = s.uavs[m].initial_position;
        const double reach = s.uavs[m].speed * s.period;
        for (double x : linspace(qi.x() - reach, qi.x() + reach, spec.xy_points)) {
            for (double y : linspace(qi.y() - reach, qi.y() + reach, spec.xy_points)) {
                const Eigen::Vector3d f(x, y, s.altitude);
                const double fly = (f - qi).norm() / s.uavs[m].speed;
                if (fly > s.period) continue;
                for (double t : linspace(0.0, s.period - fly, spec.t_points))
                    candidates[m].push_back(make_trajectory(qi, f, t, s.uavs[m].speed, s.period));
            }
        }
    }

    double traj_combos = 1.0;
    for (int m = 0; m < M; ++m) traj_combos *= static_cast<double>(candidates[m].size());
    const double power_combos = std::pow(spec.power_levels, M * N);
    if (traj_combos * power_combos > 1e7)
        throw ValidationError("grid_search_oracle: grid exceeds 1e7 evaluations");

    std::vector<std::vector<double>> levels(M);
    for (int m = 0; m < M; ++m) {
        levels[m] = (spec.power_levels == 1)
                        ? std::vector<double>{s.uavs[m].max_power}
                        : linspace(0.0, s.uavs[m].max_power, spec.power_levels);
    }

    OracleResult best;
    best.eta = -std::numeric_limits<double>::infinity();

    std::vector<size_t> traj_idx(M, 0);
    std::vector<OhfhTrajectory> trajs(M);
    Eigen::MatrixXd powers(M, N);
    while (true) {
        for (int m = 0; m < M; ++m) trajs[m] = candidates[m][traj_idx[m]];
        if (!check_separation(trajs, s.min_separation, grid)) {
            PositionsGrid pos;
            for (const auto& tr : trajs) pos.push_back(sample_positions(tr, grid));
            const GainTensor gains = compute_gains(pos, s);

            std::vector<int> digit(static_cast<size_t>(M) * N, 0);
            while (true) {
                for (int m = 0; m < M; ++m)
                    for (int n = 0; n < N; ++n) powers(m, n) = levels[m][digit[m * N + n]];
                const double eta = min_rate(
                    average_rates_from_gains(gains, powers, pairing, s.noise_power));
                if (eta > best.eta) {
                    best.eta = eta;
                    best.trajectories = trajs;
                    best.powers = powers;
                }
                // odometer over the per-(m,n) power levels
                size_t pos_d = 0;
                while (pos_d < digit.size() && ++digit[pos_d] == spec.power_levels) {
                    digit[pos_d] = 0;
                    ++pos_d;
                }
                if (pos_d == digit.size()) break;
            }
        }
        int m = 0;
        while (m < M && ++traj_idx[m] == candidates[m].size()) {
            traj_idx[m] = 0;
            ++m;
        }
        if (m == M) break;
    }

    if (!std::isfinite(best.eta))
        throw InfeasibleError("grid_search_oracle: no separation-feasible grid point");
    return best;
}

} // namespace uavplan
