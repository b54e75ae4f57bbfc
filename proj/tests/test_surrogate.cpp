#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "assignment.hpp"
#include "surrogate.hpp"
#include "test_util.hpp"

using namespace uavplan;
using test::Rng;

namespace {

struct Instance {
    Scenario scenario;
    Pairing pairing;
    TimeGrid grid;
    std::vector<OhfhTrajectory> trajs;
    Eigen::MatrixXd powers;
    ExpansionPoint expansion;
};

Instance random_instance(Rng& rng, int max_users = 4, int max_uavs = 3, int slots = 6) {
    const int k = 1 + rng.below(max_users);
    const int m = 1 + rng.below(max_uavs);
    Scenario s = random_scenario(rng.next(), k, m, rng.uniform(200.0, 1500.0));
    s.slots = slots;
    Instance inst{std::move(s), {}, TimeGrid::make(100.0, slots), {}, {}, {}};
    inst.pairing = assign_users(inst.scenario);
    inst.trajs = test::random_trajectories(rng, inst.scenario);
    inst.powers = test::random_powers(rng, inst.scenario);
    inst.expansion = test::expansion_from(inst.trajs, inst.powers, inst.grid);
    return inst;
}

std::vector<Eigen::Vector3d> slot_positions(const PositionsGrid& grid_pos, int n) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(grid_pos.size());
    for (const auto& p : grid_pos) out.push_back(p.row(n).transpose());
    return out;
}

// Exact rate of user k at one slot, from first principles.
double exact_rate(const std::vector<Eigen::Vector3d>& pos, const Eigen::VectorXd& powers,
                  const Eigen::Vector3d& user, int serving, double ref_gain, double noise) {
    double signal = 0.0, interference = 0.0;
    for (size_t j = 0; j < pos.size(); ++j) {
        const double recv =
            powers[static_cast<int>(j)] * ref_gain / (pos[j] - user).squaredNorm();
        if (static_cast<int>(j) == serving)
            signal = recv;
        else
            interference += recv;
    }
    return std::log2(1.0 + signal / (interference + noise));
}

} // namespace

TEST_CASE("rate decomposition identity: R = hat_rate - log2(I + sigma^2)") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const Instance inst = random_instance(rng);
        const int n = rng.below(inst.grid.slots);
        const auto pos = slot_positions(inst.expansion.positions, n);
        const Eigen::VectorXd p = inst.powers.col(n);
        for (int k = 0; k < inst.scenario.num_users(); ++k) {
            const int m = inst.pairing.serving[k];
            const Eigen::Vector3d& uk = inst.scenario.users[k].position;
            double interference = inst.scenario.noise_power;
            for (int j = 0; j < inst.scenario.num_uavs(); ++j)
                if (j != m)
                    interference += p[j] * inst.scenario.ref_gain / (pos[j] - uk).squaredNorm();
            const double lhs =
                hat_rate(pos, p, uk, inst.scenario.ref_gain, inst.scenario.noise_power) -
                std::log2(interference);
            const double rhs = exact_rate(pos, p, uk, m, inst.scenario.ref_gain,
                                          inst.scenario.noise_power);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("hat_rate with zero power reduces to log2(sigma^2)") {
    const std::vector<Eigen::Vector3d> pos = {{0, 0, 100}};
    Eigen::VectorXd p(1);
    p << 0.0;
    CHECK(hat_rate(pos, p, {0, 0, 0}, 1e-6, 1e-13) ==
          doctest::Approx(std::log2(1e-13)).epsilon(1e-12));
}

TEST_CASE("hat_rate is symmetric under swapping UAV indices") {
    const std::vector<Eigen::Vector3d> pos = {{100, 0, 100}, {-50, 30, 100}};
    const std::vector<Eigen::Vector3d> swapped = {pos[1], pos[0]};
    Eigen::VectorXd p(2), ps(2);
    p << 1e-6, 3e-7;
    ps << 3e-7, 1e-6;
    CHECK(hat_rate(pos, p, {10, 10, 0}, 1e-6, 1e-13) ==
          doctest::Approx(hat_rate(swapped, ps, {10, 10, 0}, 1e-6, 1e-13)).epsilon(1e-14));
}

TEST_CASE("hat_rate_lb: tight at expansion, global lower bound") {
    Rng rng(102);
    for (int trial = 0; trial < 150; ++trial) {
        const Instance inst = random_instance(rng);
        const int n = rng.below(inst.grid.slots);
        const auto exp_pos = slot_positions(inst.expansion.positions, n);
        const Eigen::VectorXd p = inst.powers.col(n);
        const int k = rng.below(inst.scenario.num_users());
        const Eigen::Vector3d& uk = inst.scenario.users[k].position;
        const double rho = inst.scenario.ref_gain;
        const double noise = inst.scenario.noise_power;

        const double exact = hat_rate(exp_pos, p, uk, rho, noise);
        CHECK(hat_rate_lb(exp_pos, exp_pos, p, uk, rho, noise) ==
              doctest::Approx(exact).epsilon(1e-12));

        for (int sweep = 0; sweep < 10; ++sweep) {
            auto cand = exp_pos;
            for (auto& c : cand) {
                c.x() += rng.uniform(-300, 300);
                c.y() += rng.uniform(-300, 300);
            }
            const double lb = hat_rate_lb(cand, exp_pos, p, uk, rho, noise);
            const double up = hat_rate(cand, p, uk, rho, noise);
            CHECK(lb <= up + 1e-12);
        }
    }
}

TEST_CASE("surrogate coefficient signs: A <= 0 (strict when transmitting), B >= 0") {
    Rng rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = random_instance(rng);
        const auto coeffs =
            compute_surrogate_coefficients(inst.expansion, inst.pairing, inst.scenario);
        for (int m = 0; m < inst.scenario.num_uavs(); ++m) {
            for (int k = 0; k < inst.scenario.num_users(); ++k) {
                for (int n = 0; n < inst.grid.slots; ++n) {
                    const double a = coeffs.a_at(m, k, n);
                    CHECK(a <= 0.0);
                    if (inst.powers(m, n) > 0) CHECK(a < 0.0);
                    CHECK(coeffs.b_at(m, k, n) >= 0.0);
                    if (m == inst.pairing.serving[k]) CHECK(coeffs.b_at(m, k, n) == 0.0);
                }
            }
        }
    }
}

TEST_CASE("lambda_lb: tightness, bound, zero-gradient case") {
    Rng rng(104);
    for (int trial = 0; trial < 300; ++trial) {
        const Eigen::Vector3d user(rng.uniform(-500, 500), rng.uniform(-500, 500), 0.0);
        const Eigen::Vector3d exp(rng.uniform(-500, 500), rng.uniform(-500, 500), 100.0);
        const Eigen::Vector3d cand(rng.uniform(-800, 800), rng.uniform(-800, 800), 100.0);
        CHECK(lambda_lb(exp, exp, user) ==
              doctest::Approx((exp - user).squaredNorm()).epsilon(1e-12));
        CHECK(lambda_lb(cand, exp, user) <= (cand - user).squaredNorm() + 1e-9);
        CHECK(lambda_lb(cand, user, user) == 0.0); // expansion at the user
    }
}

TEST_CASE("xi_lb: tightness, bound, coincident expansion") {
    Rng rng(105);
    for (int trial = 0; trial < 300; ++trial) {
        const auto rand3 = [&] {
            return Eigen::Vector3d(rng.uniform(-500, 500), rng.uniform(-500, 500), 100.0);
        };
        const Eigen::Vector3d em = rand3(), ej = rand3(), cm = rand3(), cj = rand3();
        CHECK(xi_lb(em, ej, em, ej) ==
              doctest::Approx((em - ej).squaredNorm()).epsilon(1e-12));
        CHECK(xi_lb(cm, cj, em, ej) <= (cm - cj).squaredNorm() + 1e-9);
        CHECK(xi_lb(cm, cj, em, em) == 0.0);
    }
}

TEST_CASE("check_rate_ub: tight at expansion, global upper bound, M=1 constant") {
    Rng rng(106);
    for (int trial = 0; trial < 150; ++trial) {
        const Instance inst = random_instance(rng);
        const int n = rng.below(inst.grid.slots);
        const int k = rng.below(inst.scenario.num_users());
        const int m = inst.pairing.serving[k];
        const int M = inst.scenario.num_uavs();
        const double noise = inst.scenario.noise_power;

        Eigen::VectorXd gains(M);
        const auto pos = slot_positions(inst.expansion.positions, n);
        for (int j = 0; j < M; ++j)
            gains[j] = inst.scenario.ref_gain /
                       (pos[j] - inst.scenario.users[k].position).squaredNorm();

        const Eigen::VectorXd p_exp = inst.powers.col(n);
        CHECK(check_rate_ub(p_exp, p_exp, gains, m, noise) ==
              doctest::Approx(check_rate(p_exp, gains, m, noise)).epsilon(1e-12));

        for (int sweep = 0; sweep < 10; ++sweep) {
            Eigen::VectorXd cand(M);
            for (int j = 0; j < M; ++j)
                cand[j] = rng.uniform() * inst.scenario.uavs[j].max_power;
            CHECK(check_rate_ub(cand, p_exp, gains, m, noise) >=
                  check_rate(cand, gains, m, noise) - 1e-12);
        }
    }

    // M = 1: no interferers, the bound is the constant log2(sigma^2).
    Eigen::VectorXd one(1), gains1(1);
    one << 5e-7;
    gains1 << 1e-10;
    CHECK(check_rate_ub(one, one, gains1, 0, 1e-13) ==
          doctest::Approx(std::log2(1e-13)).epsilon(1e-14));
}

TEST_CASE("trajectory surrogate: tight at expansion, lower bound elsewhere") {
    Rng rng(107);
    for (int trial = 0; trial < 60; ++trial) {
        Instance inst = random_instance(rng);
        const double truth =
            min_rate(average_rates(inst.trajs, inst.powers, inst.pairing, inst.scenario,
                                   inst.grid));
        const auto at_expansion = surrogate_trajectory_objective(
            inst.trajs, inst.expansion, inst.powers, inst.pairing, inst.scenario, inst.grid);
        REQUIRE(at_expansion.has_value());
        CHECK(*at_expansion == doctest::Approx(truth).epsilon(1e-9));

        for (int sweep = 0; sweep < 8; ++sweep) {
            Rng inner(rng.next());
            const auto cand = test::random_trajectories(inner, inst.scenario);
            const auto val = surrogate_trajectory_objective(
                cand, inst.expansion, inst.powers, inst.pairing, inst.scenario, inst.grid);
            if (!val) continue; // outside the lambda_lb trust region
            const double cand_truth = min_rate(
                average_rates(cand, inst.powers, inst.pairing, inst.scenario, inst.grid));
            CHECK(*val <= cand_truth + 1e-9);
        }
    }
}

TEST_CASE("power surrogate: tight at expansion, lower bound, concave") {
    Rng rng(108);
    for (int trial = 0; trial < 60; ++trial) {
        Instance inst = random_instance(rng);
        const double truth =
            min_rate(average_rates(inst.trajs, inst.powers, inst.pairing, inst.scenario,
                                   inst.grid));
        CHECK(surrogate_power_objective(inst.powers, inst.expansion, inst.trajs,
                                        inst.pairing, inst.scenario, inst.grid) ==
              doctest::Approx(truth).epsilon(1e-9));

        Rng inner(rng.next());
        for (int sweep = 0; sweep < 8; ++sweep) {
            const Eigen::MatrixXd a = test::random_powers(inner, inst.scenario);
            const Eigen::MatrixXd b = test::random_powers(inner, inst.scenario);
            const double va = surrogate_power_objective(a, inst.expansion, inst.trajs,
                                                        inst.pairing, inst.scenario, inst.grid);
            const double truth_a = min_rate(
                average_rates(inst.trajs, a, inst.pairing, inst.scenario, inst.grid));
            CHECK(va <= truth_a + 1e-9);

            // Midpoint concavity along the segment [a, b].
            const double vb = surrogate_power_objective(b, inst.expansion, inst.trajs,
                                                        inst.pairing, inst.scenario, inst.grid);
            const Eigen::MatrixXd mid = 0.5 * (a + b);
            const double vm = surrogate_power_objective(mid, inst.expansion, inst.trajs,
                                                        inst.pairing, inst.scenario, inst.grid);
            CHECK(vm >= 0.5 * (va + vb) - 1e-9);
        }
    }
}

TEST_CASE("linear terms match central finite differences of the exact functions") {
    Rng rng(109);
    for (int trial = 0; trial < 40; ++trial) {
        const Instance inst = random_instance(rng);
        const int n = rng.below(inst.grid.slots);
        const int k = rng.below(inst.scenario.num_users());
        const auto exp_pos = slot_positions(inst.expansion.positions, n);
        const Eigen::VectorXd p = inst.powers.col(n);
        const Eigen::Vector3d& uk = inst.scenario.users[k].position;
        const double rho = inst.scenario.ref_gain;
        const double noise = inst.scenario.noise_power;
        const int M = inst.scenario.num_uavs();

        // hat_rate vs its Taylor bound, every position coordinate.
        const double h = 0.05;
        for (int j = 0; j < M; ++j) {
            for (int c = 0; c < 2; ++c) {
                auto plus = exp_pos, minus = exp_pos;
                plus[j][c] += h;
                minus[j][c] -= h;
                const double d_exact =
                    (hat_rate(plus, p, uk, rho, noise) - hat_rate(minus, p, uk, rho, noise)) /
                    (2 * h);
                const double d_surr = (hat_rate_lb(plus, exp_pos, p, uk, rho, noise) -
                                       hat_rate_lb(minus, exp_pos, p, uk, rho, noise)) /
                                      (2 * h);
                if (std::abs(d_exact) < 1e-14) continue;
                CHECK(d_surr == doctest::Approx(d_exact).epsilon(1e-6));
            }
        }

        // check_rate vs its Taylor bound, every interferer power.
        const int m = inst.pairing.serving[k];
        Eigen::VectorXd gains(M);
        for (int j = 0; j < M; ++j) gains[j] = rho / (exp_pos[j] - uk).squaredNorm();
        for (int j = 0; j < M; ++j) {
            if (j == m) continue;
            const double hp = 1e-2 * inst.scenario.uavs[j].max_power;
            Eigen::VectorXd plus = p, minus = p;
            plus[j] += hp;
            minus[j] -= hp;
            const double d_exact =
                (check_rate(plus, gains, m, noise) - check_rate(minus, gains, m, noise)) /
                (2 * hp);
            const double d_surr = (check_rate_ub(plus, p, gains, m, noise) -
                                   check_rate_ub(minus, p, gains, m, noise)) /
                                  (2 * hp);
            CHECK(d_surr == doctest::Approx(d_exact).epsilon(1e-6));
        }
    }
}
