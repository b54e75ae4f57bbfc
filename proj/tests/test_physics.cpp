#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "physics.hpp"
#include "test_util.hpp"
#include "trajectory.hpp"

using namespace uavplan;
using test::Rng;

TEST_CASE("channel gain at reference and derived distances") {
    CHECK(channel_gain({0, 0, 1}, {0, 0, 0}, 1e-6) == doctest::Approx(1e-6).epsilon(1e-14));
    CHECK(channel_gain({0, 0, 100}, {0, 0, 0}, 1e-6) ==
          doctest::Approx(1e-10).epsilon(1e-14));
    // d^2 = 300^2 + 400^2 + 100^2 = 260000
    CHECK(channel_gain({300, 400, 100}, {0, 0, 0}, 1e-6) ==
          doctest::Approx(1e-6 / 260000.0).epsilon(1e-14));
}

TEST_CASE("coincident positions rejected") {
    CHECK_THROWS_AS(channel_gain({1, 2, 3}, {1, 2, 3}, 1e-6), ValidationError);
}

TEST_CASE("channel gain is translation and axis-swap invariant") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Vector3d a(rng.uniform(-500, 500), rng.uniform(-500, 500),
                                rng.uniform(1, 200));
        const Eigen::Vector3d b(rng.uniform(-500, 500), rng.uniform(-500, 500), 0.0);
        const Eigen::Vector3d shift(rng.uniform(-100, 100), rng.uniform(-100, 100),
                                    rng.uniform(-10, 10));
        const double g = channel_gain(a, b, 1e-6);
        CHECK(channel_gain(a + shift, b + shift, 1e-6) == doctest::Approx(g).epsilon(1e-12));
        const Eigen::Vector3d as(a.y(), a.x(), a.z()), bs(b.y(), b.x(), b.z());
        CHECK(channel_gain(as, bs, 1e-6) == doctest::Approx(g).epsilon(1e-12));
    }
}

TEST_CASE("sinr hand examples") {
    Eigen::VectorXd p1(1), g1(1);
    p1 << 1e-6;
    g1 << 1e-10;
    CHECK(sinr(p1, g1, 0, 1e-13) == doctest::Approx(1e-3).epsilon(1e-12));

    Eigen::VectorXd p2(2), g2(2);
    p2 << 1e-6, 1e-6;
    g2 << 1e-10, 1e-10;
    // 1e-16 / (1e-16 + 1e-13) = 1/1001
    CHECK(sinr(p2, g2, 0, 1e-13) == doctest::Approx(1.0 / 1001.0).epsilon(1e-12));

    p2 << 0.0, 1e-6;
    CHECK(sinr(p2, g2, 0, 1e-13) == 0.0);
}

TEST_CASE("sinr is degree-0 homogeneous in (powers, noise)") {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        Eigen::VectorXd p(3), g(3);
        for (int j = 0; j < 3; ++j) {
            p[j] = rng.uniform() * 1e-6;
            g[j] = rng.uniform(1e-12, 1e-9);
        }
        const double noise = rng.uniform(1e-14, 1e-12);
        const double c = rng.uniform(0.1, 10.0);
        const double base = sinr(p, g, 1, noise);
        CHECK(sinr((c * p).eval(), g, 1, c * noise) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("instantaneous rate") {
    CHECK(instantaneous_rate(0.0) == 0.0);
    CHECK(instantaneous_rate(1.0) == 1.0);
    CHECK(instantaneous_rate(1e-3) == doctest::Approx(1.44197e-3).epsilon(1e-5));
}

namespace {

Scenario single_uav_scenario() {
    Scenario s;
    s.users.push_back({0, {500, 0, 0}});
    s.uavs.push_back({0, {0, 0, 100}, 10.0, 1e-6});
    s.altitude = 100;
    s.period = 100;
    s.min_separation = 50;
    s.ref_gain = 1e-6;
    s.noise_power = 1e-13;
    s.slots = 8;
    s.validate();
    return s;
}

} // namespace

TEST_CASE("average rate of a hovering UAV equals the single-slot rate") {
    Scenario s = single_uav_scenario();
    const TimeGrid grid = TimeGrid::make(s.period, s.slots);
    const auto traj = make_trajectory(s.uavs[0].initial_position,
                                      s.uavs[0].initial_position, 0.0, 10.0, s.period);
    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(1, s.slots, 1e-6);
    const Pairing pairing{{0}};
    const Eigen::VectorXd rates = average_rates({traj}, p, pairing, s, grid);

    const double gain = channel_gain(s.uavs[0].initial_position, s.users[0].position, 1e-6);
    const double expected = instantaneous_rate(1e-6 * gain / 1e-13);
    CHECK(rates[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("doubling noise strictly decreases every average rate") {
    Scenario s = single_uav_scenario();
    const TimeGrid grid = TimeGrid::make(s.period, s.slots);
    const auto traj = make_trajectory(s.uavs[0].initial_position, {600, 0, 100}, 10.0, 10.0,
                                      s.period);
    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(1, s.slots, 1e-6);
    const Pairing pairing{{0}};
    const double base = average_rates({traj}, p, pairing, s, grid)[0];
    s.noise_power *= 2.0;
    CHECK(average_rates({traj}, p, pairing, s, grid)[0] < base);
}

TEST_CASE("midpoint discretization converges to the fine-grid reference") {
    Scenario s = single_uav_scenario();
    const Pairing pairing{{0}};
    auto eta_at = [&](int slots) {
        Scenario sc = s;
        sc.slots = slots;
        const TimeGrid grid = TimeGrid::make(sc.period, slots);
        const auto traj = make_trajectory(sc.uavs[0].initial_position, {1000, 0, 100}, 0.0,
                                          10.0, sc.period);
        Eigen::MatrixXd p = Eigen::MatrixXd::Constant(1, slots, 1e-6);
        return average_rates({traj}, p, pairing, sc, grid)[0];
    };
    const double ref = eta_at(1024);
    const double err4 = std::abs(eta_at(4) - ref);
    const double err8 = std::abs(eta_at(8) - ref);
    CHECK(err4 < 0.25 * ref);
    CHECK(err8 < 0.6 * err4); // midpoint rule is second order
}

TEST_CASE("single-UAV rates carry no interference term") {
    Scenario s = single_uav_scenario();
    const TimeGrid grid = TimeGrid::make(s.period, s.slots);
    Rng rng(5);
    const auto traj = test::random_trajectory(rng, s.uavs[0], s.altitude, s.period);
    Eigen::MatrixXd p = test::random_powers(rng, s);
    const Pairing pairing{{0}};
    const Eigen::VectorXd rates = average_rates({traj}, p, pairing, s, grid);

    // Interference-free recomputation must agree bit-for-bit.
    const auto pos = sample_positions(traj, grid);
    double acc = 0.0;
    for (int n = 0; n < s.slots; ++n) {
        const double g =
            channel_gain(pos.row(n).transpose(), s.users[0].position, s.ref_gain);
        acc += std::log2(1.0 + p(0, n) * g / s.noise_power);
    }
    CHECK(rates[0] == acc / s.slots);
}

TEST_CASE("rates stay finite for feasible fuzzed inputs") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const Scenario s = random_scenario(1000 + trial, 1 + rng.below(6), 1 + rng.below(3),
                                           rng.uniform(0.0, 2000.0));
        Scenario sc = s;
        sc.slots = 12;
        const TimeGrid grid = TimeGrid::make(sc.period, sc.slots);
        const auto trajs = test::random_trajectories(rng, sc);
        const auto p = test::random_powers(rng, sc);
        const Pairing pairing = assign_users(sc);
        const Eigen::VectorXd rates = average_rates(trajs, p, pairing, sc, grid);
        for (int k = 0; k < rates.size(); ++k) {
            CHECK(std::isfinite(rates[k]));
            CHECK(rates[k] >= 0.0);
        }
    }
}

TEST_CASE("min_rate") {
    Eigen::VectorXd v(3);
    v << 1, 2, 3;
    CHECK(min_rate(v) == 1.0);
    Eigen::VectorXd one(1);
    one << 5;
    CHECK(min_rate(one) == 5.0);
    Eigen::VectorXd eq = Eigen::VectorXd::Constant(4, 2.5);
    CHECK(min_rate(eq) == 2.5);
    CHECK_THROWS_AS(min_rate(Eigen::VectorXd()), ValidationError);
}

TEST_CASE("time grid structure") {
    const TimeGrid g = TimeGrid::make(100.0, 4);
    CHECK(g.slot_duration == 25.0);
    CHECK(g.midpoints == std::vector<double>{12.5, 37.5, 62.5, 87.5});
    CHECK(g.slots * g.slot_duration == g.period);
}
