#ifndef UAVPLAN_SCENARIO_HPP
#define UAVPLAN_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace uavplan {

struct UserNode {
    int id = 0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero(); // (x, y, z) meters
};

struct UavSpec {
    int id = 0;
    Eigen::Vector3d initial_position = Eigen::Vector3d::Zero(); // third coord = altitude
    double speed = 0.0;     // m/s
    double max_power = 0.0; // watts
};

// Immutable world description. All powers/gains are linear (watts,
// dimensionless); file loading converts dB/dBm on the way in.
struct Scenario {
    std::vector<UserNode> users;
    std::vector<UavSpec> uavs;
    double altitude = 0.0;       // H, meters
    double period = 0.0;         // T, seconds
    double min_separation = 0.0; // d_min, meters
    double ref_gain = 0.0;       // rho_0 at 1 m, linear
    double noise_power = 0.0;    // sigma^2, watts
    int slots = 0;               // N, time discretization

    int num_users() const { return static_cast<int>(users.size()); }
    int num_uavs() const { return static_cast<int>(uavs.size()); }

    // Throws ValidationError naming the first violated invariant.
    void validate() const;
};

double db_to_linear(double db);
double dbm_to_watts(double dbm);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

// Parse from file contents (used by load_scenario and fuzz tests).
Scenario parse_scenario(const std::string& text);

// FNV-1a over the canonical serialized form.
std::uint64_t scenario_digest(const Scenario& s);

struct ScenarioDefaults {
    double altitude = 100.0;
    double period = 100.0;
    double min_separation = 50.0;
    double ref_gain = 1e-6;     // -60 dB
    double noise_power = 1e-13; // -100 dBm
    double speed = 10.0;
    double max_power = 1e-6;    // -30 dBm
    int slots = 100;
};

// Users uniform in [0, area]^2 at z=0; UAVs evenly spaced on a horizontal
// line through the area center with spacing max(d_min, area/(m+1)).
// Pure function of its arguments.
Scenario random_scenario(std::uint64_t seed, int k, int m, double area,
                         const ScenarioDefaults& defaults = {});

} // namespace uavplan

#endif
