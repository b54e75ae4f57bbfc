#include "scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace uavplan {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void Scenario::validate() const {
    if (users.empty()) throw ValidationError("scenario needs at least one user");
    if (uavs.empty()) throw ValidationError("scenario needs at least one UAV");
    if (!(altitude > 0)) throw ValidationError("altitude must be positive");
    if (!(period > 0)) throw ValidationError("period must be positive");
    if (min_separation < 0) throw ValidationError("min_separation must be non-negative");
    if (!(ref_gain > 0)) throw ValidationError("ref_gain must be positive");
    if (!(noise_power > 0)) throw ValidationError("noise_power must be positive");
    if (slots < 2) throw ValidationError("slots must be at least 2");

    std::set<int> user_ids, uav_ids;
    for (const auto& u : users) {
        if (!user_ids.insert(u.id).second)
            throw ValidationError("duplicate user id " + std::to_string(u.id));
        if (u.position.z() < 0)
            throw ValidationError("user " + std::to_string(u.id) + " below ground (z < 0)");
        if (u.position.z() >= altitude)
            throw ValidationError("user " + std::to_string(u.id) +
                                  " at or above flight altitude");
    }
    for (const auto& v : uavs) {
        if (!uav_ids.insert(v.id).second)
            throw ValidationError("duplicate uav id " + std::to_string(v.id));
        if (!(v.speed > 0))
            throw ValidationError("uav " + std::to_string(v.id) + " speed must be positive");
        if (!(v.max_power > 0))
            throw ValidationError("uav " + std::to_string(v.id) + " max_power must be positive");
        if (std::abs(v.initial_position.z() - altitude) > 1e-9 * std::max(1.0, altitude))
            throw ValidationError("uav " + std::to_string(v.id) +
                                  " initial altitude differs from scenario altitude");
    }
    for (size_t a = 0; a < uavs.size(); ++a) {
        for (size_t b = a + 1; b < uavs.size(); ++b) {
            double d = (uavs[a].initial_position - uavs[b].initial_position).norm();
            // Relative slack so placements at exactly d_min survive rounding.
            if (d < min_separation * (1.0 - 1e-12))
                throw ValidationError("initial UAV separation below d_min (uavs " +
                                      std::to_string(uavs[a].id) + ", " +
                                      std::to_string(uavs[b].id) + ")");
        }
    }
}

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ParseError("unknown key '" + it.key() + "' in " + where);
    }
}

double get_num(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError("missing key '" + key + "' in " + where);
    if (!obj.at(key).is_number()) throw ParseError("key '" + key + "' in " + where + " must be a number");
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError("missing key '" + key + "' in " + where);
    if (!obj.at(key).is_number_integer())
        throw ParseError("key '" + key + "' in " + where + " must be an integer");
    return obj.at(key).get<int>();
}

// Exactly one of the two alternative keys must be present; returns the
// value converted to linear units.
double get_either(const json& obj, const std::string& k_converted,
                  const std::string& k_linear, double (*convert)(double),
                  const std::string& where) {
    bool has_c = obj.contains(k_converted);
    bool has_l = obj.contains(k_linear);
    if (has_c == has_l)
        throw ParseError("exactly one of '" + k_converted + "' or '" + k_linear +
                         "' required in " + where);
    if (has_c) {
        if (!obj.at(k_converted).is_number())
            throw ParseError("key '" + k_converted + "' must be a number");
        return convert(obj.at(k_converted).get<double>());
    }
    if (!obj.at(k_linear).is_number())
        throw ParseError("key '" + k_linear + "' must be a number");
    return obj.at(k_linear).get<double>();
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario parse failure: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("scenario file must be an object");

    require_keys(j,
                 {"altitude_m", "period_s", "min_separation_m", "ref_gain_db",
                  "ref_gain_linear", "noise_dbm", "noise_w", "slots", "users", "uavs"},
                 "scenario");

    Scenario s;
    s.altitude = get_num(j, "altitude_m", "scenario");
    s.period = get_num(j, "period_s", "scenario");
    s.min_separation = get_num(j, "min_separation_m", "scenario");
    s.ref_gain = get_either(j, "ref_gain_db", "ref_gain_linear", &db_to_linear, "scenario");
    s.noise_power = get_either(j, "noise_dbm", "noise_w", &dbm_to_watts, "scenario");
    s.slots = get_int(j, "slots", "scenario");

    if (!j.contains("users") || !j.at("users").is_array())
        throw ParseError("scenario needs a 'users' list");
    if (!j.contains("uavs") || !j.at("uavs").is_array())
        throw ParseError("scenario needs a 'uavs' list");

    for (const auto& ju : j.at("users")) {
        if (!ju.is_object()) throw ParseError("user entry must be an object");
        require_keys(ju, {"id", "x", "y", "z"}, "user");
        UserNode u;
        u.id = get_int(ju, "id", "user");
        double z = ju.contains("z") ? get_num(ju, "z", "user") : 0.0;
        u.position = {get_num(ju, "x", "user"), get_num(ju, "y", "user"), z};
        s.users.push_back(u);
    }
    for (const auto& jv : j.at("uavs")) {
        if (!jv.is_object()) throw ParseError("uav entry must be an object");
        require_keys(jv, {"id", "x", "y", "speed_mps", "max_power_dbm", "max_power_w"}, "uav");
        UavSpec v;
        v.id = get_int(jv, "id", "uav");
        v.initial_position = {get_num(jv, "x", "uav"), get_num(jv, "y", "uav"), s.altitude};
        v.speed = get_num(jv, "speed_mps", "uav");
        v.max_power = get_either(jv, "max_power_dbm", "max_power_w", &dbm_to_watts, "uav");
        s.uavs.push_back(v);
    }

    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

// Shortest round-trippable decimal form.
json num(double v) { return json(v); }

json to_json(const Scenario& s) {
    json j;
    j["altitude_m"] = num(s.altitude);
    j["period_s"] = num(s.period);
    j["min_separation_m"] = num(s.min_separation);
    j["ref_gain_linear"] = num(s.ref_gain);
    j["noise_w"] = num(s.noise_power);
    j["slots"] = s.slots;
    j["users"] = json::array();
    for (const auto& u : s.users) {
        j["users"].push_back({{"id", u.id},
                              {"x", num(u.position.x())},
                              {"y", num(u.position.y())},
                              {"z", num(u.position.z())}});
    }
    j["uavs"] = json::array();
    for (const auto& v : s.uavs) {
        j["uavs"].push_back({{"id", v.id},
                             {"x", num(v.initial_position.x())},
                             {"y", num(v.initial_position.y())},
                             {"speed_mps", num(v.speed)},
                             {"max_power_w", num(v.max_power)}});
    }
    return j;
}

} // namespace

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << to_json(s).dump(2) << "\n";
}

std::uint64_t scenario_digest(const Scenario& s) {
    const std::string dump = to_json(s).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

// splitmix64; stable across platforms unlike <random> distributions.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

} // namespace

Scenario random_scenario(std::uint64_t seed, int k, int m, double area,
                         const ScenarioDefaults& d) {
    if (k < 1) throw ValidationError("random_scenario requires k >= 1");
    if (m < 1) throw ValidationError("random_scenario requires m >= 1");
    if (area < 0) throw ValidationError("random_scenario requires area >= 0");

    Scenario s;
    s.altitude = d.altitude;
    s.period = d.period;
    s.min_separation = d.min_separation;
    s.ref_gain = d.ref_gain;
    s.noise_power = d.noise_power;
    s.slots = d.slots;

    Rng rng(seed);
    for (int i = 0; i < k; ++i) {
        UserNode u;
        u.id = i;
        u.position = {rng.uniform() * area, rng.uniform() * area, 0.0};
        s.users.push_back(u);
    }

    const double spacing = std::max(d.min_separation, area / (m + 1));
    const double cy = area / 2.0;
    const double x0 = area / 2.0 - spacing * (m - 1) / 2.0;
    for (int i = 0; i < m; ++i) {
        UavSpec v;
        v.id = i;
        v.initial_position = {x0 + spacing * i, cy, d.altitude};
        v.speed = d.speed;
        v.max_power = d.max_power;
        s.uavs.push_back(v);
    }

    s.validate();
    return s;
}

} // namespace uavplan
