#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "runner.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Recompute the min average rate from a rates CSV.
double eta_from_rates_csv(const fs::path& csv) {
    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line)); // header
    CHECK(line == "slot,user_id,serving_uav,rate_bps_hz");
    std::map<int, std::pair<double, int>> sums; // user -> (sum, count)
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ','); // slot
        std::getline(ss, tok, ',');
        const int user = std::stoi(tok);
        std::getline(ss, tok, ','); // serving uav
        std::getline(ss, tok, ',');
        sums[user].first += std::stod(tok);
        sums[user].second += 1;
    }
    REQUIRE(!sums.empty());
    double eta = std::numeric_limits<double>::infinity();
    for (const auto& [user, sc] : sums) eta = std::min(eta, sc.first / sc.second);
    return eta;
}

} // namespace

TEST_CASE("bad flags exit with code 2") {
    CHECK(run_cli("--no-such-flag") == 2);
    CHECK(run_cli("--scheme joint") == 2);           // neither scenario nor random
    CHECK(run_cli("--random --scheme bogus") == 2);  // unknown scheme
    CHECK(run_cli("--random --users 0") == 2);
}

TEST_CASE("missing scenario file exits with code 3") {
    CHECK(run_cli("--scenario definitely_absent.json --scheme joint") == 3);
}

TEST_CASE("joint run writes the expected files") {
    TempDir dir("cli_out_joint");
    const int rc = run_cli("--random --seed 7 --users 4 --uavs 2 --slots 20 "
                           "--scheme joint --out " + dir.path.string());
    REQUIRE(rc == 0);
    for (const char* f : {"joint_report.txt", "joint_trajectory.csv",
                          "joint_rates.csv", "scenario.json"})
        CHECK(fs::exists(dir.path / f));

    // Rates CSV must reproduce the library result for the saved scenario.
    const uavplan::Scenario s = uavplan::load_scenario((dir.path / "scenario.json").string());
    uavplan::SolverOptions opt;
    const uavplan::RunReport rep = uavplan::run_scheme(s, uavplan::Scheme::joint, opt);
    const double eta_csv = eta_from_rates_csv(dir.path / "joint_rates.csv");
    CHECK(eta_csv == doctest::Approx(rep.final_eta).epsilon(1e-9));

    // Trajectory CSV header and row count: slots * uavs rows.
    std::ifstream tr(dir.path / "joint_trajectory.csv");
    std::string header;
    REQUIRE(std::getline(tr, header));
    CHECK(header == "slot,time_s,uav_id,x_m,y_m,z_m");
    int rows = 0;
    for (std::string l; std::getline(tr, l);) ++rows;
    CHECK(rows == 20 * 2);
}

TEST_CASE("scheme all writes files for all four schemes") {
    TempDir dir("cli_out_all");
    REQUIRE(run_cli("--random --seed 3 --users 3 --uavs 2 --slots 10 "
                    "--scheme all --out " + dir.path.string()) == 0);
    for (const char* sch : {"joint", "power-only", "trajectory-only", "fixed"}) {
        CHECK(fs::exists(dir.path / (std::string(sch) + "_report.txt")));
        CHECK(fs::exists(dir.path / (std::string(sch) + "_rates.csv")));
        CHECK(fs::exists(dir.path / (std::string(sch) + "_trajectory.csv")));
    }
}

TEST_CASE("identical flags produce byte-identical outputs") {
    TempDir a("cli_det_a"), b("cli_det_b");
    const std::string flags = "--random --seed 42 --users 4 --uavs 2 --slots 15 --scheme joint --out ";
    REQUIRE(run_cli(flags + a.path.string()) == 0);
    REQUIRE(run_cli(flags + b.path.string()) == 0);
    for (const char* f : {"joint_report.txt", "joint_trajectory.csv",
                          "joint_rates.csv", "scenario.json"})
        CHECK(slurp(a.path / f) == slurp(b.path / f));
}

TEST_CASE("sweep mode emits a summary table") {
    TempDir dir("cli_sweep");
    REQUIRE(run_cli("--sweep --users-range 2..3 --uavs-range 1..2 --seeds 2 "
                    "--slots 8 --out " + dir.path.string()) == 0);
    REQUIRE(fs::exists(dir.path / "sweep.csv"));
    std::ifstream in(dir.path / "sweep.csv");
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "uavs,users,mean_eta_bps_hz,mean_user_rate_bps_hz");
    int rows = 0;
    for (std::string l; std::getline(in, l);) ++rows;
    CHECK(rows == 4); // 2 user counts x 2 uav counts
}
