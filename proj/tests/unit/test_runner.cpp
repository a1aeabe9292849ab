#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hjbr/runner.hpp"

using namespace hjbr;
namespace fs = std::filesystem;

namespace {

RunConfig base_config(const std::string& out_dir) {
    RunConfig config;
    config.example = 1;
    config.params.theta_a = 0.1;
    config.params.theta_b = 0.5;
    config.params.theta_d = 0.5;
    config.params.theta_e = 0.0;
    config.params.sigma_x = 0.3;
    config.params.u_a = 0.0;
    config.params.u_b = 1.0;
    config.params.alpha = 1.0;
    config.params.beta = 1.0;
    config.n_nodes = 101;
    config.n_paths = 64;
    config.dt = 1e-3;
    config.horizon = 1.0;
    config.seed = 42;
    config.output_dir = out_dir;
    return config;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("solve writes the value table and convergence log") {
    TempDir dir("hjbr_test_solve");
    RunConfig config = base_config(dir.path.string());
    config.command = Command::kSolve;
    CHECK(run(config) == 0);
    const std::string value = slurp(dir.path / "value.csv");
    CHECK(value.find("# hjbr command=solve") != std::string::npos);
    CHECK(value.find("x,v,policy") != std::string::npos);
    CHECK(fs::exists(dir.path / "convergence.csv"));
}

TEST_CASE("artifacts are byte-identical across reruns of the same config") {
    TempDir dir_a("hjbr_test_rerun_a");
    TempDir dir_b("hjbr_test_rerun_b");
    RunConfig config = base_config(dir_a.path.string());
    config.command = Command::kSolve;
    REQUIRE(run(config) == 0);
    config.output_dir = dir_b.path.string();
    REQUIRE(run(config) == 0);
    CHECK(slurp(dir_a.path / "value.csv") == slurp(dir_b.path / "value.csv"));
}

TEST_CASE("simulate writes one trajectory file per path") {
    TempDir dir("hjbr_test_simulate");
    RunConfig config = base_config(dir.path.string());
    config.command = Command::kSimulate;
    config.n_paths = 3;
    CHECK(run(config) == 0);
    CHECK(fs::exists(dir.path / "path_0000.csv"));
    CHECK(fs::exists(dir.path / "path_0002.csv"));
    const std::string body = slurp(dir.path / "path_0001.csv");
    CHECK(body.find("t,x,l,u") != std::string::npos);
    CHECK(body.find("seed=42") != std::string::npos);
}

TEST_CASE("estimate writes a summary with the family records") {
    TempDir dir("hjbr_test_estimate");
    RunConfig config = base_config(dir.path.string());
    config.command = Command::kEstimate;
    config.n_paths = 32;
    CHECK(run(config) == 0);
    const std::string body = slurp(dir.path / "estimate.txt");
    CHECK(body.find("label = extracted") != std::string::npos);
    CHECK(body.find("best_value = ") != std::string::npos);
    CHECK(body.find("tail_bound = ") != std::string::npos);
}

TEST_CASE("verify passes on the exactly solvable case and writes all reports") {
    TempDir dir("hjbr_test_verify");
    RunConfig config = base_config(dir.path.string());
    config.command = Command::kVerify;
    config.n_paths = 200;
    config.horizon = 2.0;
    CHECK(run(config) == 0);
    for (const char* name :
         {"viscosity.txt", "dpp.txt", "mc_vs_pde.txt", "equicontinuity.txt"})
        CHECK(fs::exists(dir.path / name));
    CHECK(slurp(dir.path / "viscosity.txt").find("pass = 1") != std::string::npos);
}

TEST_CASE("solver preconditions surface as errors from run") {
    TempDir dir("hjbr_test_badgrid");
    RunConfig config = base_config(dir.path.string());
    config.command = Command::kSolve;
    config.n_nodes = 2;  // below the grid minimum
    CHECK_THROWS(run(config));
}

TEST_CASE("sweep over the boundary cost produces ordered value tables") {
    TempDir dir("hjbr_test_sweep");
    RunConfig config = base_config(dir.path.string());
    config.command = Command::kSweep;
    config.params.theta_e = 0.0;
    config.sweep_param = "theta_e";
    config.sweep_values = {0.0, 0.1, 0.2};
    CHECK(run(config) == 0);
    CHECK(fs::exists(dir.path / "index.csv"));
    CHECK(fs::exists(dir.path / "value_theta_e_00.csv"));
    CHECK(fs::exists(dir.path / "value_theta_e_02.csv"));
    CHECK(slurp(dir.path / "index.csv").find("monotone_in_theta_e = 1")
          != std::string::npos);

    // pointwise monotone in theta_e at every node
    auto load_values = [&](const char* name) {
        std::ifstream in(dir.path / name);
        std::string line;
        std::getline(in, line);  // header
        std::getline(in, line);  // column names
        std::vector<double> v;
        while (std::getline(in, line)) {
            const auto first = line.find(',');
            const auto second = line.find(',', first + 1);
            v.push_back(std::stod(line.substr(first + 1, second - first - 1)));
        }
        return v;
    };
    const auto v0 = load_values("value_theta_e_00.csv");
    const auto v1 = load_values("value_theta_e_01.csv");
    const auto v2 = load_values("value_theta_e_02.csv");
    REQUIRE(v0.size() == v1.size());
    REQUIRE(v1.size() == v2.size());
    for (std::size_t i = 0; i < v0.size(); ++i) {
        CHECK(v1[i] >= v0[i] - 1e-12);
        CHECK(v2[i] >= v1[i] - 1e-12);
    }
}
