#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hjbr/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver and verifier for discounted control of reflected diffusions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    long long seed = -1;

    for (const char* name : {"solve", "simulate", "estimate", "verify", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file path")->required();
        sub->add_option("--output-dir", output_dir, "artifact directory override");
        sub->add_option("--seed", seed, "seed override");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        hjbr::RunConfig config = hjbr::parse_config(read_file(config_path));
        config.command = hjbr::parse_command(app.get_subcommands().front()->get_name());
        if (!output_dir.empty()) config.output_dir = output_dir;
        if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
        return hjbr::run(config);
    } catch (const std::exception& e) {
        std::cerr << "hjbr: " << e.what() << "\n";
        return 1;
    }
}
