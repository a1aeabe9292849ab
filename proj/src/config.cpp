#include "hjbr/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace hjbr {

const char* command_name(Command command) {
    switch (command) {
        case Command::kSolve: return "solve";
        case Command::kSimulate: return "simulate";
        case Command::kEstimate: return "estimate";
        case Command::kVerify: return "verify";
        case Command::kSweep: return "sweep";
    }
    return "?";
}

Command parse_command(const std::string& name) {
    if (name == "solve") return Command::kSolve;
    if (name == "simulate") return Command::kSimulate;
    if (name == "estimate") return Command::kEstimate;
    if (name == "verify") return Command::kVerify;
    if (name == "sweep") return Command::kSweep;
    throw ConfigError("unknown command: " + name);
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw ConfigError("validation-error: key `" + key
                              + "` has trailing characters in value `" + value + "`");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("parse-error: key `" + key + "` expects a number, got `"
                          + value + "`");
    }
}

long parse_integer(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    if (std::floor(v) != v)
        throw ConfigError("validation-error: key `" + key + "` must be an integer");
    return static_cast<long>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("parse-error: key `" + key + "` has an empty list item");
        out.push_back(parse_number(key, item));
    }
    if (out.empty())
        throw ConfigError("validation-error: key `" + key + "` must list at least one value");
    return out;
}

const std::set<std::string> kSweepableParams = {
    "theta_a", "theta_b", "theta_d", "theta_e", "sigma_x", "u_a", "u_b", "beta"};

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::set<std::string> seen;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("parse-error: malformed section header at line "
                                  + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            static const std::set<std::string> kSections = {"problem", "grid", "mc",
                                                            "solver", "output", "sweep"};
            if (!kSections.count(section))
                throw ConfigError("unknown-key: section `" + section + "`");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("parse-error: expected `key = value` at line "
                              + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("parse-error: empty key or value at line "
                              + std::to_string(line_no));
        const std::string qualified = section + "." + key;
        if (!seen.insert(qualified).second)
            throw ConfigError("parse-error: duplicate key `" + qualified + "`");

        if (section == "problem") {
            if (key == "example") config.example = static_cast<int>(parse_integer(key, value));
            else if (key == "theta_a") config.params.theta_a = parse_number(key, value);
            else if (key == "theta_b") config.params.theta_b = parse_number(key, value);
            else if (key == "theta_d") config.params.theta_d = parse_number(key, value);
            else if (key == "theta_e") config.params.theta_e = parse_number(key, value);
            else if (key == "sigma_x") config.params.sigma_x = parse_number(key, value);
            else if (key == "u_a") config.params.u_a = parse_number(key, value);
            else if (key == "u_b") config.params.u_b = parse_number(key, value);
            else if (key == "alpha") config.params.alpha = parse_number(key, value);
            else if (key == "beta") config.params.beta = parse_number(key, value);
            else throw ConfigError("unknown-key: `" + qualified + "`");
        } else if (section == "grid") {
            if (key == "n_nodes") config.n_nodes = static_cast<int>(parse_integer(key, value));
            else throw ConfigError("unknown-key: `" + qualified + "`");
        } else if (section == "mc") {
            if (key == "n_paths") config.n_paths = parse_integer(key, value);
            else if (key == "dt") config.dt = parse_number(key, value);
            else if (key == "horizon") config.horizon = parse_number(key, value);
            else if (key == "epsilon") config.epsilon = parse_number(key, value);
            else if (key == "seed") {
                const long s = parse_integer(key, value);
                if (s < 0) throw ConfigError("validation-error: key `seed` must be >= 0");
                config.seed = static_cast<std::uint64_t>(s);
            } else throw ConfigError("unknown-key: `" + qualified + "`");
        } else if (section == "solver") {
            if (key == "tol") config.tol = parse_number(key, value);
            else if (key == "max_iter") config.max_iter = static_cast<int>(parse_integer(key, value));
            else if (key == "n_grid_controls")
                config.n_grid_controls = static_cast<int>(parse_integer(key, value));
            else throw ConfigError("unknown-key: `" + qualified + "`");
        } else if (section == "output") {
            if (key == "output_dir") config.output_dir = value;
            else throw ConfigError("unknown-key: `" + qualified + "`");
        } else if (section == "sweep") {
            if (key == "param") config.sweep_param = value;
            else if (key == "values") config.sweep_values = parse_list(key, value);
            else throw ConfigError("unknown-key: `" + qualified + "`");
        } else {
            throw ConfigError("unknown-key: `" + key + "` outside any section");
        }
    }

    // Validation: mirror the module-level preconditions so failures surface
    // with the offending key before any work starts.
    auto require = [](bool ok, const std::string& message) {
        if (!ok) throw ConfigError("validation-error: " + message);
    };
    require(config.example == 1 || config.example == 2, "example must be 1 or 2");
    require(config.params.alpha > 0.0, "alpha must be > 0");
    require(config.params.beta > 0.0, "beta must be > 0");
    require(config.params.sigma_x > 0.0, "sigma_x must be > 0");
    require(config.params.u_a < config.params.u_b, "u_a must be < u_b");
    require(config.params.theta_b != 0.0, "theta_b must be nonzero");
    if (config.example == 2)
        require(config.params.u_a >= 0.0, "u_a must be >= 0 for example 2");
    require(config.n_nodes >= 3, "n_nodes must be >= 3");
    require(config.n_paths >= 1, "n_paths must be >= 1");
    require(config.dt > 0.0, "dt must be > 0");
    require(config.horizon >= 0.0, "horizon must be >= 0");
    require(config.epsilon > 0.0, "epsilon must be > 0");
    require(config.tol > 0.0, "tol must be > 0");
    require(config.max_iter >= 1, "max_iter must be >= 1");
    require(config.n_grid_controls >= 2, "n_grid_controls must be >= 2");
    if (!config.sweep_param.empty())
        require(kSweepableParams.count(config.sweep_param) == 1,
                "sweep param `" + config.sweep_param + "` is not a problem parameter");
    return config;
}

ControlProblem build_problem(const RunConfig& config) {
    return config.example == 1 ? build_example1(config.params)
                               : build_example2(config.params);
}

std::string config_header(const RunConfig& config) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "hjbr command=%s example=%d theta_a=%.17g theta_b=%.17g "
                  "theta_d=%.17g theta_e=%.17g sigma_x=%.17g u_a=%.17g u_b=%.17g "
                  "alpha=%.17g beta=%.17g n_nodes=%d n_paths=%ld dt=%.17g "
                  "horizon=%.17g epsilon=%.17g tol=%.17g max_iter=%d "
                  "n_grid_controls=%d seed=%llu",
                  command_name(config.command), config.example, config.params.theta_a,
                  config.params.theta_b, config.params.theta_d, config.params.theta_e,
                  config.params.sigma_x, config.params.u_a, config.params.u_b,
                  config.params.alpha, config.params.beta, config.n_nodes,
                  config.n_paths, config.dt, config.horizon, config.epsilon,
                  config.tol, config.max_iter, config.n_grid_controls,
                  static_cast<unsigned long long>(config.seed));
    return buf;
}

}  // namespace hjbr
