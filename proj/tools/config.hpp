#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sklern/radial.hpp"

namespace sklern::cli {

/// Invalid configuration; exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string suite;
    int n = 3;
    int k = 2;
    std::vector<double> kappa;
    /// 0 selects 2n.
    int order = 0;
    double mu = 0.0;
    std::optional<Domain> domain;
    int grid = 16000;
    double epsilon = 0.0;
    double beta = 1.0;
    /// 0 selects n + 1/2.
    double theta = 0.0;
    double delta = 0.05;
    int samples = 256;
    std::string json_out;
    std::string csv_out;
    std::string spheres_out;
    std::uint64_t seed = 1;
    int draws = 20;
    std::vector<std::pair<int, int>> pairs;

    /// Config-file line of each key that was read from a file and not overridden.
    std::map<std::string, int> origin;
    std::string source;

    [[nodiscard]] int effective_order() const { return order > 0 ? order : 2 * n + 2; }
    [[nodiscard]] RadialProblem problem() const;
};

/// Reads a JSON config; syntax and type errors carry the file line.
RunConfig load_config(const std::string& path);

/// Marks a key as set from the command line.
void override_key(RunConfig& cfg, const std::string& key);

/// Re-checks every field the command will use. `needs` lists those keys.
void validate(const RunConfig& cfg, const std::vector<std::string>& needs);

std::vector<double> parse_list(const std::string& text, const std::string& what);
std::vector<std::pair<int, int>> parse_pairs(const std::string& text);

} // namespace sklern::cli
