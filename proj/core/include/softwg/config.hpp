#pragma once

#include "softwg/geometry.hpp"
#include "softwg/transverse.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace softwg {

enum class Experiment { transverse, variational, spectrum, sweep };
Experiment experiment_from_string(const std::string& name); ///< throws ConfigError
std::string to_string(Experiment e);

enum class OutputFormat { csv, json };
OutputFormat format_from_string(const std::string& name);

struct GridConfig {
    double x_min = -20.0, x_max = 20.0, y_min = -12.0, y_max = 20.0;
    double h = 1.0 / 16.0;
    int refinement_levels = 2;
    bool operator==(const GridConfig&) const = default;
};

struct SolverConfig {
    int k = 4;
    double tol = 2e-3; ///< allowed refinement disagreement on the lowest pair
    std::uint64_t seed = 1;
    int max_iterations = 800;
    bool operator==(const SolverConfig&) const = default;
};

/// One JSON document drives every experiment; unknown fields are rejected
/// and all module-level invariants are re-validated while parsing.
struct RunConfig {
    double R = 4.0;
    double theta = M_PI / 2.0;
    double a = 0.5;
    TransverseProfile profile = DeltaWell{-1.0};
    GridConfig grid;
    SolverConfig solver;
    std::vector<double> R_list{3.0, 5.0, 7.0};        // transverse
    std::vector<int> n_list{100, 200, 400, 1600};     // variational
    std::vector<double> theta_list{0.5, 1.5, 2.5, 3.0}; // sweep

    WaveguideGeometry geometry() const { return {R, theta, a}; }
    bool operator==(const RunConfig&) const = default;
};

/// Parse from JSON text; `base_dir` resolves a relative profile table_path.
RunConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");

/// Read and parse a config file (table paths resolve against its directory).
RunConfig load_config(const std::string& path);

/// Canonical re-emission; parse_config(resolved_config_json(c)) == c.
std::string resolved_config_json(const RunConfig& config);

} // namespace softwg
