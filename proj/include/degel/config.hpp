#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "degel/types.hpp"

namespace degel {

/// Spec strings of the form `kind` or `kind:arg1:arg2`.
struct TaggedSpec {
    std::string kind;
    std::vector<double> args;
    /// Raw text after the first ':' (used by `table:<path>`).
    std::string raw;
};

/// Parsed experiment configuration. Defaults are the values assigned here.
struct ExperimentConfig {
    std::string experiment;  ///< empty when the config does not name one

    int n = 65;
    Point center{0.0, 0.0};
    double radius = 1.0;

    std::string op = "laplacian";
    double op_lambda = 1.0;
    double op_Lambda = 1.0;
    double op_p = 2.0;
    int op_m = 3;
    Point op_sigma{1.0, 1.0};
    double op_xi_bound = 1.0;

    bool degeneracy = true;
    double p = 2.0;
    double q = 3.0;
    TaggedSpec a{"const", {0.0}, "0"};
    double eps_reg = 1e-8;  ///< solver-side gradient floor

    TaggedSpec source{"const", {0.0}, "0"};
    double mu = 1.0;
    TaggedSpec boundary{"const", {0.0}, "0"};
    TaggedSpec obstacle{"none", {}, ""};

    double tol = 1e-7;
    double dt_safety = 0.4;
    long max_iter = 500000;
    bool monotone_pucci = false;

    Point x0{0.0, 0.0};
    /// Radii bounds; a trailing `h` multiplies by the grid spacing.
    std::string r_min = "4h";
    std::string r_max = "0.25";
    int per_decade = 8;
    std::optional<double> beta;
    bool sampled = false;
    std::optional<double> threshold;

    double barrier_lambda = 1.0;
    double barrier_Lambda = 1.0;
    double barrier_L1 = 1.0;
    int barrier_N = 2;
    double barrier_diam = 2.0;
    double barrier_norm_a = 1.0;
    double barrier_m = 1.0;
    double barrier_c_fraction = 0.9;

    std::vector<double> deltas{1e-1, 1e-2, 1e-3};
    double approx_radius = 0.5;

    std::vector<double> taus{1e-1, 1e-2, 1e-3, 1e-4};
    int recession_samples = 20;

    std::optional<double> band_min;
    std::optional<double> band_max;

    /// 1-based line of every key that was set explicitly.
    std::map<std::string, std::size_t> lines;
};

/// Line-oriented `key = value` text with `#` comments. Unknown or duplicate
/// keys, malformed values and out-of-range values raise ParseError.
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file.
ExperimentConfig load_config(const std::string& path);

/// `kind` or `kind:a:b:...` with numeric arguments (table keeps the raw path).
TaggedSpec parse_tagged(std::string_view text);

/// Resolves "<k>h" or a plain number against the grid spacing.
double resolve_length(const std::string& text, double h);

/// Experiment tags accepted by the runner.
const std::vector<std::string>& experiment_tags();

}  // namespace degel
