#pragma once

// Batch front end behind the `rmep` executable.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmep/model.hpp"

namespace rmep::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_capacity = 3,
    exit_irregular = 4,
};

struct RunConfig {
    std::string command;  // solve-one | solve-complete | bench-random | ode-sl | ode-mathieu
    std::string input;    // problem file for solve-one / solve-complete
    std::filesystem::path out = ".";
    std::optional<std::uint64_t> seed;
    bool timestamp = true;

    // solve-one
    std::vector<cd> initial_lambdas;
    int max_iters = 1000;
    double rel_tol = 1e-6;
    bool kkt_check = true;
    int restarts = 0;

    // bench-random
    std::vector<Index> m = {20, 20};
    std::vector<Index> n = {5, 5};
    std::vector<double> sigmas = {0.0, 0.01, 0.05, 0.1, 0.2};
    int trials = 10;
    int threads = 1;

    // ode-sl / ode-mathieu
    Index n1 = 30;
    Index n2 = 30;
    int oversampling = 4;
    double alpha = 4.0;
    double beta = 1.0;
    int functions = 5;  // eigenfunction / mode grids written for this many tuples
    int grid_points = 201;
};

/// Thrown for unusable configurations; maps to exit_config.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads a JSON config object into cfg. Keys are the field names above
/// (initial_lambdas as [[re, im], ...]).
void apply_json(RunConfig& cfg, const std::string& json_text);

/// `rmep <command> [--config file] [--seed s] [--out dir] [--no-timestamp] [overrides]`.
/// Flags override the config file. Throws ConfigError; returns nullopt after --help.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& help_out);

/// Runs the command, writing artifacts under cfg.out. Solver errors are
/// mapped to exit codes and reported on `log`.
int run(const RunConfig& cfg, std::ostream& log);

/// Greedy assignment of computed to reference tuples, cheapest pair first,
/// on the summed per-parameter relative error |a - b| / (|a| + |b|).
struct Matching {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (reference, computed)
    std::size_t unmatched = 0;                                // unpaired reference tuples
};

double relative_error(cd a, cd b);
Matching greedy_match(const std::vector<std::vector<cd>>& reference, const std::vector<std::vector<cd>>& computed);

struct ErrorStats {
    std::vector<double> max, min, mean;  // one per parameter
};

/// Per-parameter error statistics over matched pairs.
ErrorStats match_errors(const std::vector<std::vector<cd>>& reference, const std::vector<std::vector<cd>>& computed,
                        const Matching& m);

struct BenchRow {
    double sigma = 0.0;
    int trials = 0;
    ErrorStats average;  // trial averages of the per-trial statistics
    double unmatched = 0.0;
};

/// Planted problems of the given sizes; trial t of sigma index q uses a seed
/// derived from (seed, q, t) so results do not depend on the thread count.
std::vector<BenchRow> bench_random(const std::vector<Index>& m, const std::vector<Index>& n,
                                   const std::vector<double>& sigmas, int trials, std::uint64_t seed, int threads = 1);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows, std::size_t k);

}  // namespace rmep::cli
