#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "logitmm/data_pipeline.hpp"
#include "logitmm/mm.hpp"

namespace logitmm::cli {

/// Where the design comes from: a CSV file (standardized on load) or a
/// synthetic recipe.
struct DataSource {
    std::optional<std::filesystem::path> csv;
    std::optional<SynthRecipe> recipe;

    /// Throws std::invalid_argument unless exactly one source is set.
    void validate() const;
};

/// Parses "n,p,seed" or "n,p,seed,sparsity,scale".
SynthRecipe parse_synth_recipe(const std::string& text);

struct LoadedData {
    Dataset data;
    DatasetInfo info;
};

LoadedData load_data(const DataSource& source);

/// Either an explicit lambda or the heuristic p / (sigma0^2 * 100).
struct LambdaChoice {
    std::optional<double> value;
    std::optional<double> heuristic_sigma0;

    double resolve(Index p) const;
};

struct SolveOptions {
    DataSource source;
    LambdaChoice lambda;
    double alpha = 0.0;
    SolverConfig solver;
    std::filesystem::path out_dir = ".";
};

struct SolveOutcome {
    MMResult result;
    double lambda = 0.0;
    double seconds = 0.0;
};

/// alpha == 0 runs the joint ridge MM, anything else the coordinate-wise
/// elastic-net MM. Timing covers the solve only.
SolveOutcome solve(const Dataset& data, double lambda, double alpha, const SolverConfig& config);

/// Writes beta.csv, trace.csv and run.json into out_dir.
SolveOutcome cmd_solve(const SolveOptions& options);

/// One row of the benchmark table.
struct BenchCell {
    BoundKind kind = BoundKind::PG;
    InitPolicy init{};
};

/// Parses "pq" or "pq:boost=10".
BenchCell parse_bench_cell(const std::string& text);
std::string cell_label(const BenchCell& cell);

/// bl, pg, pq from zeros and pq from a boosted start.
std::vector<BenchCell> default_bench_cells();

struct BenchSpec {
    DataSource source;
    LambdaChoice lambda;
    double alpha = 0.0;
    std::vector<BenchCell> cells = default_bench_cells();
    int repetitions = 10;
    int jobs = 1;
    StopRule stop = StopRule::RelativeObjective;
    double tol = 1e-10;
    long max_iter = 100'000;
    std::filesystem::path out_dir = ".";

    void validate() const;
};

struct BenchRow {
    BenchCell cell;
    double lambda = 0.0;
    double mean_iters = 0.0;
    double mean_time_s = 0.0;
    double final_objective = 0.0;  ///< averaged over repetitions
    bool all_converged = true;
};

/// Runs every (cell, repetition) pair, at most `jobs` at a time. With a
/// synthetic source repetition k uses seed + k; a CSV source is solved
/// repeatedly as is. Writes bench.tsv plus one cell_<label>.tsv per cell.
std::vector<BenchRow> cmd_bench(const BenchSpec& spec);

struct CurvesOptions {
    double zeta = 20.0;
    double r_min = -30.0;
    double r_max = 30.0;
    long points = 601;
    std::vector<double> multipliers;  ///< extra tangent quadratics at mult * pg_weight
    bool transformed = false;
    std::filesystem::path out = "curves.csv";
};

/// Writes `r,h,bl,pg,pq[,q_<mult>...]`; with `transformed` also writes
/// `rho,h_t,pg_t,pq_t` next to it (suffix _transformed) on rho in
/// [0, max(r_min^2, r_max^2)] with the same point count.
void cmd_curves(const CurvesOptions& options);

/// 17 significant digits, shortest round-trip style.
std::string format_number(double x);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Full command line: `logitmm <solve|bench|curves> [flags]`. Returns the
/// process exit code: 0 when every requested run converged, 1 when some run
/// stopped at max_iter, 2 on usage or solver errors.
int run(const std::vector<std::string>& args);

}  // namespace logitmm::cli
