#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "logitmm/objective.hpp"

namespace logitmm {

/// A parsed CSV: binary response `y` plus raw predictor columns (no intercept).
struct RawTable {
    std::vector<std::string> names;  ///< predictor column names, header order
    Vector y;
    Matrix predictors;               ///< n x (number of predictors)

    Index n() const { return y.size(); }
    Index num_predictors() const { return predictors.cols(); }
};

class CsvParseError : public std::runtime_error {
public:
    CsvParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Comma-separated, header row, first column named `y` holding 0/1.
RawTable parse_csv(const std::string& text);
RawTable load_csv(const std::filesystem::path& path);

/// Serializes with 17 significant digits so parse_csv round-trips exactly.
std::string to_csv(const RawTable& table);
void write_csv(const RawTable& table, const std::filesystem::path& path);

/// Centers every predictor and scales it to population standard deviation
/// 0.5, then prepends the intercept column. Throws std::invalid_argument
/// naming the first constant column.
Dataset standardize(const RawTable& table);

/// Drops the intercept column; inverse of the layout produced by standardize.
RawTable to_raw_table(const Dataset& data, std::vector<std::string> names = {});

/// p / (sigma0^2 * 100), with p counting the intercept.
double lambda_heuristic(Index p, double sigma0);

struct SynthRecipe {
    Index n = 40;
    Index p = 500;  ///< total columns including the intercept
    std::uint64_t seed = 1;
    double coef_sparsity = 0.02;  ///< ceil(sparsity * p) effects, capped at p - 1
    double coef_scale = 1.0;

    void validate() const;
};

/// Provenance echoed next to outputs as a JSON sidecar.
struct DatasetInfo {
    std::string source;  ///< "synth" or the CSV path
    Index n = 0;
    Index p = 0;
    bool intercept_prepended = true;
    bool standardized = true;
    std::optional<SynthRecipe> recipe;

    std::string to_json() const;
};

struct SynthData {
    Dataset data;
    Vector beta_true;
    DatasetInfo info;
};

/// Deterministic large-p-small-n logistic data: standard normal predictors
/// (standardized afterwards), min(p - 1, ceil(sparsity * p)) effects of size
/// +-coef_scale, zero intercept, y drawn from the logistic model.
/// Bit-identical for a given recipe on any conforming platform
/// (mt19937_64 plus explicit uniform/normal transforms).
SynthData synth(const SynthRecipe& recipe);

}  // namespace logitmm
