#include "logitmm/data_pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace logitmm {

CsvParseError::CsvParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
{
}

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

double parse_number(std::string_view cell, std::size_t line)
{
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw CsvParseError(line, "not a finite number: '" + std::string(cell) + "'");
    }
    return value;
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Uniform on [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng)
{
    // Box-Muller, one draw per pair of uniforms.
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

RawTable parse_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;

    std::vector<std::string_view> header;
    std::string header_line;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (trim(raw).empty()) continue;
        header_line = raw;
        break;
    }
    if (header_line.empty()) throw CsvParseError(std::max<std::size_t>(line_no, 1), "missing header row");
    header = split_commas(header_line);
    if (header.front() != "y") throw CsvParseError(line_no, "first column must be named 'y'");

    RawTable table;
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j].empty()) throw CsvParseError(line_no, "empty column name");
        table.names.emplace_back(header[j]);
    }
    const std::size_t width = header.size();

    std::vector<double> ys;
    std::vector<double> cells;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (trim(raw).empty()) continue;
        const auto row = split_commas(raw);
        if (row.size() != width) {
            throw CsvParseError(line_no, "expected " + std::to_string(width) + " fields, found " +
                                             std::to_string(row.size()));
        }
        const double y = parse_number(row[0], line_no);
        if (y != 0.0 && y != 1.0) throw CsvParseError(line_no, "response must be 0 or 1, got '" + std::string(row[0]) + "'");
        ys.push_back(y);
        for (std::size_t j = 1; j < width; ++j) cells.push_back(parse_number(row[j], line_no));
    }
    if (ys.empty()) throw CsvParseError(line_no, "no data rows");

    const auto n = static_cast<Index>(ys.size());
    const auto k = static_cast<Index>(width - 1);
    table.y = Eigen::Map<const Vector>(ys.data(), n);
    table.predictors.resize(n, k);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < k; ++j) table.predictors(i, j) = cells[static_cast<std::size_t>(i * k + j)];
    }
    return table;
}

RawTable load_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::string to_csv(const RawTable& table)
{
    std::string out = "y";
    for (const auto& name : table.names) out += "," + name;
    out += "\n";
    for (Index i = 0; i < table.n(); ++i) {
        out += format_double(table.y[i]);
        for (Index j = 0; j < table.num_predictors(); ++j) out += "," + format_double(table.predictors(i, j));
        out += "\n";
    }
    return out;
}

void write_csv(const RawTable& table, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << to_csv(table);
}

Dataset standardize(const RawTable& table)
{
    const Index n = table.n();
    const Index k = table.num_predictors();
    if (n < 1) throw std::invalid_argument("standardize: empty table");
    Matrix X(n, k + 1);
    X.col(0).setOnes();
    for (Index j = 0; j < k; ++j) {
        const auto col = table.predictors.col(j);
        const std::string name = j < static_cast<Index>(table.names.size()) ? table.names[static_cast<std::size_t>(j)]
                                                                           : "x" + std::to_string(j + 1);
        if (col.maxCoeff() == col.minCoeff()) {
            throw std::invalid_argument("standardize: column '" + name + "' is constant");
        }
        const double mean = col.mean();
        const double sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(n));
        if (!(sd > 0.0)) throw std::invalid_argument("standardize: column '" + name + "' has zero variance");
        X.col(j + 1) = 0.5 * (col.array() - mean) / sd;
    }
    return Dataset(std::move(X), table.y);
}

RawTable to_raw_table(const Dataset& data, std::vector<std::string> names)
{
    RawTable table;
    const Index k = data.p() - 1;
    if (names.empty()) {
        for (Index j = 0; j < k; ++j) names.push_back("x" + std::to_string(j + 1));
    }
    if (static_cast<Index>(names.size()) != k) throw std::invalid_argument("to_raw_table: wrong number of names");
    table.names = std::move(names);
    table.y = data.y();
    table.predictors = data.X().rightCols(k);
    return table;
}

double lambda_heuristic(Index p, double sigma0)
{
    if (p < 1) throw std::invalid_argument("lambda_heuristic: p must be >= 1");
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw std::invalid_argument("lambda_heuristic: sigma0 must be > 0");
    return static_cast<double>(p) / (sigma0 * sigma0 * 100.0);
}

void SynthRecipe::validate() const
{
    if (n < 2 || p < 2) throw std::invalid_argument("synth: need n >= 2 and p >= 2");
    if (!(coef_sparsity >= 0.0 && coef_sparsity <= 1.0)) throw std::invalid_argument("synth: coef_sparsity must lie in [0, 1]");
    if (!(coef_scale >= 0.0) || !std::isfinite(coef_scale)) throw std::invalid_argument("synth: coef_scale must be >= 0");
}

std::string DatasetInfo::to_json() const
{
    nlohmann::ordered_json j;
    j["source"] = source;
    j["n"] = n;
    j["p"] = p;
    j["intercept_prepended"] = intercept_prepended;
    j["standardized"] = standardized;
    j["standardization"] = {{"mean", 0.0}, {"sd", 0.5}, {"sd_convention", "population"}};
    if (recipe) {
        j["seed"] = recipe->seed;
        j["recipe"] = {{"generator", "mt19937_64, 53-bit uniforms, Box-Muller normals"},
                       {"n", recipe->n},
                       {"p", recipe->p},
                       {"seed", recipe->seed},
                       {"coef_sparsity", recipe->coef_sparsity},
                       {"coef_scale", recipe->coef_scale}};
    }
    return j.dump(2) + "\n";
}

SynthData synth(const SynthRecipe& recipe)
{
    recipe.validate();
    std::mt19937_64 rng(recipe.seed);
    const Index n = recipe.n;
    const Index k = recipe.p - 1;

    RawTable raw;
    raw.predictors.resize(n, k);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < k; ++j) raw.predictors(i, j) = standard_normal(rng);
    }
    for (Index j = 0; j < k; ++j) raw.names.push_back("x" + std::to_string(j + 1));

    // Partial Fisher-Yates over predictor indices for the support.
    const auto nonzero = std::min<Index>(k, static_cast<Index>(std::ceil(recipe.coef_sparsity * static_cast<double>(recipe.p))));
    std::vector<Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Index{0});
    Vector beta = Vector::Zero(recipe.p);
    for (Index s = 0; s < nonzero; ++s) {
        const auto remaining = static_cast<double>(k - s);
        const Index pick = s + std::min<Index>(k - s - 1, static_cast<Index>(uniform01(rng) * remaining));
        std::swap(order[static_cast<std::size_t>(s)], order[static_cast<std::size_t>(pick)]);
        const double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
        beta[order[static_cast<std::size_t>(s)] + 1] = sign * recipe.coef_scale;
    }

    // y is drawn from the standardized design.
    raw.y = Vector::Zero(n);
    Dataset provisional = standardize(raw);
    const Vector eta = provisional.X() * beta;
    Vector y(n);
    for (Index i = 0; i < n; ++i) y[i] = uniform01(rng) < logistic(eta[i]) ? 1.0 : 0.0;

    DatasetInfo info;
    info.source = "synth";
    info.n = n;
    info.p = recipe.p;
    info.recipe = recipe;
    return {Dataset(provisional.X(), std::move(y)), std::move(beta), std::move(info)};
}

}  // namespace logitmm
