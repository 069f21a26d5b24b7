#include "logitmm_cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "logitmm/bounds.hpp"
#include "logitmm/coord_solver.hpp"
#include "logitmm/ridge_solver.hpp"

namespace logitmm::cli {

namespace fs = std::filesystem;

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file_atomic(const fs::path& path, const std::string& contents)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, path);
}

void DataSource::validate() const
{
    if (csv.has_value() == recipe.has_value()) {
        throw std::invalid_argument("exactly one of --data and --synth is required");
    }
}

SynthRecipe parse_synth_recipe(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3 && parts.size() != 5) {
        throw std::invalid_argument("--synth expects n,p,seed or n,p,seed,sparsity,scale (got '" + text + "')");
    }
    SynthRecipe r;
    try {
        r.n = std::stol(parts[0]);
        r.p = std::stol(parts[1]);
        r.seed = std::stoull(parts[2]);
        if (parts.size() == 5) {
            r.coef_sparsity = std::stod(parts[3]);
            r.coef_scale = std::stod(parts[4]);
        }
    } catch (const std::logic_error&) {
        throw std::invalid_argument("--synth: malformed number in '" + text + "'");
    }
    r.validate();
    return r;
}

LoadedData load_data(const DataSource& source)
{
    source.validate();
    if (source.recipe) {
        auto s = synth(*source.recipe);
        return {std::move(s.data), std::move(s.info)};
    }
    Dataset data = standardize(load_csv(*source.csv));
    DatasetInfo info;
    info.source = source.csv->string();
    info.n = data.n();
    info.p = data.p();
    return {std::move(data), std::move(info)};
}

double LambdaChoice::resolve(Index p) const
{
    if (value.has_value() == heuristic_sigma0.has_value()) {
        throw std::invalid_argument("exactly one of --lambda and --lambda-heuristic is required");
    }
    if (value) {
        if (!(*value >= 0.0) || !std::isfinite(*value)) throw std::invalid_argument("--lambda must be >= 0");
        return *value;
    }
    return lambda_heuristic(p, *heuristic_sigma0);
}

SolveOutcome solve(const Dataset& data, double lambda, double alpha, const SolverConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    SolveOutcome out;
    out.lambda = lambda;
    if (alpha == 0.0) {
        out.result = solve_ridge(data, lambda, config);
    } else {
        out.result = solve_elastic_net(data, {lambda, alpha}, config);
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

namespace {

std::string trace_csv(const MMResult& r)
{
    std::string s = "iter,objective,time_s\n";
    for (const auto& e : r.trace) {
        s += std::to_string(e.iter) + "," + format_number(e.objective) + "," + format_number(e.time_s) + "\n";
    }
    return s;
}

std::string beta_csv(const Vector& beta)
{
    std::string s;
    for (Index j = 0; j < beta.size(); ++j) s += format_number(beta[j]) + "\n";
    return s;
}

}  // namespace

SolveOutcome cmd_solve(const SolveOptions& options)
{
    options.solver.validate();
    if (!(options.alpha >= 0.0 && options.alpha <= 1.0)) throw std::invalid_argument("--alpha must lie in [0, 1]");
    const auto loaded = load_data(options.source);
    const double lambda = options.lambda.resolve(loaded.data.p());
    auto out = solve(loaded.data, lambda, options.alpha, options.solver);

    write_file_atomic(options.out_dir / "beta.csv", beta_csv(out.result.beta_hat));
    write_file_atomic(options.out_dir / "trace.csv", trace_csv(out.result));

    nlohmann::ordered_json j;
    j["dataset"] = nlohmann::ordered_json::parse(loaded.info.to_json());
    j["solver"] = options.alpha == 0.0 ? "ridge" : "elastic_net";
    j["bound"] = std::string(to_string(options.solver.kind));
    j["init"] = format_init_policy(options.solver.init);
    j["lambda"] = lambda;
    j["alpha"] = options.alpha;
    j["stop"] = std::string(to_string(options.solver.stop));
    j["tol"] = options.solver.tol;
    j["max_iter"] = options.solver.max_iter;
    j["n_iter"] = out.result.n_iter;
    j["status"] = std::string(to_string(out.result.status));
    j["final_objective"] = out.result.final_objective();
    j["time_s"] = out.seconds;
    write_file_atomic(options.out_dir / "run.json", j.dump(2) + "\n");
    return out;
}

BenchCell parse_bench_cell(const std::string& text)
{
    BenchCell c;
    const auto colon = text.find(':');
    c.kind = parse_bound_kind(text.substr(0, colon));
    if (colon != std::string::npos) c.init = parse_init_policy(text.substr(colon + 1));
    return c;
}

std::string cell_label(const BenchCell& cell)
{
    std::string s(to_string(cell.kind));
    if (cell.init.mode == InitPolicy::Mode::Boost) s += "-boost";
    return s;
}

std::vector<BenchCell> default_bench_cells()
{
    return {{BoundKind::BL, InitPolicy::zeros()},
            {BoundKind::PG, InitPolicy::zeros()},
            {BoundKind::PQ, InitPolicy::zeros()},
            {BoundKind::PQ, InitPolicy::boost(10.0)}};
}

void BenchSpec::validate() const
{
    source.validate();
    if (cells.empty()) throw std::invalid_argument("bench: at least one bound kind is required");
    if (repetitions < 1) throw std::invalid_argument("bench: --reps must be >= 1");
    if (jobs < 1) throw std::invalid_argument("bench: --jobs must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("--alpha must lie in [0, 1]");
}

std::vector<BenchRow> cmd_bench(const BenchSpec& spec)
{
    spec.validate();

    // All datasets are materialized before the timed solves.
    std::vector<LoadedData> datasets;
    for (int rep = 0; rep < spec.repetitions; ++rep) {
        DataSource src = spec.source;
        if (src.recipe) {
            src.recipe->seed += static_cast<std::uint64_t>(rep);
        } else if (rep > 0) {
            break;
        }
        datasets.push_back(load_data(src));
    }
    const double lambda = spec.lambda.resolve(datasets.front().data.p());

    struct Run {
        std::size_t cell;
        int rep;
        SolveOutcome outcome;
        std::string error;
    };
    std::vector<Run> runs;
    for (std::size_t c = 0; c < spec.cells.size(); ++c)
        for (int rep = 0; rep < spec.repetitions; ++rep) runs.push_back({c, rep, {}, {}});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            Run& run = runs[i];
            SolverConfig config;
            config.kind = spec.cells[run.cell].kind;
            config.init = spec.cells[run.cell].init;
            config.stop = spec.stop;
            config.tol = spec.tol;
            config.max_iter = spec.max_iter;
            const auto& data = datasets[std::min<std::size_t>(static_cast<std::size_t>(run.rep), datasets.size() - 1)].data;
            try {
                run.outcome = solve(data, lambda, spec.alpha, config);
            } catch (const std::exception& e) {
                run.error = e.what();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const int threads = std::min<int>(spec.jobs, static_cast<int>(runs.size()));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& run : runs) {
        if (!run.error.empty()) {
            throw std::runtime_error("bench: " + cell_label(spec.cells[run.cell]) + " repetition " +
                                     std::to_string(run.rep) + " failed: " + run.error);
        }
    }

    std::vector<BenchRow> rows;
    std::string table = "bound\tinit\tlambda\tmean_iters\tmean_time_s\tfinal_objective\n";
    for (std::size_t c = 0; c < spec.cells.size(); ++c) {
        BenchRow row;
        row.cell = spec.cells[c];
        row.lambda = lambda;
        std::string cell_table = "rep\tn_iter\ttime_s\tfinal_objective\tstatus\n";
        for (const auto& run : runs) {
            if (run.cell != c) continue;
            const auto& r = run.outcome.result;
            row.mean_iters += static_cast<double>(r.n_iter) / spec.repetitions;
            row.mean_time_s += run.outcome.seconds / spec.repetitions;
            row.final_objective += r.final_objective() / spec.repetitions;
            row.all_converged = row.all_converged && r.converged();
            cell_table += std::to_string(run.rep) + "\t" + std::to_string(r.n_iter) + "\t" +
                          format_number(run.outcome.seconds) + "\t" + format_number(r.final_objective()) + "\t" +
                          std::string(to_string(r.status)) + "\n";
        }
        write_file_atomic(spec.out_dir / ("cell_" + cell_label(row.cell) + ".tsv"), cell_table);
        table += std::string(to_string(row.cell.kind)) + "\t" + format_init_policy(row.cell.init) + "\t" +
                 format_number(lambda) + "\t" + format_number(row.mean_iters) + "\t" +
                 format_number(row.mean_time_s) + "\t" + format_number(row.final_objective) + "\n";
        rows.push_back(row);
    }
    write_file_atomic(spec.out_dir / "bench.tsv", table);
    return rows;
}

void cmd_curves(const CurvesOptions& o)
{
    if (o.points < 1) throw std::invalid_argument("curves: the grid is empty (--points must be >= 1)");
    if (!std::isfinite(o.r_min) || !std::isfinite(o.r_max) || o.r_min > o.r_max ||
        (o.points > 1 && o.r_min == o.r_max)) {
        throw std::invalid_argument("curves: need finite r-min < r-max");
    }
    if (!std::isfinite(o.zeta)) throw std::invalid_argument("curves: zeta must be finite");
    for (double m : o.multipliers) {
        if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("curves: multipliers must be > 0");
    }

    auto grid = [&](double lo, double hi, long i) {
        if (o.points == 1) return lo;
        if (i == o.points - 1) return hi;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(o.points - 1);
    };

    const double wpg = pg_weight(o.zeta);
    std::string s = "r,h,bl,pg,pq";
    for (double m : o.multipliers) {
        char buf[48];
        std::snprintf(buf, sizeof buf, ",q_%g", m);
        s += buf;
    }
    s += "\n";
    for (long i = 0; i < o.points; ++i) {
        const double r = grid(o.r_min, o.r_max, i);
        s += format_number(r) + "," + format_number(h(r)) + "," + format_number(eval_bound(BoundKind::BL, r, o.zeta)) +
             "," + format_number(eval_bound(BoundKind::PG, r, o.zeta)) + "," +
             format_number(eval_bound(BoundKind::PQ, r, o.zeta));
        for (double m : o.multipliers) s += "," + format_number(tangent_quadratic(r, o.zeta, m * wpg));
        s += "\n";
    }
    write_file_atomic(o.out, s);

    if (o.transformed) {
        const double phi = o.zeta * o.zeta;
        const double rho_max = std::max({o.r_min * o.r_min, o.r_max * o.r_max, phi});
        std::string t = "rho,h_t,pg_t,pq_t\n";
        for (long i = 0; i < o.points; ++i) {
            const double rho = grid(0.0, rho_max, i);
            t += format_number(rho) + "," + format_number(h(std::sqrt(rho))) + "," +
                 format_number(eval_transformed(BoundKind::PG, rho, phi)) + "," +
                 format_number(eval_transformed(BoundKind::PQ, rho, phi)) + "\n";
        }
        fs::path tp = o.out;
        tp.replace_filename(o.out.stem().string() + "_transformed" + o.out.extension().string());
        write_file_atomic(tp, t);
    }
}

}  // namespace logitmm::cli
