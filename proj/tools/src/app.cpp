#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "logitmm/bounds.hpp"
#include "logitmm_cli/cli.hpp"

namespace logitmm::cli {

namespace {

struct CommonFlags {
    std::string data;
    std::string synth;
    double lambda = -1.0;
    double sigma0 = -1.0;
    double alpha = 0.0;
    std::string stop = "objective";
    double tol = 1e-10;
    long max_iter = 100'000;
    std::string out = ".";
};

void add_common(CLI::App& cmd, CommonFlags& f)
{
    auto* data = cmd.add_option("--data", f.data, "CSV with header, 0/1 response in column y");
    auto* synth = cmd.add_option("--synth", f.synth, "synthetic recipe n,p,seed[,sparsity,scale]");
    data->excludes(synth);
    auto* lambda = cmd.add_option("--lambda", f.lambda, "penalty strength")->check(CLI::NonNegativeNumber);
    auto* heur = cmd.add_option("--lambda-heuristic", f.sigma0, "set lambda = p / (sigma0^2 * 100)")
                     ->check(CLI::PositiveNumber);
    lambda->excludes(heur);
    cmd.add_option("--alpha", f.alpha, "elastic-net mixing; 0 is pure ridge")->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--stop", f.stop, "stopping rule")->check(CLI::IsMember({"objective", "gradient"}));
    cmd.add_option("--tol", f.tol, "stopping tolerance")->check(CLI::PositiveNumber);
    cmd.add_option("--max-iter", f.max_iter, "MM iteration cap")->check(CLI::PositiveNumber);
    cmd.add_option("--out", f.out, "output directory");
}

DataSource source_from(const CommonFlags& f)
{
    DataSource s;
    if (!f.data.empty()) s.csv = f.data;
    if (!f.synth.empty()) s.recipe = parse_synth_recipe(f.synth);
    return s;
}

LambdaChoice lambda_from(const CommonFlags& f)
{
    LambdaChoice c;
    if (f.lambda >= 0.0) c.value = f.lambda;
    if (f.sigma0 > 0.0) c.heuristic_sigma0 = f.sigma0;
    return c;
}

}  // namespace

int run(const std::vector<std::string>& args)
{
    CLI::App app{"Penalized logistic regression by tangent-bound MM"};
    app.name("logitmm");
    app.require_subcommand(1);

    CommonFlags solve_flags;
    std::string bound = "pg";
    std::string init = "zeros";
    auto* solve_cmd = app.add_subcommand("solve", "fit one model, write beta.csv, trace.csv and run.json");
    add_common(*solve_cmd, solve_flags);
    solve_cmd->add_option("--bound", bound, "bl, pg or pq")->check(CLI::IsMember({"bl", "pg", "pq"}));
    solve_cmd->add_option("--init", init, "zeros or boost=V");

    CommonFlags bench_flags;
    std::vector<std::string> cells;
    int reps = 10;
    int jobs = 1;
    auto* bench_cmd = app.add_subcommand("bench", "iteration and timing table over bound kinds");
    add_common(*bench_cmd, bench_flags);
    bench_cmd->add_option("--cells", cells, "bound[:init] entries (default bl pg pq pq:boost=10)");
    bench_cmd->add_option("--reps", reps, "repetitions per cell")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    CurvesOptions curves;
    std::string curves_out = "curves.csv";
    auto* curves_cmd = app.add_subcommand("curves", "tabulate h and its bounds at one tangent location");
    curves_cmd->add_option("--zeta", curves.zeta, "tangent location");
    curves_cmd->add_option("--r-min", curves.r_min);
    curves_cmd->add_option("--r-max", curves.r_max);
    curves_cmd->add_option("--points", curves.points, "grid size");
    curves_cmd->add_option("--mult", curves.multipliers, "extra quadratic curvatures as multiples of the PG weight");
    curves_cmd->add_flag("--transformed", curves.transformed, "also write the rho = r^2 panel");
    curves_cmd->add_option("--out", curves_out, "output CSV path");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*solve_cmd) {
            SolveOptions o;
            o.source = source_from(solve_flags);
            o.lambda = lambda_from(solve_flags);
            o.alpha = solve_flags.alpha;
            o.solver.kind = parse_bound_kind(bound);
            o.solver.init = parse_init_policy(init);
            o.solver.stop = parse_stop_rule(solve_flags.stop);
            o.solver.tol = solve_flags.tol;
            o.solver.max_iter = solve_flags.max_iter;
            o.out_dir = solve_flags.out;
            const auto r = cmd_solve(o);
            std::cout << "lambda " << format_number(r.lambda) << "\n"
                      << "n_iter " << r.result.n_iter << "\n"
                      << "final_objective " << format_number(r.result.final_objective()) << "\n"
                      << "status " << to_string(r.result.status) << "\n";
            return r.result.converged() ? 0 : 1;
        }
        if (*bench_cmd) {
            BenchSpec spec;
            spec.source = source_from(bench_flags);
            spec.lambda = lambda_from(bench_flags);
            spec.alpha = bench_flags.alpha;
            if (!cells.empty()) {
                spec.cells.clear();
                for (const auto& c : cells) spec.cells.push_back(parse_bench_cell(c));
            }
            spec.repetitions = reps;
            spec.jobs = jobs;
            spec.stop = parse_stop_rule(bench_flags.stop);
            spec.tol = bench_flags.tol;
            spec.max_iter = bench_flags.max_iter;
            spec.out_dir = bench_flags.out;
            const auto rows = cmd_bench(spec);
            bool ok = true;
            std::cout << "bound\tinit\tmean_iters\tmean_time_s\tfinal_objective\n";
            for (const auto& row : rows) {
                std::cout << to_string(row.cell.kind) << "\t" << format_init_policy(row.cell.init) << "\t"
                          << format_number(row.mean_iters) << "\t" << format_number(row.mean_time_s) << "\t"
                          << format_number(row.final_objective) << (row.all_converged ? "" : "\t(max_iter)") << "\n";
                ok = ok && row.all_converged;
            }
            return ok ? 0 : 1;
        }
        curves.out = curves_out;
        cmd_curves(curves);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "logitmm: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace logitmm::cli
