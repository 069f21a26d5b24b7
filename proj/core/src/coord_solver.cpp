#include "logitmm/coord_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace logitmm {

double soft_threshold(double r, double delta)
{
    if (!(delta >= 0.0)) throw std::invalid_argument("soft_threshold: delta must be >= 0");
    if (r > delta) return r - delta;
    if (r < -delta) return r + delta;
    return 0.0;
}

double PiecewiseProblem1D::value(double r) const
{
    double v = -0.5 * c2 * r * r + c1 * r;
    for (const auto& k : knots) v -= k.sigma * std::abs(r - k.delta);
    return v;
}

std::vector<Knot> PiecewiseProblem1D::canonical_knots() const
{
    std::vector<Knot> sorted;
    sorted.reserve(knots.size());
    for (const auto& k : knots) {
        if (!(k.sigma >= 0.0) || !std::isfinite(k.delta) || !std::isfinite(k.sigma)) {
            throw std::invalid_argument("piecewise problem: knots need finite location and weight >= 0");
        }
        if (k.sigma > 0.0) sorted.push_back(k);
    }
    std::sort(sorted.begin(), sorted.end(), [](const Knot& a, const Knot& b) {
        return a.delta < b.delta || (a.delta == b.delta && a.sigma < b.sigma);
    });
    std::vector<Knot> merged;
    merged.reserve(sorted.size());
    for (const auto& k : sorted) {
        if (!merged.empty() && merged.back().delta == k.delta) {
            merged.back().sigma += k.sigma;
        } else {
            merged.push_back(k);
        }
    }
    return merged;
}

double maximize_piecewise_1d(const PiecewiseProblem1D& problem)
{
    if (!(problem.c2 > 0.0) || !std::isfinite(problem.c2)) {
        throw std::invalid_argument("maximize_piecewise_1d: c2 must be > 0");
    }
    if (!std::isfinite(problem.c1)) throw std::invalid_argument("maximize_piecewise_1d: c1 must be finite");
    const auto t = problem.canonical_knots();
    const double c1 = problem.c1;
    const double c2 = problem.c2;

    double slope = 0.0;
    for (const auto& k : t) slope -= k.sigma;

    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t u = t.size();
    for (std::size_t a = 0; a <= u; ++a) {
        const double candidate = (c1 - slope) / c2;
        const double upper = a < u ? t[a].delta : inf;
        if (candidate <= upper) {
            const double lower = a > 0 ? t[a - 1].delta : -inf;
            return candidate > lower ? candidate : lower;
        }
        slope += 2.0 * t[a].sigma;
    }
    return t.empty() ? c1 / c2 : t.back().delta;  // unreachable: the last region is unbounded
}

namespace {

void check_coordinate(Index j, const VectorRef& beta, const VectorRef& eta, const TangentState& state,
                      const Dataset& data)
{
    if (j < 0 || j >= data.p()) throw std::out_of_range("coordinate index out of range");
    if (beta.size() != data.p() || eta.size() != data.n() || state.n() != data.n()) {
        throw std::invalid_argument("coordinate update: inconsistent dimensions");
    }
}

double ridge_part(Index j, const PenaltyConfig& penalty)
{
    return j == 0 ? 0.0 : penalty.lambda * (1.0 - penalty.alpha);
}

double lasso_part(Index j, const PenaltyConfig& penalty)
{
    return j == 0 ? 0.0 : penalty.lambda * penalty.alpha;
}

}  // namespace

double cd_update_quadratic(Index j, const VectorRef& beta, const VectorRef& eta, const TangentState& state,
                           const Dataset& data, const PenaltyConfig& penalty)
{
    check_coordinate(j, beta, eta, state, data);
    if (state.kind == BoundKind::PQ) throw std::invalid_argument("cd_update_quadratic: PQ state needs cd_update_pq");
    const auto x = data.X().col(j);
    const double bj = beta[j];
    double num = 0.0;
    double den = ridge_part(j, penalty);
    for (Index i = 0; i < data.n(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        num += xi * ((data.y()[i] - 0.5 + state.lin[i]) + state.w[i] * (xi * bj - eta[i]));
        den += state.w[i] * xi * xi;
    }
    if (!(den > 0.0)) {
        throw std::domain_error("cd_update_quadratic: zero curvature for coordinate " + std::to_string(j));
    }
    return soft_threshold(num, lasso_part(j, penalty)) / den;
}

double cd_update_quadratic(Index j, const VectorRef& beta, const TangentState& state, const Dataset& data,
                           const PenaltyConfig& penalty)
{
    const Vector eta = data.X() * beta;
    return cd_update_quadratic(j, beta, eta, state, data, penalty);
}

PiecewiseProblem1D pq_coordinate_problem(Index j, const VectorRef& beta, const VectorRef& eta,
                                         const TangentState& state, const Dataset& data,
                                         const PenaltyConfig& penalty)
{
    check_coordinate(j, beta, eta, state, data);
    if (state.kind != BoundKind::PQ) throw std::invalid_argument("pq_coordinate_problem: state is not PQ");
    const auto x = data.X().col(j);
    const double bj = beta[j];

    PiecewiseProblem1D problem;
    problem.c2 = ridge_part(j, penalty);
    problem.c1 = 0.0;
    problem.knots.reserve(static_cast<std::size_t>(data.n()) + 1);
    for (Index i = 0; i < data.n(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        problem.c2 += state.w[i] * xi * xi;
        problem.c1 += xi * ((data.y()[i] - 0.5 + state.lin[i]) + state.w[i] * (xi * bj - eta[i]));
        if (state.nu[i] > 0.0) problem.knots.push_back({bj - eta[i] / xi, state.nu[i] * std::abs(xi)});
    }
    const double l1 = lasso_part(j, penalty);
    if (l1 > 0.0) problem.knots.push_back({0.0, l1});
    return problem;
}

double cd_update_pq(Index j, const VectorRef& beta, const VectorRef& eta, const TangentState& state,
                    const Dataset& data, const PenaltyConfig& penalty)
{
    const auto problem = pq_coordinate_problem(j, beta, eta, state, data, penalty);
    if (!(problem.c2 > 0.0)) throw std::domain_error("cd_update_pq: zero curvature for coordinate " + std::to_string(j));
    return maximize_piecewise_1d(problem);
}

double cd_update_pq(Index j, const VectorRef& beta, const TangentState& state, const Dataset& data,
                    const PenaltyConfig& penalty)
{
    const Vector eta = data.X() * beta;
    return cd_update_pq(j, beta, eta, state, data, penalty);
}

MMResult solve_elastic_net(const Dataset& data, const PenaltyConfig& penalty, const SolverConfig& config)
{
    config.validate();
    penalty.validate();
    if (!(penalty.lambda > 0.0)) throw std::invalid_argument("solve_elastic_net: lambda must be > 0");
    if (!(penalty.alpha > 0.0)) throw std::invalid_argument("solve_elastic_net: alpha must be in (0, 1]");

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    MMResult result;
    Vector beta = config.init.initial_beta(data.p());
    double F = penalized_objective(beta, data, penalty);
    if (!std::isfinite(F)) throw std::runtime_error("solve_elastic_net: non-finite objective at the starting point");
    result.trace.push_back({0, F, elapsed()});

    const bool by_gradient = config.stop == StopRule::GradientNorm;
    auto optimal = [&](const Vector& b) { return kkt_check(b, data, penalty) <= config.tol; };
    if (by_gradient && optimal(beta)) result.status = MMStatus::Converged;

    for (long t = 1; t <= config.max_iter && !result.converged(); ++t) {
        const TangentState state = make_tangent_state(config.kind, beta, data);
        Vector eta = state.zeta;
        for (Index j = 0; j < data.p(); ++j) {
            const double next = config.kind == BoundKind::PQ ? cd_update_pq(j, beta, eta, state, data, penalty)
                                                             : cd_update_quadratic(j, beta, eta, state, data, penalty);
            const double delta = next - beta[j];
            if (delta != 0.0) {
                eta.noalias() += delta * data.X().col(j);
                beta[j] = next;
            }
        }

        const double F_next = penalized_objective(beta, data, penalty);
        if (!std::isfinite(F_next)) {
            throw std::runtime_error("solve_elastic_net: non-finite objective at iteration " + std::to_string(t));
        }
        result.trace.push_back({t, F_next, elapsed()});
        const bool done = by_gradient ? optimal(beta) : objective_converged(F, F_next, config.tol);
        F = F_next;
        if (done) result.status = MMStatus::Converged;
    }
    result.beta_hat = std::move(beta);
    result.n_iter = static_cast<long>(result.trace.size()) - 1;
    return result;
}

double kkt_check(const VectorRef& beta, const Dataset& data, const PenaltyConfig& penalty)
{
    penalty.validate();
    if (!(penalty.alpha > 0.0)) throw std::invalid_argument("kkt_check: needs alpha > 0 (use gradient() for ridge)");
    const Vector g = loglik_gradient(beta, data);
    double worst = std::abs(g[0]);
    const double l1 = penalty.lambda * penalty.alpha;
    const double l2 = penalty.lambda * (1.0 - penalty.alpha);
    for (Index j = 1; j < data.p(); ++j) {
        const double s = g[j] - l2 * beta[j];
        const double v = beta[j] == 0.0 ? std::max(0.0, std::abs(s) - l1)
                                        : std::abs(s - l1 * (beta[j] > 0.0 ? 1.0 : -1.0));
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace logitmm
