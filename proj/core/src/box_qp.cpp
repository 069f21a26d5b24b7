#include "logitmm/box_qp.hpp"

#include <algorithm>
#include <cmath>

namespace logitmm {

using Eigen::Index;
using Eigen::VectorXd;

BoxQpNotConverged::BoxQpNotConverged(long sweeps, double projected_gradient)
    : std::runtime_error("box QP: no convergence after " + std::to_string(sweeps) +
                         " sweeps (projected gradient " + std::to_string(projected_gradient) + ")"),
      sweeps_(sweeps),
      projected_gradient_(projected_gradient)
{
}

void BoxQpProblem::validate() const
{
    if (M.rows() != M.cols()) throw std::invalid_argument("box QP: M must be square");
    if (q.size() != M.rows()) throw std::invalid_argument("box QP: q and M sizes differ");
    if (!(bound > 0.0) || !std::isfinite(bound)) throw std::invalid_argument("box QP: bound must be > 0");
    if (!M.allFinite() || !q.allFinite()) throw std::invalid_argument("box QP: non-finite data");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("box QP: M is not symmetric");
    }
    if ((M.diagonal().array() < 0.0).any()) throw std::invalid_argument("box QP: negative diagonal in M");
}

double BoxQpProblem::objective(const Eigen::Ref<const VectorXd>& u) const
{
    return 0.5 * u.dot(M * u) - q.dot(u);
}

namespace {

double projected_gradient_norm(const VectorXd& g, const VectorXd& u, double bound)
{
    double worst = 0.0;
    for (Index i = 0; i < u.size(); ++i) {
        double v = 0.0;
        if (u[i] <= -bound) {
            v = std::max(0.0, -g[i]);
        } else if (u[i] >= bound) {
            v = std::max(0.0, g[i]);
        } else {
            v = std::abs(g[i]);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace

double box_qp_projected_gradient(const BoxQpProblem& problem, const Eigen::Ref<const VectorXd>& u)
{
    const VectorXd g = problem.M * u - problem.q;
    return projected_gradient_norm(g, u, problem.bound);
}

BoxQpResult solve_box_qp(const BoxQpProblem& problem, const BoxQpConfig& config, const VectorXd& warm_start)
{
    problem.validate();
    const Index n = problem.q.size();
    const double b = problem.bound;

    BoxQpResult out;
    if (warm_start.size() == n) {
        out.u = warm_start.cwiseMax(-b).cwiseMin(b);
    } else if (warm_start.size() == 0) {
        out.u = VectorXd::Zero(n);
    } else {
        throw std::invalid_argument("box QP: warm start has the wrong size");
    }
    VectorXd& u = out.u;
    VectorXd g = problem.M * u - problem.q;

    double pg = projected_gradient_norm(g, u, b);
    long sweep = 0;
    while (pg > config.tol) {
        if (sweep >= config.max_sweeps) throw BoxQpNotConverged(sweep, pg);
        ++sweep;
        for (Index i = 0; i < n; ++i) {
            const double mii = problem.M(i, i);
            double next = 0.0;
            if (mii > 0.0) {
                next = std::clamp(u[i] - g[i] / mii, -b, b);
            } else if (g[i] > 0.0) {
                next = -b;
            } else if (g[i] < 0.0) {
                next = b;
            }
            const double delta = next - u[i];
            if (delta != 0.0) {
                u[i] = next;
                g.noalias() += delta * problem.M.col(i);
            }
        }
        if (config.on_sweep) config.on_sweep(sweep, problem.objective(u));
        pg = projected_gradient_norm(g, u, b);
        if (pg <= config.tol) {
            // refresh the incrementally updated gradient before accepting
            g = problem.M * u - problem.q;
            pg = projected_gradient_norm(g, u, b);
        }
    }
    out.diagnostics.sweeps = sweep;
    out.diagnostics.projected_gradient = pg;
    out.diagnostics.objective = problem.objective(u);
    return out;
}

}  // namespace logitmm
