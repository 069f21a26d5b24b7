#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

OracleReport OracleReport::compare(std::string quantity, double oracle_value, double implementation_value)
{
    OracleReport r;
    r.quantity = std::move(quantity);
    r.oracle_value = oracle_value;
    r.implementation_value = implementation_value;
    r.abs_gap = std::abs(oracle_value - implementation_value);
    r.rel_gap = r.abs_gap / std::max(std::abs(oracle_value), std::numeric_limits<double>::min());
    return r;
}

std::string OracleReport::describe() const
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: oracle=%.17g impl=%.17g abs=%.3g rel=%.3g", quantity.c_str(), oracle_value,
                  implementation_value, abs_gap, rel_gap);
    return buf;
}

namespace {

double parabola_vertex(const std::function<double(double)>& f, double x, double h, bool& ok)
{
    const double fm = f(x - h), f0 = f(x), fp = f(x + h);
    const double curv = fp - 2.0 * f0 + fm;
    ok = curv < 0.0;
    return ok ? x + 0.5 * h * (fm - fp) / curv : x;
}

}  // namespace

// Value comparisons alone resolve a smooth maximum only to about
// sqrt(eps |f| / f''). Where f is locally quadratic, two parabola fits at
// different spacings agree on the vertex and pin it far more precisely; near
// a kink they disagree and the bracketed answer is kept.
double polish_smooth_max(const std::function<double(double)>& f, double x, double lo, double hi)
{
    const double base = f(x);
    const double scale = std::max(1.0, std::abs(x));
    for (double h = 1e-2 * scale; h >= 1e-7 * scale; h *= 0.1) {
        if (x - h < lo || x + h > hi) continue;
        bool ok1 = false, ok2 = false;
        const double v1 = parabola_vertex(f, x, h, ok1);
        if (!ok1 || std::abs(v1 - x) > h || v1 - 0.5 * h < lo || v1 + 0.5 * h > hi) continue;
        const double v2 = parabola_vertex(f, v1, 0.5 * h, ok2);
        if (!ok2 || std::abs(v2 - v1) > 1e-6 * h) continue;
        if (f(v2) >= base - 1e-15 * (1.0 + std::abs(base))) return v2;
    }
    return x;
}

double grid_argmax_1d(const std::function<double(double)>& f, double lo, double hi, int n_grid, int refine_iters)
{
    if (!(lo < hi)) throw std::invalid_argument("grid_argmax_1d: need lo < hi");
    if (n_grid < 3) throw std::invalid_argument("grid_argmax_1d: need at least 3 grid points");
    const double step = (hi - lo) / (n_grid - 1);
    int best = 0;
    double best_value = f(lo);
    for (int i = 1; i < n_grid; ++i) {
        const double v = f(lo + i * step);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double a = lo + std::max(0, best - 1) * step;
    double b = lo + std::min(n_grid - 1, best + 1) * step;

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < refine_iters && b - a > 0.0; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double mid = 0.5 * (a + b);
    // The bracket may end on a grid endpoint where f peaks (e.g. a kink).
    double answer = mid;
    double answer_value = f(mid);
    for (double x : {a, b, lo + best * step}) {
        const double v = f(x);
        if (v > answer_value) {
            answer = x;
            answer_value = v;
        }
    }
    return polish_smooth_max(f, answer, lo, hi);
}

Eigen::VectorXd finite_diff_gradient(const std::function<double(const Eigen::VectorXd&)>& F,
                                     const Eigen::VectorXd& beta, double step)
{
    if (!(step > 0.0)) throw std::invalid_argument("finite_diff_gradient: step must be > 0");
    Eigen::VectorXd g(beta.size());
    Eigen::VectorXd probe = beta;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        probe[j] = beta[j] + step;
        const double up = F(probe);
        probe[j] = beta[j] - step;
        const double down = F(probe);
        probe[j] = beta[j];
        if (!std::isfinite(up) || !std::isfinite(down)) throw std::runtime_error("finite_diff_gradient: non-finite F");
        g[j] = (up - down) / (2.0 * step);
    }
    return g;
}

namespace {

double log1pexp(double x)
{
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x)
{
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

struct RidgeLogit {
    const Eigen::MatrixXd& X;
    const Eigen::VectorXd& y;
    Eigen::VectorXd penalty;  // per-coordinate lambda

    double value(const Eigen::VectorXd& b) const
    {
        const Eigen::VectorXd eta = X * b;
        double v = 0.0;
        for (Eigen::Index i = 0; i < eta.size(); ++i) v += y[i] * eta[i] - log1pexp(eta[i]);
        return v - 0.5 * (penalty.array() * b.array().square()).sum();
    }

    Eigen::VectorXd grad(const Eigen::VectorXd& b) const
    {
        const Eigen::VectorXd eta = X * b;
        Eigen::VectorXd resid(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) resid[i] = y[i] - sigmoid(eta[i]);
        return X.transpose() * resid - penalty.cwiseProduct(b);
    }

    Eigen::MatrixXd neg_hessian(const Eigen::VectorXd& b) const
    {
        const Eigen::VectorXd eta = X * b;
        Eigen::VectorXd v(eta.size());
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double pi = sigmoid(eta[i]);
            v[i] = pi * (1.0 - pi);
        }
        Eigen::MatrixXd H = X.transpose() * v.asDiagonal() * X;
        H.diagonal() += penalty;
        return H;
    }
};

}  // namespace

NewtonResult reference_newton_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                                    const NewtonOptions& options)
{
    if (!(lambda > 0.0)) throw std::invalid_argument("reference_newton_ridge: lambda must be > 0");
    if (X.rows() != y.size()) throw std::invalid_argument("reference_newton_ridge: size mismatch");
    const Eigen::Index p = X.cols();
    RidgeLogit F{X, y, Eigen::VectorXd::Constant(p, lambda)};
    if (!options.penalize_first) F.penalty[0] = 0.0;

    NewtonResult out;
    out.beta = options.start.size() == p ? options.start : Eigen::VectorXd::Zero(p);
    double value = F.value(out.beta);
    for (out.iterations = 0;; ++out.iterations) {
        const Eigen::VectorXd g = F.grad(out.beta);
        out.gradient_norm = g.lpNorm<Eigen::Infinity>();
        if (out.gradient_norm <= options.tol) return out;
        if (out.iterations >= options.max_iter) throw std::runtime_error("reference_newton_ridge: iteration budget exhausted");

        const Eigen::VectorXd dir = F.neg_hessian(out.beta).ldlt().solve(g);
        double t = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
            const Eigen::VectorXd trial = out.beta + t * dir;
            const double v = F.value(trial);
            if (std::isfinite(v) && v >= value - 1e-13 * (1.0 + std::abs(value))) {
                out.beta = trial;
                value = v;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw std::runtime_error("reference_newton_ridge: step halving exhausted");
    }
}

Eigen::VectorXd active_set_box_qp(const Eigen::MatrixXd& M, const Eigen::VectorXd& q, double bound)
{
    const int n = static_cast<int>(q.size());
    if (n > 8) throw std::invalid_argument("active_set_box_qp: n must be <= 8");
    if (M.rows() != n || M.cols() != n) throw std::invalid_argument("active_set_box_qp: size mismatch");
    if (!(bound > 0.0)) throw std::invalid_argument("active_set_box_qp: bound must be > 0");

    auto objective = [&](const Eigen::VectorXd& u) { return 0.5 * u.dot(M * u) - q.dot(u); };
    const double scale = 1.0 + M.cwiseAbs().maxCoeff() * bound + q.cwiseAbs().maxCoeff();
    const double kkt_tol = 1e-9 * scale;

    Eigen::VectorXd best;
    double best_value = std::numeric_limits<double>::infinity();
    bool best_is_kkt = false;

    int patterns = 1;
    for (int i = 0; i < n; ++i) patterns *= 3;
    for (int code = 0; code < patterns; ++code) {
        // state: 0 lower, 1 free, 2 upper
        std::vector<int> state(static_cast<std::size_t>(n));
        std::vector<int> free_idx;
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
        for (int i = 0, c = code; i < n; ++i, c /= 3) {
            state[static_cast<std::size_t>(i)] = c % 3;
            if (c % 3 == 1) free_idx.push_back(i);
            else u[i] = c % 3 == 0 ? -bound : bound;
        }
        const int k = static_cast<int>(free_idx.size());
        if (k > 0) {
            Eigen::MatrixXd A(k, k);
            Eigen::VectorXd rhs(k);
            for (int a = 0; a < k; ++a) {
                rhs[a] = q[free_idx[static_cast<std::size_t>(a)]];
                for (int j = 0; j < n; ++j) {
                    if (state[static_cast<std::size_t>(j)] != 1) rhs[a] -= M(free_idx[static_cast<std::size_t>(a)], j) * u[j];
                }
                for (int b = 0; b < k; ++b) A(a, b) = M(free_idx[static_cast<std::size_t>(a)], free_idx[static_cast<std::size_t>(b)]);
            }
            const Eigen::VectorXd sol = A.completeOrthogonalDecomposition().solve(rhs);
            if ((A * sol - rhs).lpNorm<Eigen::Infinity>() > kkt_tol) continue;
            for (int a = 0; a < k; ++a) u[free_idx[static_cast<std::size_t>(a)]] = sol[a];
        }
        if (u.lpNorm<Eigen::Infinity>() > bound * (1.0 + 1e-12)) continue;

        const Eigen::VectorXd g = M * u - q;
        bool kkt = true;
        for (int i = 0; i < n; ++i) {
            const int s = state[static_cast<std::size_t>(i)];
            if ((s == 0 && g[i] < -kkt_tol) || (s == 2 && g[i] > kkt_tol) || (s == 1 && std::abs(g[i]) > kkt_tol)) {
                kkt = false;
                break;
            }
        }
        const double v = objective(u);
        if ((kkt && !best_is_kkt) || (kkt == best_is_kkt && v < best_value)) {
            best = u;
            best_value = v;
            best_is_kkt = kkt;
        }
    }
    if (best.size() == 0) throw std::runtime_error("active_set_box_qp: no feasible pattern");
    return best;
}

}  // namespace oracle
