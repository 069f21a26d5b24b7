#include "logitmm/ridge_solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace logitmm {

namespace {
constexpr double kStiffRatio = 1e-4;
}  // namespace

RidgeSystem::RidgeSystem(const Matrix& X, const Vector& a_diag, Method method) : X_(X)
{
    if (a_diag.size() != X.cols()) throw std::invalid_argument("RidgeSystem: diagonal length must equal p");
    if (!((a_diag.array() > 0.0).all())) throw std::invalid_argument("RidgeSystem: diagonal entries must be > 0");
    a_ = a_diag;
    a_inv_ = a_diag.cwiseInverse();
    woodbury_ = method == Method::Woodbury || (method == Method::Auto && X.cols() > X.rows());
    if (!woodbury_) return;

    const double a_max = a_diag.maxCoeff();
    for (Index j = 0; j < p(); ++j) (a_diag[j] < kStiffRatio * a_max ? stiff_ : soft_).push_back(j);
    if (method == Method::Auto && static_cast<Index>(stiff_.size()) > n()) {
        woodbury_ = false;
        return;
    }
    X0_.resize(n(), static_cast<Index>(stiff_.size()));
    X1_.resize(n(), static_cast<Index>(soft_.size()));
    a1_inv_.resize(static_cast<Index>(soft_.size()));
    for (std::size_t k = 0; k < stiff_.size(); ++k) X0_.col(static_cast<Index>(k)) = X_.col(stiff_[k]);
    for (std::size_t k = 0; k < soft_.size(); ++k) {
        X1_.col(static_cast<Index>(k)) = X_.col(soft_[k]);
        a1_inv_[static_cast<Index>(k)] = a_inv_[soft_[k]];
    }
    gram_ = X1_ * a1_inv_.asDiagonal() * X1_.transpose();
}

void RidgeSystem::set_weights(const Vector& w)
{
    if (w.size() != X_.rows()) throw std::invalid_argument("RidgeSystem: weight length must equal n");
    if ((w.array() < 0.0).any() || !w.allFinite()) throw std::invalid_argument("RidgeSystem: weights must be >= 0");
    factorized_ = false;
    if (woodbury_) {
        sqrt_w_ = w.cwiseSqrt();
        Matrix K = sqrt_w_.asDiagonal() * gram_ * sqrt_w_.asDiagonal();
        K.diagonal().array() += 1.0;
        k_llt_.compute(K);
        if (k_llt_.info() != Eigen::Success) throw std::runtime_error("RidgeSystem: Woodbury factorization failed");

        const Index d = X0_.cols();
        const Matrix B = X1_.transpose() * (w.asDiagonal() * X0_);
        Z_.resize(X1_.cols(), d);
        for (Index k = 0; k < d; ++k) Z_.col(k) = soft_solve(B.col(k));
        E_ = X0_ - X1_ * Z_;
        Matrix S = E_.transpose() * w.asDiagonal() * E_;
        for (Index k = 0; k < d; ++k) S(k, k) += a_[stiff_[static_cast<std::size_t>(k)]];
        S += Z_.transpose() * a1_inv_.cwiseInverse().asDiagonal() * Z_;
        s_llt_.compute(0.5 * (S + S.transpose()));
        if (d > 0 && s_llt_.info() != Eigen::Success) throw std::runtime_error("RidgeSystem: system is not positive definite");
    } else {
        Matrix Q = X_.transpose() * w.asDiagonal() * X_;
        Q.diagonal() += a_;
        q_llt_.compute(Q);
        if (q_llt_.info() != Eigen::Success) throw std::runtime_error("RidgeSystem: system is not positive definite");
    }
    factorized_ = true;
}

Vector RidgeSystem::soft_solve(const VectorRef& v1) const
{
    const Vector t = a1_inv_.cwiseProduct(v1);
    const Vector s = sqrt_w_.cwiseProduct(X1_ * t);
    const Vector z = sqrt_w_.cwiseProduct(k_llt_.solve(s));
    return t - a1_inv_.cwiseProduct(X1_.transpose() * z);
}

Vector RidgeSystem::solve(const VectorRef& v) const
{
    if (!factorized_) throw std::logic_error("RidgeSystem: set_weights() not called");
    if (v.size() != p()) throw std::invalid_argument("RidgeSystem: right-hand side length must equal p");
    if (!woodbury_) return q_llt_.solve(v);

    Vector v0(static_cast<Index>(stiff_.size()));
    Vector v1(static_cast<Index>(soft_.size()));
    for (std::size_t k = 0; k < stiff_.size(); ++k) v0[static_cast<Index>(k)] = v[stiff_[k]];
    for (std::size_t k = 0; k < soft_.size(); ++k) v1[static_cast<Index>(k)] = v[soft_[k]];

    Vector b1 = soft_solve(v1);
    Vector out(p());
    if (!stiff_.empty()) {
        const Vector b0 = s_llt_.solve(v0 - Z_.transpose() * v1);
        b1 -= Z_ * b0;
        for (std::size_t k = 0; k < stiff_.size(); ++k) out[stiff_[k]] = b0[static_cast<Index>(k)];
    }
    for (std::size_t k = 0; k < soft_.size(); ++k) out[soft_[k]] = b1[static_cast<Index>(k)];
    return out;
}

Matrix RidgeSystem::design_inverse_form() const
{
    if (!factorized_) throw std::logic_error("RidgeSystem: set_weights() not called");
    Matrix out;
    if (woodbury_) {
        const Matrix SG = sqrt_w_.asDiagonal() * gram_;
        out = gram_ - SG.transpose() * k_llt_.solve(SG);
        if (!stiff_.empty()) out += E_ * s_llt_.solve(E_.transpose());
    } else {
        out = X_ * q_llt_.solve(X_.transpose());
    }
    return 0.5 * (out + out.transpose());
}

Vector woodbury_solve(const Vector& a_diag, const Matrix& X, const Vector& w, const VectorRef& v)
{
    RidgeSystem sys(X, a_diag);
    sys.set_weights(w);
    return sys.solve(v);
}

Vector ridge_diagonal(Index p, double lambda, double epsilon)
{
    Vector a = Vector::Constant(p, lambda);
    if (p > 0) a[0] = epsilon;
    return a;
}

namespace {

void check_step_inputs(const TangentState& state, const Dataset& data, double lambda, double epsilon)
{
    if (state.n() != data.n()) throw std::invalid_argument("mm step: state built for another dataset");
    if (!(lambda > 0.0)) throw std::invalid_argument("mm step: lambda must be > 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("mm step: epsilon must be > 0");
}

PqStep pq_step(const TangentState& state, const Dataset& data, const RidgeSystem& sys, const BoxQpConfig& qp,
               const Vector& warm_dual)
{
    const Vector r = data.X().transpose() * state.weighted_response(data);
    const Vector beta0 = sys.solve(r);

    BoxQpProblem problem;
    const Matrix H = sys.design_inverse_form();
    problem.M = state.nu.asDiagonal() * H * state.nu.asDiagonal();
    problem.q = state.nu.cwiseProduct(data.X() * beta0);
    problem.bound = 1.0;

    auto qp_result = solve_box_qp(problem, qp, warm_dual);

    PqStep step;
    step.beta = beta0 - sys.solve(data.X().transpose() * state.nu.cwiseProduct(qp_result.u));
    step.dual = std::move(qp_result.u);
    step.qp = qp_result.diagnostics;
    return step;
}

}  // namespace

Vector mm_step_quadratic(const TangentState& state, const Dataset& data, double lambda, double epsilon)
{
    check_step_inputs(state, data, lambda, epsilon);
    if (state.kind == BoundKind::PQ) throw std::invalid_argument("mm_step_quadratic: PQ state needs mm_step_pq");
    RidgeSystem sys(data.X(), ridge_diagonal(data.p(), lambda, epsilon));
    sys.set_weights(state.w);
    return sys.solve(data.X().transpose() * state.weighted_response(data));
}

PqStep mm_step_pq(const TangentState& state, const Dataset& data, double lambda, double epsilon,
                  const BoxQpConfig& qp, const Vector& warm_dual)
{
    check_step_inputs(state, data, lambda, epsilon);
    if (state.kind != BoundKind::PQ) throw std::invalid_argument("mm_step_pq: state is not PQ");
    RidgeSystem sys(data.X(), ridge_diagonal(data.p(), lambda, epsilon));
    sys.set_weights(state.w);
    return pq_step(state, data, sys, qp, warm_dual);
}

MMResult solve_ridge(const Dataset& data, double lambda, const SolverConfig& config, const RidgeOptions& options)
{
    config.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("solve_ridge: lambda must be > 0");

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    const PenaltyConfig penalty{lambda, 0.0};
    RidgeSystem sys(data.X(), ridge_diagonal(data.p(), lambda, config.epsilon_intercept), options.method);

    MMResult result;
    Vector beta = config.init.initial_beta(data.p());
    double F = penalized_objective(beta, data, penalty);
    if (!std::isfinite(F)) throw std::runtime_error("solve_ridge: non-finite objective at the starting point");
    result.trace.push_back({0, F, elapsed()});
    if (options.on_iterate) options.on_iterate(0, beta);

    const bool by_gradient = config.stop == StopRule::GradientNorm;
    auto optimal = [&](const Vector& b) {
        return gradient(b, data, penalty).lpNorm<Eigen::Infinity>() <= config.tol;
    };
    if (by_gradient && optimal(beta)) result.status = MMStatus::Converged;

    Vector dual;
    for (long t = 1; t <= config.max_iter && !result.converged(); ++t) {
        const TangentState state = make_tangent_state(config.kind, beta, data);
        sys.set_weights(state.w);
        if (config.kind == BoundKind::PQ) {
            PqStep step = pq_step(state, data, sys, config.qp, dual);
            beta = std::move(step.beta);
            dual = std::move(step.dual);
        } else {
            beta = sys.solve(data.X().transpose() * state.weighted_response(data));
        }

        const double F_next = penalized_objective(beta, data, penalty);
        if (!std::isfinite(F_next)) {
            throw std::runtime_error("solve_ridge: non-finite objective at iteration " + std::to_string(t));
        }
        result.trace.push_back({t, F_next, elapsed()});
        if (options.on_iterate) options.on_iterate(t, beta);

        const bool done = by_gradient ? optimal(beta) : objective_converged(F, F_next, config.tol);
        F = F_next;
        if (done) result.status = MMStatus::Converged;
    }
    result.beta_hat = std::move(beta);
    result.n_iter = static_cast<long>(result.trace.size()) - 1;
    return result;
}

}  // namespace logitmm
