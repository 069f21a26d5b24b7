#include "logitmm/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace logitmm {

namespace {

void require_length(const VectorRef& beta, const Dataset& data, const char* where)
{
    if (beta.size() != data.p()) {
        throw std::invalid_argument(std::string(where) + ": coefficient vector has length " +
                                    std::to_string(beta.size()) + ", design has " +
                                    std::to_string(data.p()) + " columns");
    }
}

}  // namespace

Dataset::Dataset(Matrix X, Vector y) : X_(std::move(X)), y_(std::move(y))
{
    if (X_.rows() < 1 || X_.cols() < 1) throw std::invalid_argument("Dataset: need n >= 1 and p >= 1");
    if (y_.size() != X_.rows()) {
        throw std::invalid_argument("Dataset: y has " + std::to_string(y_.size()) + " entries, X has " +
                                    std::to_string(X_.rows()) + " rows");
    }
    if (!X_.allFinite()) throw std::invalid_argument("Dataset: X has non-finite entries");
    for (Index i = 0; i < y_.size(); ++i) {
        if (y_[i] != 0.0 && y_[i] != 1.0) {
            throw std::invalid_argument("Dataset: response " + std::to_string(i) + " is not 0/1");
        }
        if (X_(i, 0) != 1.0) throw std::invalid_argument("Dataset: first column must be the intercept (ones)");
    }
}

void PenaltyConfig::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("penalty: lambda must be >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("penalty: alpha must lie in [0, 1]");
}

double PenaltyConfig::value(const VectorRef& beta) const
{
    if (beta.size() <= 1 || lambda == 0.0) return 0.0;
    const auto tail = beta.tail(beta.size() - 1);
    return lambda * ((1.0 - alpha) * 0.5 * tail.squaredNorm() + alpha * tail.lpNorm<1>());
}

Vector TangentState::weighted_response(const Dataset& data) const
{
    return (data.y().array() - 0.5 + lin.array()).matrix();
}

double softplus(double x)
{
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double logistic(double x)
{
    const double c = std::clamp(x, -kMaxLinearPredictor, kMaxLinearPredictor);
    return 1.0 / (1.0 + std::exp(-c));
}

double log_likelihood(const VectorRef& beta, const Dataset& data)
{
    require_length(beta, data, "log_likelihood");
    const Vector eta = data.X() * beta;
    double total = 0.0;
    for (Index i = 0; i < eta.size(); ++i) total += data.y()[i] * eta[i] - softplus(eta[i]);
    return total;
}

double log_likelihood_symmetric(const VectorRef& beta, const Dataset& data)
{
    require_length(beta, data, "log_likelihood_symmetric");
    const Vector eta = data.X() * beta;
    double total = 0.0;
    for (Index i = 0; i < eta.size(); ++i) total += (data.y()[i] - 0.5) * eta[i] + h(eta[i]);
    return total;
}

double penalized_objective(const VectorRef& beta, const Dataset& data, const PenaltyConfig& penalty)
{
    return log_likelihood(beta, data) - penalty.value(beta);
}

TangentState make_tangent_state(BoundKind kind, const VectorRef& beta_tilde, const Dataset& data)
{
    require_length(beta_tilde, data, "make_tangent_state");
    TangentState s;
    s.kind = kind;
    s.zeta = data.X() * beta_tilde;
    if (!s.zeta.allFinite()) throw std::domain_error("make_tangent_state: non-finite linear predictor");

    const Index n = data.n();
    s.w.resize(n);
    s.nu = Vector::Zero(n);
    s.lin = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
        const double z = s.zeta[i];
        switch (kind) {
            case BoundKind::BL:
                s.w[i] = 0.25;
                s.lin[i] = h_prime(z) + 0.25 * z;
                break;
            case BoundKind::PG:
                s.w[i] = pg_weight(z);
                break;
            case BoundKind::PQ: {
                const auto c = pq_coeffs(z);
                s.w[i] = c.w;
                s.nu[i] = c.nu;
                break;
            }
        }
    }
    s.y_eff = (data.y().array() - 0.5 + s.lin.array()) / s.w.array();
    s.loglik_at_tangent = log_likelihood(beta_tilde, data);
    return s;
}

double surrogate_value(const TangentState& state, const VectorRef& beta, const Dataset& data)
{
    require_length(beta, data, "surrogate_value");
    if (state.n() != data.n()) throw std::invalid_argument("surrogate_value: state built for another dataset");
    const Vector eta = data.X() * beta;
    double delta = 0.0;
    for (Index i = 0; i < eta.size(); ++i) {
        const double e = eta[i];
        const double z = state.zeta[i];
        const double d = e - z;
        delta += (data.y()[i] - 0.5 + state.lin[i]) * d
               - 0.5 * state.w[i] * d * (e + z)
               - state.nu[i] * (std::abs(e) - std::abs(z));
    }
    return state.loglik_at_tangent + delta;
}

double surrogate_value_generalized_lasso(const TangentState& state, const VectorRef& beta,
                                         const Dataset& data)
{
    require_length(beta, data, "surrogate_value_generalized_lasso");
    if (state.n() != data.n()) {
        throw std::invalid_argument("surrogate_value_generalized_lasso: state built for another dataset");
    }
    auto loss = [&](const Vector& eta) {
        const Vector res = state.y_eff - eta;
        return -0.5 * res.dot(state.w.cwiseProduct(res)) - state.nu.cwiseProduct(eta).lpNorm<1>();
    };
    const double constant = state.loglik_at_tangent - loss(state.zeta);
    return loss(data.X() * beta) + constant;
}

Vector loglik_gradient(const VectorRef& beta, const Dataset& data)
{
    require_length(beta, data, "loglik_gradient");
    const Vector eta = data.X() * beta;
    Vector resid(eta.size());
    for (Index i = 0; i < eta.size(); ++i) resid[i] = data.y()[i] - logistic(eta[i]);
    return data.X().transpose() * resid;
}

Vector gradient(const VectorRef& beta, const Dataset& data, const PenaltyConfig& penalty)
{
    if (penalty.alpha != 0.0) {
        throw std::invalid_argument("gradient: only defined for the smooth ridge penalty (alpha = 0)");
    }
    Vector g = loglik_gradient(beta, data);
    if (g.size() > 1) g.tail(g.size() - 1) -= penalty.lambda * beta.tail(beta.size() - 1);
    return g;
}

}  // namespace logitmm
