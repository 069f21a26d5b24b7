#pragma once

#include <Eigen/Core>

#include "logitmm/bounds.hpp"

namespace logitmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;
using Index = Eigen::Index;

/// Binary-response design. Column 0 of X is the intercept (all ones).
class Dataset {
public:
    /// Validates y in {0,1}, X(:,0) == 1, finite entries, matching sizes.
    /// Throws std::invalid_argument.
    Dataset(Matrix X, Vector y);

    const Matrix& X() const { return X_; }
    const Vector& y() const { return y_; }
    Index n() const { return X_.rows(); }
    Index p() const { return X_.cols(); }

private:
    Matrix X_;
    Vector y_;
};

/// lambda * [(1 - alpha)/2 ||b||^2 + alpha ||b||_1] on every coefficient but
/// the intercept.
struct PenaltyConfig {
    double lambda = 0.0;
    double alpha = 0.0;

    /// Throws std::invalid_argument unless lambda >= 0 and alpha in [0, 1].
    void validate() const;
    double value(const VectorRef& beta) const;
};

/// Coefficients of the separable surrogate built at a tangent point.
///
/// Per observation the bound on h is
///   c_i - w_i eta^2 / 2 + b_i eta - nu_i |eta|,
/// so the surrogate is the generalized-lasso form
///   -1/2 (y_eff - X beta)' W (y_eff - X beta) - ||N X beta||_1 + const
/// with y_eff = (y - 1/2 + b) / w.
struct TangentState {
    BoundKind kind = BoundKind::PG;
    Vector zeta;   ///< tangent linear predictors X beta_tilde
    Vector w;      ///< curvature weights
    Vector nu;     ///< |eta| coefficients, zero unless PQ
    Vector lin;    ///< b_i; nonzero only for BL (h'(zeta) + zeta / 4)
    Vector y_eff;  ///< effective responses
    double loglik_at_tangent = 0.0;

    Index n() const { return zeta.size(); }
    /// y - 1/2 + b, i.e. W y_eff without forming y_eff.
    Vector weighted_response(const Dataset& data) const;
};

/// Linear predictor magnitude cap used before exponentiation.
inline constexpr double kMaxLinearPredictor = 709.0;

/// log(1 + e^x) without overflow.
double softplus(double x);

/// 1 / (1 + e^{-x}) with x clamped to +-kMaxLinearPredictor.
double logistic(double x);

double log_likelihood(const VectorRef& beta, const Dataset& data);

/// Same quantity summed as (y_i - 1/2) eta_i + h(eta_i).
double log_likelihood_symmetric(const VectorRef& beta, const Dataset& data);

double penalized_objective(const VectorRef& beta, const Dataset& data, const PenaltyConfig& penalty);

TangentState make_tangent_state(BoundKind kind, const VectorRef& beta_tilde, const Dataset& data);

/// lbar(beta | beta_tilde). Exactly equal to log_likelihood(beta_tilde) at
/// the tangent point.
double surrogate_value(const TangentState& state, const VectorRef& beta, const Dataset& data);

/// The weighted-least-squares plus generalized-lasso form of the same
/// surrogate. Loses precision when some w_i are tiny; kept for cross-checks.
double surrogate_value_generalized_lasso(const TangentState& state, const VectorRef& beta,
                                         const Dataset& data);

/// Gradient of the ridge objective (alpha must be 0).
Vector gradient(const VectorRef& beta, const Dataset& data, const PenaltyConfig& penalty);

/// X' (y - pi(X beta)).
Vector loglik_gradient(const VectorRef& beta, const Dataset& data);

}  // namespace logitmm
