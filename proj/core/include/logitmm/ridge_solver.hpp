#pragma once

#include <functional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "logitmm/box_qp.hpp"
#include "logitmm/mm.hpp"
#include "logitmm/objective.hpp"

namespace logitmm {

/// Factorized Q = diag(a) + X' diag(w) X.
///
/// With p > n (or Method::Woodbury) every solve goes through the n x n
/// matrix K = I + S X A^{-1} X' S, S = diag(sqrt(w)):
///   Q^{-1} v = A^{-1} v - A^{-1} X' S K^{-1} S X A^{-1} v.
/// G = X A^{-1} X' is formed once at construction, so re-weighting costs
/// O(n^3) plus O(n p) per solve.
///
/// Coordinates with a_j far below max(a) (the nearly unpenalized intercept)
/// are split off and eliminated through their Schur complement, leaving the
/// Woodbury identity to act on a well-scaled diagonal only.
class RidgeSystem {
public:
    enum class Method { Auto, Dense, Woodbury };

    RidgeSystem(const Matrix& X, const Vector& a_diag, Method method = Method::Auto);

    /// Refactorizes for new weights (w >= 0, length n).
    void set_weights(const Vector& w);

    Vector solve(const VectorRef& v) const;

    /// X Q^{-1} X' (n x n).
    Matrix design_inverse_form() const;

    bool uses_woodbury() const { return woodbury_; }
    Index n() const { return X_.rows(); }
    Index p() const { return X_.cols(); }

private:
    Matrix X_;
    Vector a_inv_;
    bool woodbury_ = false;
    bool factorized_ = false;

    // Woodbury path: columns split into stiff (small a_j) and soft blocks.
    std::vector<Index> stiff_;
    std::vector<Index> soft_;
    Matrix X0_;        // stiff columns
    Matrix X1_;        // soft columns
    Vector a1_inv_;
    Matrix gram_;      // X1 A1^{-1} X1'
    Vector sqrt_w_;
    Eigen::LLT<Matrix> k_llt_;
    Matrix Z_;         // Q1^{-1} X1' W X0
    Matrix E_;         // X0 - X1 Z
    Eigen::LLT<Matrix> s_llt_;

    Vector soft_solve(const VectorRef& v1) const;

    // dense path
    Vector a_;
    Eigen::LLT<Matrix> q_llt_;
};

/// (diag(a) + X' diag(w) X)^{-1} v. Uses the Woodbury identity when p > n.
/// Throws std::invalid_argument if some a_i <= 0 or w_i < 0.
Vector woodbury_solve(const Vector& a_diag, const Matrix& X, const Vector& w, const VectorRef& v);

/// diag(epsilon, lambda, ..., lambda).
Vector ridge_diagonal(Index p, double lambda, double epsilon);

/// Exact maximizer of the BL/PG surrogate minus the ridge penalty.
Vector mm_step_quadratic(const TangentState& state, const Dataset& data, double lambda, double epsilon);

struct PqStep {
    Vector beta;
    Vector dual;  ///< optimal u with |u_i| <= 1
    BoxQpDiagnostics qp;
};

/// Exact maximizer of the PQ surrogate minus the ridge penalty via the
/// box-constrained dual. `warm_dual` may be empty.
PqStep mm_step_pq(const TangentState& state, const Dataset& data, double lambda, double epsilon,
                  const BoxQpConfig& qp = {}, const Vector& warm_dual = {});

struct RidgeOptions {
    RidgeSystem::Method method = RidgeSystem::Method::Auto;
    /// Called with (iteration, beta) for every iterate including the start.
    std::function<void(long, const Vector&)> on_iterate;
};

/// MM for argmax_beta loglik(beta) - lambda/2 ||beta_{-1}||^2.
MMResult solve_ridge(const Dataset& data, double lambda, const SolverConfig& config,
                     const RidgeOptions& options = {});

}  // namespace logitmm
