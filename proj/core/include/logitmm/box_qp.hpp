#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace logitmm {

/// min_u 1/2 u' M u - q' u  subject to  |u_i| <= bound.
struct BoxQpProblem {
    Eigen::MatrixXd M;
    Eigen::VectorXd q;
    double bound = 1.0;

    /// Symmetry within 1e-12 (relative to max |M_ij|), non-negative diagonal,
    /// matching sizes, bound > 0. Throws std::invalid_argument.
    void validate() const;
    double objective(const Eigen::Ref<const Eigen::VectorXd>& u) const;
};

struct BoxQpConfig {
    double tol = 1e-10;
    long max_sweeps = 10'000;
    /// Optional observer called after every sweep with (sweep, objective).
    std::function<void(long, double)> on_sweep;
};

struct BoxQpDiagnostics {
    long sweeps = 0;
    double projected_gradient = 0.0;  ///< max-norm of the projected gradient
    double objective = 0.0;
};

struct BoxQpResult {
    Eigen::VectorXd u;
    BoxQpDiagnostics diagnostics;
};

class BoxQpNotConverged : public std::runtime_error {
public:
    BoxQpNotConverged(long sweeps, double projected_gradient);
    long sweeps() const { return sweeps_; }
    double projected_gradient() const { return projected_gradient_; }

private:
    long sweeps_;
    double projected_gradient_;
};

/// Max-norm of the projected gradient of u for the problem; zero exactly at
/// the optimum.
double box_qp_projected_gradient(const BoxQpProblem& problem, const Eigen::Ref<const Eigen::VectorXd>& u);

/// Cyclic coordinate descent with exact clipped coordinate minimization.
/// `warm_start`, when non-empty, must have the problem's size; it is clipped
/// into the box before the first sweep.
BoxQpResult solve_box_qp(const BoxQpProblem& problem, const BoxQpConfig& config = {},
                         const Eigen::VectorXd& warm_start = {});

}  // namespace logitmm
