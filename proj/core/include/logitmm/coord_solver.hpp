#pragma once

#include <vector>

#include "logitmm/mm.hpp"
#include "logitmm/objective.hpp"

namespace logitmm {

/// sign(r) (|r| - delta)_+. Throws std::invalid_argument for delta < 0.
double soft_threshold(double r, double delta);

struct Knot {
    double delta = 0.0;  ///< breakpoint
    double sigma = 0.0;  ///< weight of |r - delta|
};

/// F(r) = -c2 r^2 / 2 + c1 r - sum_j sigma_j |r - delta_j|, strictly concave.
struct PiecewiseProblem1D {
    double c2 = 1.0;
    double c1 = 0.0;
    std::vector<Knot> knots;

    double value(double r) const;

    /// Knots sorted by location, equal locations merged by summing weights,
    /// zero-weight knots dropped.
    std::vector<Knot> canonical_knots() const;
};

/// Global maximizer of the piece-wise quadratic F in O(m log m).
///
/// On the region between consecutive order statistics t_a < r < t_{a+1} the
/// derivative is c1 - s_a - c2 r with cumulative slope
///   s_0 = -sum sigma,  s_a = s_{a-1} + 2 sigma(t_a),
/// so the candidate r_a = (c1 - s_a) / c2 is the answer when it lies in
/// (t_a, t_{a+1}]; otherwise the maximizer is the knot t_a with
/// r_a <= t_a < r_{a-1}.
///
/// Throws std::invalid_argument for c2 <= 0 or a negative weight.
double maximize_piecewise_1d(const PiecewiseProblem1D& problem);

/// Exact coordinate maximizer of the BL/PG surrogate minus the elastic-net
/// penalty (unpenalized for j = 0). `eta` must equal X * beta.
double cd_update_quadratic(Index j, const VectorRef& beta, const VectorRef& eta, const TangentState& state,
                           const Dataset& data, const PenaltyConfig& penalty);
double cd_update_quadratic(Index j, const VectorRef& beta, const TangentState& state, const Dataset& data,
                           const PenaltyConfig& penalty);

/// The one-dimensional problem in beta_j of the PQ coordinate surrogate:
/// one knot per observation with x_ij != 0 and nu_i > 0 at
/// beta_j - eta_i / x_ij with weight nu_i |x_ij|, plus a knot at 0 with
/// weight lambda * alpha for j != 0.
PiecewiseProblem1D pq_coordinate_problem(Index j, const VectorRef& beta, const VectorRef& eta,
                                         const TangentState& state, const Dataset& data,
                                         const PenaltyConfig& penalty);

double cd_update_pq(Index j, const VectorRef& beta, const VectorRef& eta, const TangentState& state,
                    const Dataset& data, const PenaltyConfig& penalty);
double cd_update_pq(Index j, const VectorRef& beta, const TangentState& state, const Dataset& data,
                    const PenaltyConfig& penalty);

/// Cyclic coordinate-wise MM (one pass over j = 0..p-1 per MM iteration)
/// for loglik(beta) - lambda [(1-alpha)/2 ||beta_{-1}||^2 + alpha ||beta_{-1}||_1].
///
/// For PQ the surrogate's l1 part is not separable in beta, so the scheme is
/// ascent-only: it may stall at a non-optimal point.
MMResult solve_elastic_net(const Dataset& data, const PenaltyConfig& penalty, const SolverConfig& config);

/// Largest violation of the elastic-net optimality conditions at beta.
/// Requires alpha > 0.
double kkt_check(const VectorRef& beta, const Dataset& data, const PenaltyConfig& penalty);

}  // namespace logitmm
