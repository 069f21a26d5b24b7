#pragma once

#include <string_view>

namespace logitmm {

/// Tangent minorizer family for h(r) = -log(e^{r/2} + e^{-r/2}).
///
///   BL: fixed curvature 1/4.
///   PG: curvature tanh(zeta/2) / (2 zeta), the sharpest purely quadratic bound.
///   PQ: quadratic plus an |r| correction, touching h again at r = 0.
enum class BoundKind { BL, PG, PQ };

std::string_view to_string(BoundKind kind);

/// Parses "bl", "pg" or "pq" (case-insensitive). Throws std::invalid_argument.
BoundKind parse_bound_kind(std::string_view text);

/// Coefficients of the piece-wise quadratic bound at tangent location zeta:
///
///   hbar(r | zeta) = h(zeta) - w (r^2 - zeta^2) / 2 - nu (|r| - |zeta|)
///
/// with w > 0, nu >= 0 and w + nu / |zeta| == pg_weight(zeta).
struct PqCoefficients {
    double w = 0.25;
    double nu = 0.0;
    double zeta = 0.0;
};

/// Below this |zeta| the weights are evaluated from their Taylor expansions.
inline constexpr double kSeriesThreshold = 1e-4;

// All kernels throw std::domain_error on non-finite input.

double h(double r);
double h_prime(double r);

/// log(cosh(x)) without overflow or small-x cancellation.
double log_cosh(double x);

double pg_weight(double zeta);
PqCoefficients pq_coeffs(double zeta);

/// Curvature of the quadratic part of the bound of the given kind at zeta.
double bound_curvature(BoundKind kind, double zeta);

/// hbar_kind(r | zeta).
double eval_bound(BoundKind kind, double r, double zeta);

/// The same bound in the squared parameterization rho = r^2, phi = zeta^2.
/// Only PG and PQ are linear/affine-plus-sqrt in rho; BL is rejected.
double eval_transformed(BoundKind kind, double rho, double phi);

/// Tangent quadratic h(zeta) + h'(zeta)(r - zeta) - curvature (r - zeta)^2 / 2.
/// A minorizer of h iff curvature >= pg_weight(zeta).
double tangent_quadratic(double r, double zeta, double curvature);

/// Member of the |r|-corrected tangent class with curvature w; the |r|
/// coefficient is set so that the derivative at zeta matches h'(zeta).
/// A minorizer of h iff w >= pq_coeffs(zeta).w.
double tangent_abs_corrected(double r, double zeta, double curvature);

}  // namespace logitmm
