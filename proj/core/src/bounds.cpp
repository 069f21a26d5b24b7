#include "logitmm/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "logitmm/detail/bounds_series.hpp"

namespace logitmm {

namespace {

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(what) + ": non-finite argument");
    }
}

}  // namespace

std::string_view to_string(BoundKind kind)
{
    switch (kind) {
        case BoundKind::BL: return "bl";
        case BoundKind::PG: return "pg";
        case BoundKind::PQ: return "pq";
    }
    return "?";
}

BoundKind parse_bound_kind(std::string_view text)
{
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "bl") return BoundKind::BL;
    if (lower == "pg") return BoundKind::PG;
    if (lower == "pq") return BoundKind::PQ;
    throw std::invalid_argument("unknown bound kind '" + std::string(text) + "' (expected bl, pg or pq)");
}

double h(double r)
{
    require_finite(r, "h");
    const double a = std::abs(r);
    return -0.5 * a - std::log1p(std::exp(-a));
}

double h_prime(double r)
{
    require_finite(r, "h_prime");
    return -0.5 * std::tanh(0.5 * r);
}

double log_cosh(double x)
{
    require_finite(x, "log_cosh");
    const double a = std::abs(x);
    if (a < 1.0) {
        // cosh(a) - 1 = 2 sinh^2(a/2)
        const double s = std::sinh(0.5 * a);
        return std::log1p(2.0 * s * s);
    }
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

namespace detail {

double pg_weight_series(double zeta)
{
    return 0.25 - zeta * zeta / 48.0;
}

double pg_weight_direct(double zeta)
{
    return std::tanh(0.5 * zeta) / (2.0 * zeta);
}

PqCoefficients pq_coeffs_series(double zeta)
{
    const double z2 = zeta * zeta;
    return {0.25 - z2 / 32.0, std::abs(zeta) * z2 / 96.0, zeta};
}

PqCoefficients pq_coeffs_direct(double zeta)
{
    const double a = std::abs(zeta);
    const double w_pg = pg_weight_direct(a);
    double w = 0.0;
    if (a < 2.0) {
        w = 2.0 * (w_pg - log_cosh(0.5 * a) / (a * a));
    } else {
        // w_pg - log cosh(a/2)/a^2 written in e^{-a}
        const double e = std::exp(-a);
        const double num = std::numbers::ln2 - std::log1p(e) - a * e / (1.0 + e);
        w = 2.0 * num / (a * a);
    }
    return {w, a * (w_pg - w), zeta};
}

}  // namespace detail

double pg_weight(double zeta)
{
    require_finite(zeta, "pg_weight");
    if (std::abs(zeta) < kSeriesThreshold) return detail::pg_weight_series(zeta);
    return detail::pg_weight_direct(zeta);
}

PqCoefficients pq_coeffs(double zeta)
{
    require_finite(zeta, "pq_coeffs");
    if (std::abs(zeta) < kSeriesThreshold) return detail::pq_coeffs_series(zeta);
    return detail::pq_coeffs_direct(zeta);
}

double bound_curvature(BoundKind kind, double zeta)
{
    switch (kind) {
        case BoundKind::BL: require_finite(zeta, "bound_curvature"); return 0.25;
        case BoundKind::PG: return pg_weight(zeta);
        case BoundKind::PQ: return pq_coeffs(zeta).w;
    }
    throw std::invalid_argument("bound_curvature: bad kind");
}

double tangent_quadratic(double r, double zeta, double curvature)
{
    require_finite(r, "tangent_quadratic");
    const double d = r - zeta;
    return h(zeta) + h_prime(zeta) * d - 0.5 * curvature * d * d;
}

double tangent_abs_corrected(double r, double zeta, double curvature)
{
    require_finite(r, "tangent_abs_corrected");
    const double a = std::abs(zeta);
    const double nu = a * (pg_weight(zeta) - curvature);
    return h(zeta) - 0.5 * curvature * (r * r - zeta * zeta) - nu * (std::abs(r) - a);
}

double eval_bound(BoundKind kind, double r, double zeta)
{
    require_finite(r, "eval_bound");
    require_finite(zeta, "eval_bound");
    switch (kind) {
        case BoundKind::BL:
            return tangent_quadratic(r, zeta, 0.25);
        case BoundKind::PG:
            return tangent_quadratic(r, zeta, pg_weight(zeta));
        case BoundKind::PQ: {
            if (zeta == 0.0) return tangent_quadratic(r, 0.0, 0.25);
            const auto c = pq_coeffs(zeta);
            return h(zeta) - 0.5 * c.w * (r * r - zeta * zeta) - c.nu * (std::abs(r) - std::abs(zeta));
        }
    }
    throw std::invalid_argument("eval_bound: bad kind");
}

double eval_transformed(BoundKind kind, double rho, double phi)
{
    if (!(rho >= 0.0) || !(phi >= 0.0) || !std::isfinite(rho) || !std::isfinite(phi)) {
        throw std::domain_error("eval_transformed: rho and phi must be finite and non-negative");
    }
    const double zeta = std::sqrt(phi);
    switch (kind) {
        case BoundKind::PG:
            // tangent line of the convex htilde(rho) = h(sqrt(rho)) at phi
            return h(zeta) - 0.5 * pg_weight(zeta) * (rho - phi);
        case BoundKind::PQ: {
            const auto c = pq_coeffs(zeta);
            return h(zeta) - 0.5 * c.w * (rho - phi) - c.nu * (std::sqrt(rho) - zeta);
        }
        case BoundKind::BL:
            break;
    }
    throw std::invalid_argument("eval_transformed: only PG and PQ have a transformed form");
}

}  // namespace logitmm
