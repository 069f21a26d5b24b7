#pragma once

#include "logitmm/bounds.hpp"

// Individual evaluation branches of the bound weights, exposed so the
// series/closed-form switch can be tested. No argument checking.
namespace logitmm::detail {

double pg_weight_series(double zeta);
double pg_weight_direct(double zeta);
PqCoefficients pq_coeffs_series(double zeta);
PqCoefficients pq_coeffs_direct(double zeta);

}  // namespace logitmm::detail
