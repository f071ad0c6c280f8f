#pragma once

#include <string>
#include <vector>

#include "canmet/types.hpp"

namespace canmet {

/// Parses a monic polynomial in x into ascending coefficients.
/// Grammar: a sum of terms `[coef][*]x[^k]` with decimal or rational
/// coefficients, e.g. "x^6-1" or "x^4 - 5/4*x^2 + 1/4".
std::vector<double> parse_monic_poly(const std::string& text);

/// All complex roots, Durand-Kerner iteration polished by Newton steps.
std::vector<cplx> poly_roots(const std::vector<double>& ascending_coeffs);

} // namespace canmet
