#pragma once

#include <vector>

#include "wvlab/errors.hpp"

namespace wvlab {

/// Least-squares line through (log x, log y).
struct PowerLawFit {
    double exponent;      // slope
    double log_intercept; // natural-log intercept
    double max_dev;       // max |log y - fit| over the points
};

/// Fits y ~ C x^k. Requires >= 3 strictly positive points with the x values
/// spanning at least a 4x range; throws DegenerateSweep otherwise.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

} // namespace wvlab
