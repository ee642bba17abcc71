#include "wvlab/fit.hpp"

#include <algorithm>
#include <cmath>

namespace wvlab {

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DegenerateSweep("fit_power_law: size mismatch");
    if (x.size() < 3) throw DegenerateSweep("fit_power_law: need at least 3 points");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] <= 0.0 || y[i] <= 0.0)
            throw DegenerateSweep("fit_power_law: nonpositive point, cannot take logs");
    const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
    if (*xmax < 4.0 * *xmin)
        throw DegenerateSweep("fit_power_law: x range must span at least 4x");

    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = double(n) * sxx - sx * sx;
    PowerLawFit fit{};
    fit.exponent = (double(n) * sxy - sx * sy) / denom;
    fit.log_intercept = (sy - fit.exponent * sx) / double(n);
    fit.max_dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.log_intercept + fit.exponent * std::log(x[i]);
        fit.max_dev = std::max(fit.max_dev, std::abs(std::log(y[i]) - pred));
    }
    return fit;
}

} // namespace wvlab
