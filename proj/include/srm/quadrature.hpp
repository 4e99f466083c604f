#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace srm::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. The interval with the
// largest error estimate is bisected until the summed estimate is <= abs_tol
// or max_intervals is reached; the caller decides what an unmet tolerance
// means. Nodes are interior, so integrable endpoint singularities are fine.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, std::size_t max_intervals = 4000);

// Same, with the interval first split at every breakpoint inside (a, b).
Result gauss_kronrod_split(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, double abs_tol);

}  // namespace srm::quad
