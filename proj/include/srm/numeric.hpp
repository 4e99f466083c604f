#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace srm {

// ceil(x), except that x within 1e-9 (relative) of an integer is that integer.
// Keeps formula-derived counts like ceil(6 / (6 * 0.01)) from rounding up on
// representation noise.
inline double snapped_ceil(double x) {
    const double nearest = std::nearbyint(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return nearest;
    return std::ceil(x);
}

// snapped_ceil clamped to [0, UINT64_MAX]; NaN and +inf saturate.
inline std::uint64_t saturating_count(double x) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (!(x < 1.8e19)) return kMax;
    if (x <= 0) return 0;
    return static_cast<std::uint64_t>(snapped_ceil(x));
}

}  // namespace srm
