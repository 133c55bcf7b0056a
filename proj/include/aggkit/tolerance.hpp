#pragma once

#include <algorithm>
#include <cmath>

namespace aggkit {

/// Mixed absolute/relative tolerance shared by every gated comparison.
///
/// A distance `d` measured at magnitude `scale` is treated as zero when
/// `d <= max(abs_tol, rel_tol * scale)`. Dimensionless quantities (segment
/// coefficients, barycentric weights) use `slack()`.
struct Tolerance {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;

    constexpr double bound(double scale) const noexcept
    {
        return std::max(abs_tol, rel_tol * (scale < 0.0 ? -scale : scale));
    }

    constexpr double slack() const noexcept { return std::max(abs_tol, rel_tol); }

    constexpr bool negligible(double distance, double scale = 1.0) const noexcept
    {
        return (distance < 0.0 ? -distance : distance) <= bound(scale);
    }

    constexpr bool valid() const noexcept
    {
        return abs_tol >= 0.0 && rel_tol >= 0.0 && (abs_tol > 0.0 || rel_tol > 0.0);
    }

    static constexpr Tolerance uniform(double tol) noexcept { return {tol, tol}; }
};

} // namespace aggkit
