#pragma once

#include "aggkit/tolerance.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace aggkit {

/// Outcome coordinates. Every computation requires a uniform, finite dimension >= 1.
using Point = Eigen::VectorXd;

/// `p` lies on the closed segment: p = lambda*a + (1-lambda)*b with lambda clamped to [0,1].
struct OnSegment {
    double lambda;
    double residual;
};

/// `p` is not on the segment. `collinear` marks points on the line but beyond an endpoint;
/// `raw_lambda` is the unclamped projection coefficient in both cases.
struct OffLine {
    double residual;
    double raw_lambda;
    bool collinear;
};

/// The endpoints coincide; `residual` is the distance from `p` to them.
struct Degenerate {
    double residual;
};

using SegmentCoefficient = std::variant<OnSegment, OffLine, Degenerate>;

/// Raw projection of `p` onto line(a, b), lambda weighting `a`.
struct LineCoefficient {
    double lambda = 0.0;
    double residual = 0.0;
    bool degenerate = false;
};

void require_same_dimension(const Point& a, const Point& b);
void require_finite(const Point& p);

double distance(const Point& a, const Point& b);

/// True when `a` and `b` agree within `tol` at their own magnitude.
bool coincident(const Point& a, const Point& b, const Tolerance& tol);

/// Dimension of the smallest affine variety containing `points`.
std::size_t affine_dimension(std::span<const Point> points, const Tolerance& tol);

LineCoefficient line_coefficient(const Point& p, const Point& a, const Point& b, const Tolerance& tol);
SegmentCoefficient segment_coefficient(const Point& p, const Point& a, const Point& b, const Tolerance& tol);

/// Unique common point of line(a1,a2) and line(b1,b2), or nullopt when the lines are
/// parallel, identical, or miss each other by more than `tol`. Throws DegenerateLine.
std::optional<Point> intersect_lines(
    const Point& a1, const Point& a2, const Point& b1, const Point& b2, const Tolerance& tol);

/// Affine coordinates of `p` over an affinely independent `basis` (sum to 1).
std::vector<double> barycentric(const Point& p, std::span<const Point> basis, const Tolerance& tol);

/// Some convex representation of `p` over `generators`, supported on an affinely
/// independent subset, or nullopt when `p` is outside Conv(generators).
std::optional<std::vector<double>> convex_coefficients(
    const Point& p, std::span<const Point> generators, const Tolerance& tol);

/// True iff `p` has a convex representation over `generators` with every coefficient
/// strictly above tolerance. Throws NotInConvexHull when `p` is outside the hull.
bool relative_interior_check(const Point& p, std::span<const Point> generators, const Tolerance& tol);

} // namespace aggkit
