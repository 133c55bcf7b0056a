#include "aggkit/geometry.hpp"

#include "aggkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace aggkit {

namespace {

double magnitude(const Point& a, const Point& b) { return std::max(a.norm(), b.norm()); }

void require_uniform(std::span<const Point> points)
{
    for (const auto& p : points) {
        require_same_dimension(points.front(), p);
    }
}

// Barycentric solve without throwing: nullopt when `p` leaves the affine hull.
std::optional<std::vector<double>> solve_affine(const Point& p, std::span<const Point> basis, const Tolerance& tol)
{
    const auto k = static_cast<Eigen::Index>(basis.size()) - 1;
    const Point& origin = basis.front();
    if (k == 0) {
        if (distance(p, origin) > tol.bound(magnitude(p, origin))) {
            return std::nullopt;
        }
        return std::vector<double>{1.0};
    }
    Eigen::MatrixXd edges(origin.size(), k);
    double scale = std::max(p.norm(), origin.norm());
    for (Eigen::Index j = 0; j < k; ++j) {
        edges.col(j) = basis[static_cast<std::size_t>(j + 1)] - origin;
        scale = std::max(scale, basis[static_cast<std::size_t>(j + 1)].norm());
    }
    const Point rhs = p - origin;
    const Eigen::VectorXd c = edges.colPivHouseholderQr().solve(rhs);
    if ((edges * c - rhs).norm() > tol.bound(scale)) {
        return std::nullopt;
    }
    std::vector<double> out(basis.size());
    out[0] = 1.0 - c.sum();
    for (Eigen::Index j = 0; j < k; ++j) {
        out[static_cast<std::size_t>(j + 1)] = c[j];
    }
    return out;
}

// Calls `visit(indices, coefficients)` for every affinely independent subset of
// `generators` that holds `p` in its convex hull (coefficients >= -slack).
void for_each_convex_support(
    const Point& p,
    std::span<const Point> generators,
    const Tolerance& tol,
    const std::function<void(const std::vector<std::size_t>&, const std::vector<double>&)>& visit)
{
    const std::size_t n = generators.size();
    const std::size_t max_size = std::min(n, affine_dimension(generators, tol) + 1);
    std::vector<Point> subset;
    for (std::size_t size = 1; size <= max_size; ++size) {
        std::vector<std::size_t> idx(size);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        while (true) {
            subset.clear();
            for (auto i : idx) {
                subset.push_back(generators[i]);
            }
            if (affine_dimension(subset, tol) + 1 == size) {
                if (auto coeffs = solve_affine(p, subset, tol)) {
                    const bool convex = std::all_of(
                        coeffs->begin(), coeffs->end(), [&](double c) { return c >= -tol.slack(); });
                    if (convex) {
                        visit(idx, *coeffs);
                    }
                }
            }
            // next combination in lexicographic order
            std::size_t pos = size;
            while (pos > 0 && idx[pos - 1] == n - size + pos - 1) {
                --pos;
            }
            if (pos == 0) {
                break;
            }
            ++idx[pos - 1];
            for (std::size_t j = pos; j < size; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

} // namespace

void require_same_dimension(const Point& a, const Point& b)
{
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch,
            "dimension " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

void require_finite(const Point& p)
{
    if (p.size() < 1) {
        throw Error(ErrorCode::InvalidInput, "point has no coordinates");
    }
    if (!p.allFinite()) {
        throw Error(ErrorCode::InvalidInput, "point has a non-finite coordinate");
    }
}

double distance(const Point& a, const Point& b)
{
    require_same_dimension(a, b);
    return (a - b).norm();
}

bool coincident(const Point& a, const Point& b, const Tolerance& tol)
{
    return distance(a, b) <= tol.bound(magnitude(a, b));
}

std::size_t affine_dimension(std::span<const Point> points, const Tolerance& tol)
{
    if (points.empty()) {
        throw Error(ErrorCode::InvalidInput, "affine_dimension of an empty point list");
    }
    require_uniform(points);
    if (points.size() == 1) {
        return 0;
    }
    const auto d = points.front().size();
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd centered(d, n);
    Point mean = Point::Zero(d);
    for (const auto& p : points) {
        mean += p;
    }
    mean /= static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        centered.col(j) = points[static_cast<std::size_t>(j)] - mean;
    }
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(centered).singularValues();
    if (sv.size() == 0) {
        return 0;
    }
    const double cutoff = std::max(tol.abs_tol, tol.rel_tol * sv[0]);
    return static_cast<std::size_t>((sv.array() > cutoff).count());
}

LineCoefficient line_coefficient(const Point& p, const Point& a, const Point& b, const Tolerance& tol)
{
    require_same_dimension(p, a);
    require_same_dimension(a, b);
    const Point ab = a - b;
    const double len2 = ab.squaredNorm();
    if (std::sqrt(len2) <= tol.bound(magnitude(a, b))) {
        return {0.0, (p - a).norm(), true};
    }
    const double lambda = (p - b).dot(ab) / len2;
    const double residual = (p - (b + lambda * ab)).norm();
    return {lambda, residual, false};
}

SegmentCoefficient segment_coefficient(const Point& p, const Point& a, const Point& b, const Tolerance& tol)
{
    const LineCoefficient line = line_coefficient(p, a, b, tol);
    if (line.degenerate) {
        return Degenerate{line.residual};
    }
    const double scale = std::max(magnitude(a, b), p.norm());
    if (line.residual > tol.bound(scale)) {
        return OffLine{line.residual, line.lambda, false};
    }
    const double slack = tol.slack();
    if (line.lambda < -slack || line.lambda > 1.0 + slack) {
        return OffLine{line.residual, line.lambda, true};
    }
    return OnSegment{std::clamp(line.lambda, 0.0, 1.0), line.residual};
}

std::optional<Point> intersect_lines(
    const Point& a1, const Point& a2, const Point& b1, const Point& b2, const Tolerance& tol)
{
    require_same_dimension(a1, a2);
    require_same_dimension(a1, b1);
    require_same_dimension(a1, b2);
    const Point da = a2 - a1;
    const Point db = b2 - b1;
    if (da.norm() <= tol.bound(magnitude(a1, a2)) || db.norm() <= tol.bound(magnitude(b1, b2))) {
        throw Error(ErrorCode::DegenerateLine, "line endpoints coincide");
    }
    const std::vector<Point> all{a1, a2, b1, b2};
    if (affine_dimension(all, tol) <= 1) {
        return std::nullopt;
    }
    const Point ua = da.normalized();
    const Point ub = db.normalized();
    if ((ua - ua.dot(ub) * ub).norm() <= tol.slack()) {
        return std::nullopt;
    }
    Eigen::MatrixXd system(a1.size(), 2);
    system.col(0) = da;
    system.col(1) = -db;
    const Eigen::Vector2d st = system.colPivHouseholderQr().solve(b1 - a1);
    const Point on_a = a1 + st[0] * da;
    const Point on_b = b1 + st[1] * db;
    const double scale = std::max(magnitude(a1, a2), magnitude(b1, b2));
    if ((on_a - on_b).norm() > tol.bound(scale)) {
        return std::nullopt;
    }
    return Point(0.5 * (on_a + on_b));
}

std::vector<double> barycentric(const Point& p, std::span<const Point> basis, const Tolerance& tol)
{
    if (basis.empty()) {
        throw Error(ErrorCode::AffinelyDependentBasis, "empty basis");
    }
    require_uniform(basis);
    require_same_dimension(p, basis.front());
    if (affine_dimension(basis, tol) + 1 != basis.size()) {
        throw Error(ErrorCode::AffinelyDependentBasis,
            "basis of " + std::to_string(basis.size()) + " points is affinely dependent");
    }
    auto coeffs = solve_affine(p, basis, tol);
    if (!coeffs) {
        throw Error(ErrorCode::NotInAffineHull, "point lies outside the affine hull of the basis");
    }
    return *coeffs;
}

std::optional<std::vector<double>> convex_coefficients(
    const Point& p, std::span<const Point> generators, const Tolerance& tol)
{
    if (generators.empty()) {
        throw Error(ErrorCode::InvalidInput, "no generators");
    }
    require_uniform(generators);
    require_same_dimension(p, generators.front());
    std::optional<std::vector<double>> found;
    for_each_convex_support(p, generators, tol, [&](const auto& idx, const auto& coeffs) {
        if (found) {
            return;
        }
        std::vector<double> full(generators.size(), 0.0);
        for (std::size_t j = 0; j < idx.size(); ++j) {
            full[idx[j]] = std::max(0.0, coeffs[j]);
        }
        found = std::move(full);
    });
    return found;
}

bool relative_interior_check(const Point& p, std::span<const Point> generators, const Tolerance& tol)
{
    if (generators.empty()) {
        throw Error(ErrorCode::InvalidInput, "no generators");
    }
    require_uniform(generators);
    require_same_dimension(p, generators.front());
    // The best coefficient each generator can carry is attained on an affinely
    // independent support; averaging the per-generator optima gives a representation
    // strictly positive everywhere iff every optimum is positive.
    std::vector<double> best(generators.size(), -1.0);
    bool any = false;
    for_each_convex_support(p, generators, tol, [&](const auto& idx, const auto& coeffs) {
        any = true;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            best[idx[j]] = std::max(best[idx[j]], coeffs[j]);
        }
    });
    if (!any) {
        throw Error(ErrorCode::NotInConvexHull, "point lies outside the convex hull of the generators");
    }
    return std::all_of(best.begin(), best.end(), [&](double c) { return c > tol.slack(); });
}

} // namespace aggkit
