#pragma once

#include "aggkit/error.hpp"
#include "aggkit/geometry.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

namespace aggkit::test {

inline Point pt(std::initializer_list<double> xs)
{
    Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double x : xs) {
        p[k++] = x;
    }
    return p;
}

inline bool near(const Point& a, const Point& b, double eps = 1e-12)
{
    return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= eps;
}

inline std::string fixture(const std::string& name)
{
    return (std::filesystem::path(AGGKIT_FIXTURE_DIR) / name).string();
}

} // namespace aggkit::test

#define CHECK_CODE(expr, expected)                                                                                     \
    do {                                                                                                               \
        bool thrown_ = false;                                                                                          \
        try {                                                                                                          \
            (void)(expr);                                                                                              \
        } catch (const ::aggkit::Error& e_) {                                                                          \
            thrown_ = true;                                                                                            \
            CHECK(e_.code() == (expected));                                                                            \
        }                                                                                                              \
        CHECK_MESSAGE(thrown_, "expected an aggkit::Error");                                                           \
    } while (0)
