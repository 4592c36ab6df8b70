#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kippen/geometry.hpp"
#include "kippen/kipp.hpp"
#include "support.hpp"

using namespace kippen;
using namespace kippen::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> grid(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t j = 0; j < n; ++j) t[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    return t;
}

double signed_area(const std::vector<Point>& p) {
    double a = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point u = p[i], v = p[(i + 1) % p.size()];
        a += u.real() * v.imag() - u.imag() * v.real();
    }
    return a / 2.0;
}

}  // namespace

TEST_CASE("convex_hull") {
    SUBCASE("square with interior and collinear points") {
        std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}, {1, 0.5}, {0.2, 0.7}};
        const auto h = convex_hull(pts);
        CHECK(h.size() == 4);
        CHECK(signed_area(h) == doctest::Approx(1.0));
    }
    SUBCASE("random clouds: every point inside, counter-clockwise") {
        Rng rng(71);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Point> pts;
            for (int i = 0; i < 200; ++i) pts.emplace_back(rng.normal(), rng.normal());
            const auto h = convex_hull(pts);
            CHECK(signed_area(h) > 0.0);
            for (const auto& p : pts) CHECK(distance_to_convex(h, p) <= 1e-12);
            for (std::size_t i = 0; i < h.size(); ++i) {
                const Point a = h[i], b = h[(i + 1) % h.size()], c = h[(i + 2) % h.size()];
                CHECK(((b - a).real() * (c - b).imag() - (b - a).imag() * (c - b).real()) > 0.0);
            }
        }
    }
    SUBCASE("degenerate inputs") {
        CHECK(convex_hull({}).empty());
        CHECK(convex_hull({{1, 1}}).size() == 1);
        CHECK(convex_hull({{0, 0}, {1, 1}, {2, 2}}).size() == 2);
    }
}

TEST_CASE("distance_to_convex and hausdorff_convex") {
    const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(distance_to_convex(sq, {0.5, 0.5}) == 0.0);
    CHECK(distance_to_convex(sq, {2, 0.5}) == doctest::Approx(1.0));
    CHECK(distance_to_convex(sq, {2, 2}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(hausdorff_convex(sq, sq) == doctest::Approx(0.0));
    std::vector<Point> big;
    for (const auto& p : sq) big.push_back(p * 2.0);
    CHECK(hausdorff_convex(sq, big) == doctest::Approx(std::sqrt(2.0)));
    CHECK(hausdorff_convex(big, sq) == doctest::Approx(std::sqrt(2.0)));
    std::vector<Point> shifted;
    for (const auto& p : sq) shifted.push_back(p + Point(0.25, 0.0));
    CHECK(hausdorff_convex(sq, shifted) == doctest::Approx(0.25));
}

TEST_CASE("support_polygon") {
    SUBCASE("J2 circumscribes the disk of radius 1/2") {
        const std::size_t n = 256;
        const auto poly = support_polygon(testing::jordan(2), grid(n));
        CHECK(poly.size() == n);
        const double outer = 0.5 / std::cos(kPi / static_cast<double>(n));
        for (const auto& p : poly) CHECK(std::abs(p) == doctest::Approx(outer).epsilon(1e-9));
    }
    SUBCASE("diagonal matrix gives the triangle of its eigenvalues") {
        linalg::ComplexMatrix d(3, 3);
        d(0, 0) = 1.0;
        d(1, 1) = Point(0, 1);
        d(2, 2) = -1.0;
        const auto hull = convex_hull(support_polygon(d, grid(720)));
        const std::vector<Point> tri{{1, 0}, {0, 1}, {-1, 0}};
        CHECK(hausdorff_convex(hull, convex_hull(tri)) <= 1e-9);
    }
    SUBCASE("contains the traced curve") {
        Rng rng(72);
        const auto a = ginibre(rng, 4, 4);
        const auto poly = support_polygon(a, grid(128));
        for (const auto& p : kipp::trace_curve(a, 97)) CHECK(distance_to_convex(poly, p.z) <= 1e-9);
    }
}

TEST_CASE("fit_ellipse") {
    SUBCASE("recovers a rotated ellipse") {
        const Point center(0.2, -0.1);
        const double a = 0.5, b = 0.3, phi = 0.4;
        std::vector<Point> pts;
        for (int j = 0; j < 50; ++j) {
            const double t = 2.0 * kPi * j / 50.0;
            pts.push_back(center + std::polar(1.0, phi) * Point(a * std::cos(t), b * std::sin(t)));
        }
        const Ellipse e = fit_ellipse(pts);
        CHECK(std::abs(e.center - center) < 1e-9);
        CHECK(e.semi_major == doctest::Approx(a).epsilon(1e-9));
        CHECK(e.semi_minor == doctest::Approx(b).epsilon(1e-9));
        CHECK(e.fit_residual < 1e-9);
        const double c = std::sqrt(a * a - b * b);
        const Point f1 = center + std::polar(c, phi), f2 = center - std::polar(c, phi);
        const double direct = std::abs(e.foci[0] - f1) + std::abs(e.foci[1] - f2);
        const double swapped = std::abs(e.foci[0] - f2) + std::abs(e.foci[1] - f1);
        CHECK(std::min(direct, swapped) < 1e-8);
    }
    SUBCASE("foci 0 and h with major axis 1") {
        const double h = 0.6;
        const double b = std::sqrt(0.25 - h * h / 4.0);
        std::vector<Point> pts;
        for (int j = 0; j < 40; ++j) {
            const double t = 2.0 * kPi * j / 40.0;
            pts.emplace_back(h / 2.0 + 0.5 * std::cos(t), b * std::sin(t));
        }
        const Ellipse e = fit_ellipse(pts);
        CHECK(e.semi_major == doctest::Approx(0.5));
        const double lo = std::min(e.foci[0].real(), e.foci[1].real());
        const double hi = std::max(e.foci[0].real(), e.foci[1].real());
        CHECK(std::abs(lo) < 1e-9);
        CHECK(hi == doctest::Approx(h));
    }
    SUBCASE("rejects hyperbolas and tiny inputs") {
        std::vector<Point> hyp;
        for (int j = -10; j <= 10; ++j) {
            const double x = 1.0 + 0.1 * std::abs(j);
            hyp.emplace_back(x, (j < 0 ? -1.0 : 1.0) * std::sqrt(x * x - 1.0));
        }
        CHECK_THROWS(fit_ellipse(hyp));
        const std::vector<Point> few{{0, 0}, {1, 0}, {0, 1}};
        CHECK_THROWS_AS(fit_ellipse(few), std::invalid_argument);
    }
}
