#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kippen/criteria.hpp"
#include "kippen/geometry.hpp"
#include "kippen/kipp.hpp"
#include "kippen/pisom.hpp"
#include "kippen/sampling.hpp"
#include "support.hpp"

using namespace kippen;
using namespace kippen::kipp;
using linalg::ComplexMatrix;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix diag(std::initializer_list<cplx> d) {
    ComplexMatrix m(d.size(), d.size());
    std::size_t i = 0;
    for (cplx v : d) m(i, i) = v, ++i;
    return m;
}

std::vector<double> radii_of(const CircleReport& r) {
    std::vector<double> out;
    for (const auto& c : r.circles) out.push_back(c.radius);
    std::sort(out.begin(), out.end());
    return out;
}

ComplexMatrix random_small(Rng& rng, std::size_t n) {
    ComplexMatrix g = ginibre(rng, n, n);
    g *= 1.0 / linalg::spectral_norm(g);
    return g;
}

}  // namespace

TEST_CASE("kippenhahn_polynomial") {
    SUBCASE("J2 is lambda^2 - 1/4 for every theta") {
        const TrigPolynomial p = kippenhahn_polynomial(testing::jordan(2));
        for (double th : {0.0, 1.0, 2.5, 5.9}) {
            for (double lam : {-0.7, 0.0, 0.3, 0.5}) CHECK(p(lam, th) == doctest::Approx(lam * lam - 0.25).epsilon(1e-12));
        }
        for (int k = 1; k <= p.harmonics(); ++k)
            for (cplx c : p.harmonic(k)) CHECK(std::abs(c) < 1e-13);
    }
    SUBCASE("diag(1, i) is a product of lines") {
        const TrigPolynomial p = kippenhahn_polynomial(diag({1.0, cplx(0.0, 1.0)}));
        for (int j = 0; j < 40; ++j) {
            const double th = 0.37 * j, lam = std::sin(1.3 * j);
            CHECK(std::abs(p(lam, th) - (std::cos(th) - lam) * (-std::sin(th) - lam)) < 1e-12);
        }
    }
    SUBCASE("random matrices match a direct determinant at 100 probes") {
        Rng rng(31);
        for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 12u, 16u}) {
            const ComplexMatrix a = ginibre(rng, n, n);
            const TrigPolynomial p = kippenhahn_polynomial(a);
            CHECK(p.lambda_degree() == static_cast<int>(n));
            for (int probe = 0; probe < 100; ++probe) {
                const double th = rng.uniform(0.0, 2.0 * kPi);
                const double lam = rng.uniform(-2.0, 2.0);
                const double want = testing::eigen_kippenhahn(a, lam, th);
                const double scale = std::max(1.0, std::abs(want));
                if (std::abs(p(lam, th) - want) > 1e-9 * scale * std::pow(2.0, static_cast<double>(n)))
                    FAIL("n=" << n << " probe " << probe << " got " << p(lam, th) << " want " << want);
            }
            // lambda^a carries at most n - a harmonics
            for (int k = 0; k <= p.harmonics(); ++k) {
                const auto h = p.harmonic(k);
                for (std::size_t deg = 0; deg < h.size(); ++deg)
                    if (k > static_cast<int>(n) - static_cast<int>(deg)) CHECK(std::abs(h[deg]) < 1e-9);
            }
        }
    }
    SUBCASE("defect-2 forms reduce to -lambda p cos + q") {
        Rng rng(32);
        for (int trial = 0; trial < 30; ++trial) {
            const auto f = *sampling::sample_defect2(rng, sampling::Stratum::any);
            const auto pq = criteria::pq_from_form(f);
            const TrigPolynomial p = kippenhahn_polynomial(f.matrix());
            for (int probe = 0; probe < 50; ++probe) {
                const double th = rng.uniform(0.0, 2.0 * kPi), lam = rng.uniform(-1.0, 1.0);
                CHECK(std::abs(p(lam, th) - (-lam * pq.p(lam * lam) * std::cos(th) + pq.q(lam * lam))) < 1e-9);
            }
        }
    }
}

TEST_CASE("trace_curve") {
    SUBCASE("J2 lies on the circle of radius 1/2") {
        const auto pts = trace_curve(testing::jordan(2), 360);
        REQUIRE(pts.size() == 720);
        for (const auto& p : pts) CHECK(std::abs(std::abs(p.z) - 0.5) < 1e-8);
    }
    SUBCASE("diag(0, 1) collapses onto the eigenvalues") {
        for (const auto& p : trace_curve(diag({0.0, 1.0}), 64))
            CHECK(std::min(std::abs(p.z), std::abs(p.z - 1.0)) < 1e-10);
    }
    SUBCASE("points sit on their supporting lines and in W(A)") {
        Rng rng(33);
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexMatrix a = random_small(rng, 2 + rng.index(5));
            const auto pts = trace_curve(a, 100);
            CHECK(pts.size() == 100 * a.rows());
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const auto& p = pts[i];
                CHECK(p.theta == doctest::Approx(2.0 * kPi * static_cast<double>(i / a.rows()) / 100.0));
                CHECK(p.branch == i % a.rows());
                CHECK(std::abs((std::polar(1.0, p.theta) * p.z).real() - p.lambda) < 1e-8);
                CHECK(std::abs(p.z) <= linalg::spectral_norm(a) + 1e-10);
            }
        }
    }
    SUBCASE("convex hull matches the support polygon at 4096 steps") {
        Rng rng(34);
        for (int trial = 0; trial < 4; ++trial) {
            const ComplexMatrix a = random_small(rng, 3 + trial);
            const std::size_t steps = 4096;
            std::vector<geometry::Point> zs;
            for (const auto& p : trace_curve(a, steps)) zs.push_back(p.z);
            std::vector<double> thetas;
            for (std::size_t j = 0; j < steps; ++j) thetas.push_back(2.0 * kPi * j / steps);
            const auto hull = geometry::convex_hull(zs);
            const auto poly = geometry::support_polygon(a, thetas);
            CHECK(geometry::hausdorff_convex(hull, poly) <= 1e-4);
        }
    }
    SUBCASE("real matrices give a conjugation-symmetric curve") {
        Rng rng(35);
        ComplexMatrix a(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) a(i, j) = rng.normal();
        const std::size_t steps = 128;
        const auto pts = trace_curve(a, steps);
        // theta -> -theta maps the sample at step j to step steps - j, same branch, conjugated
        for (const auto& p : pts) {
            const std::size_t j = static_cast<std::size_t>(std::lround(p.theta * steps / (2.0 * kPi)));
            const auto& q = pts[((steps - j) % steps) * 4 + p.branch];
            CHECK(std::abs(q.z - std::conj(p.z)) < 1e-8);
        }
    }
}

TEST_CASE("support_value and numerical_radius") {
    CHECK(numerical_radius(testing::jordan(2)).value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(numerical_radius(diag({1.0, cplx(0.0, 1.0), -1.0})).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(numerical_radius(ComplexMatrix(3, 3)).value == 0.0);
    for (double t : {0.1, 0.4, 0.7, 0.95}) {
        const double want = std::sqrt(1.0 + std::sqrt(1.0 - t * t)) / 2.0;
        CHECK(numerical_radius(criteria::ath_matrix(t, 0.0)).value == doctest::Approx(want).epsilon(1e-10));
    }
    Rng rng(36);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_small(rng, 4);
        const auto w = numerical_radius(a);
        REQUIRE_FALSE(w.argmax_thetas.empty());
        for (double th : w.argmax_thetas) CHECK(support_value(a, th) == doctest::Approx(w.value).epsilon(1e-8));
        for (int j = 0; j < 512; ++j) CHECK(support_value(a, 2.0 * kPi * j / 512) <= w.value + 1e-12);
        CHECK(w.value <= linalg::spectral_norm(a) + 1e-12);
        CHECK(w.value >= linalg::spectral_norm(a) / 2.0 - 1e-12);
    }
    CHECK(support_value(diag({2.0, -3.0}), 0.0) == doctest::Approx(2.0));
    CHECK(support_value(diag({2.0, -3.0}), kPi) == doctest::Approx(3.0));
}

TEST_CASE("detect_circles") {
    SUBCASE("J2") {
        const auto r = detect_circles(testing::jordan(2));
        REQUIRE(r.circles.size() == 1);
        CHECK(std::abs(r.circles[0].center) < 1e-12);
        CHECK(r.circles[0].radius == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.disk == DiskClass::circular_disk);
        CHECK(r.numerical_radius == doctest::Approx(0.5));
    }
    SUBCASE("0 + 0 + J4") {
        const ComplexMatrix a = linalg::direct_sum(ComplexMatrix(2, 2), testing::jordan(4));
        const auto r = detect_circles(a);
        const auto radii = radii_of(r);
        REQUIRE(radii.size() == 3);
        CHECK(radii[0] == 0.0);
        CHECK(radii[1] == doctest::Approx((std::sqrt(5.0) - 1.0) / 4.0).epsilon(1e-9));
        CHECK(radii[2] == doctest::Approx((std::sqrt(5.0) + 1.0) / 4.0).epsilon(1e-9));
        for (const auto& c : r.circles) {
            CHECK(c.degenerate == (c.radius == 0.0));
            CHECK(circle_oracle_residual(a, c.center, c.radius) <= 1e-6);
        }
        CHECK(r.disk == DiskClass::circular_disk);
    }
    SUBCASE("normal matrices have no circles") {
        CHECK(detect_circles(diag({1.0, 2.0, 3.0})).circles.empty());
        CHECK(detect_circles(diag({1.0, 2.0, 3.0})).disk == DiskClass::non_disk);
    }
    SUBCASE("shifted Jordan block") {
        const cplx center(0.3, -0.2);
        const ComplexMatrix a = testing::jordan(2) + center * ComplexMatrix::identity(2);
        const auto r = detect_circles(a);
        REQUIRE(r.circles.size() == 1);
        CHECK(std::abs(r.circles[0].center - center) < 1e-9);
        CHECK(r.circles[0].radius == doctest::Approx(0.5));
    }
    SUBCASE("rotation covariance") {
        Rng rng(37);
        const ComplexMatrix base = linalg::direct_sum(testing::jordan(2) + cplx(0.2, 0.1) * ComplexMatrix::identity(2),
                                                      testing::jordan(3));
        const auto r0 = detect_circles(base);
        REQUIRE(r0.circles.size() >= 2);
        for (int trial = 0; trial < 20; ++trial) {
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            const auto r = detect_circles(std::polar(1.0, phi) * base);
            REQUIRE(r.circles.size() == r0.circles.size());
            for (const auto& c0 : r0.circles) {
                const cplx want = std::polar(1.0, phi) * c0.center;
                const bool found = std::any_of(r.circles.begin(), r.circles.end(), [&](const Circle& c) {
                    return std::abs(c.center - want) < 1e-8 && std::abs(c.radius - c0.radius) < 1e-8;
                });
                CHECK(found);
            }
        }
    }
    SUBCASE("unitary invariance") {
        Rng rng(38);
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = *sampling::sample_defect2(rng, sampling::Stratum::any);
            const ComplexMatrix a = f.matrix();
            const ComplexMatrix u = haar_unitary(rng, 6);
            const ComplexMatrix b = u * a * u.adjoint();
            const auto ra = detect_circles(a), rb = detect_circles(b);
            const auto xa = radii_of(ra), xb = radii_of(rb);
            REQUIRE(xa.size() == xb.size());
            for (std::size_t i = 0; i < xa.size(); ++i) CHECK(std::abs(xa[i] - xb[i]) < 1e-8);
            CHECK(ra.disk == rb.disk);
            CHECK(std::abs(ra.numerical_radius - rb.numerical_radius) < 1e-8);
            CHECK(contains_point_circle(a) == contains_point_circle(b));
        }
    }
}

TEST_CASE("contains_circle and contains_point_circle") {
    CHECK(contains_point_circle(ComplexMatrix(3, 3)));
    CHECK_FALSE(contains_point_circle(testing::jordan(2)));
    CHECK(contains_point_circle(testing::jordan(3)));
    CHECK(contains_circle(testing::jordan(2), 0.0, 0.5));
    CHECK_FALSE(contains_circle(testing::jordan(2), 0.0, 0.4));
    CHECK(contains_circle(testing::jordan(2), 0.0, 0.0) == contains_point_circle(testing::jordan(2)));

    Rng rng(39);
    for (int trial = 0; trial < 30; ++trial) {
        auto f = *sampling::sample_defect2(rng, sampling::Stratum::general);
        CHECK_FALSE(contains_point_circle(f.matrix()));
        const auto pq = criteria::pq_from_form(f);
        CHECK(pq.q(0.0) == doctest::Approx(-f.b * f.b * f.e * f.e / 64.0).epsilon(1e-10));
        // b = 0: move the weight onto c, d keeping the column a unit vector
        f.b = 0.0;
        const double cd = std::hypot(f.c, f.d);
        f.c /= cd;
        f.d /= cd;
        CHECK(contains_point_circle(f.matrix()));
    }
    CHECK(divisibility_residual(testing::jordan(2), 0.0, 0.5) < 1e-12);
    CHECK(circle_oracle_residual(testing::jordan(2), 0.0, 0.5) < 1e-12);
    CHECK(circle_oracle_residual(testing::jordan(2), 0.0, 0.3) > 1e-3);
}

TEST_CASE("branch_ranges") {
    const auto ranges = branch_ranges(testing::jordan(2), 64);
    REQUIRE(ranges.size() == 2);
    CHECK(ranges[0].min == doctest::Approx(-0.5));
    CHECK(ranges[0].max == doctest::Approx(-0.5));
    CHECK(ranges[1].min == doctest::Approx(0.5));
    CHECK(ranges[1].max == doctest::Approx(0.5));
    const auto j4 = branch_ranges(testing::jordan(4), 256);
    REQUIRE(j4.size() == 4);
    for (std::size_t b = 0; b < 4; ++b) CHECK(j4[b].min == doctest::Approx(j4[b].max));
    CHECK(j4[3].max == doctest::Approx((std::sqrt(5.0) + 1.0) / 4.0));
}
