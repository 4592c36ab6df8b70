#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kippen/criteria.hpp"
#include "kippen/document.hpp"
#include "kippen/kipp.hpp"
#include "kippen/pisom.hpp"
#include "kippen/sampling.hpp"
#include "support.hpp"

using namespace kippen;
using namespace kippen::criteria;
using linalg::ComplexMatrix;
using linalg::cplx;
using sampling::Stratum;

namespace {

constexpr double kPi = std::numbers::pi;

Defect2Form form(double b, double c, double d, double e, double f, double g, double h) {
    Defect2Form out;
    out.b = b, out.c = c, out.d = d, out.e = e, out.f = f, out.g = g, out.h = h;
    return out;
}

// Column-normalised c = f = g = 0 member.
Defect2Form two_circle_form(double d, double h) {
    const double b = std::sqrt(1.0 - d * d);
    const double e = std::sqrt(1.0 - h * h);
    return form(b, 0.0, d, e, 0.0, 0.0, h);
}

std::vector<double> oracle_radii(const ComplexMatrix& a, const kipp::DetectOptions& opts = {}) {
    std::vector<double> out;
    for (const auto& c : kipp::detect_circles(a, opts).circles) out.push_back(c.radius);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> closed_radii(const Defect2Form& f) {
    std::vector<double> out;
    for (const auto& r : circles_defect2(f).radii) {
        if (!out.empty() && std::abs(out.back() - r.value) < 1e-6) continue;
        out.push_back(r.value);
    }
    return out;
}

bool contains(const std::vector<double>& radii, double r, double tol = 1e-6) {
    return std::any_of(radii.begin(), radii.end(), [&](double x) { return std::abs(x - r) <= tol; });
}

Defect2Form example_form(const std::string& name) {
    const auto a = io::load_document(testing::data_file(name)).matrix;
    return pisom::canonicalize_defect2(pisom::validate(pisom::project_to_partial_isometry(a))).form;
}

}  // namespace

TEST_CASE("pq_from_form") {
    SUBCASE("b = e = 1 gives a triple root at 1/4") {
        const auto pq = pq_from_form(form(1, 0, 0, 1, 0, 0, 0));
        CHECK(pq.p.max_abs_coeff() == 0.0);
        for (double rho : {-1.0, 0.0, 0.3, 0.9}) CHECK(pq.q(rho) == doctest::Approx(std::pow(rho - 0.25, 3)).epsilon(1e-14));
    }
    SUBCASE("h = 0 kills p and leaves the nilpotent cubic") {
        Rng rng(41);
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::nilpotent_ceg0);
            const auto pq = pq_from_form(f);
            CHECK(pq.p.max_abs_coeff() <= 1e-12);
            CHECK(pq.q.coeffs.size() == 4);
            CHECK(pq.q.coeffs[3] == 1.0);
            CHECK(pq.q.coeffs[2] == doctest::Approx(-0.75));
        }
    }
    SUBCASE("coefficients") {
        const auto f = form(0.3, 0.4, std::sqrt(1 - 0.25), 0.5, -0.4, 0.6, std::sqrt(1 - 0.25 - 0.16 - 0.36));
        const auto pq = pq_from_form(f);
        const double h = f.h;
        CHECK(pq.p(0.0) == doctest::Approx(((f.b * f.b + f.c * f.c) * h - f.c * f.e * f.g) / 16.0));
        CHECK(pq.p.coeffs.at(1) == doctest::Approx(-0.5 * h));
        CHECK(pq.p.coeffs.at(2) == doctest::Approx(h));
        CHECK(pq.q.coeffs.at(2) == doctest::Approx(-(3.0 - h * h) / 4.0));
        CHECK(pq.q.coeffs.at(1) == doctest::Approx((f.c * f.c + f.b * f.b + f.e * f.e + 1.0 - h * h) / 16.0));
        CHECK(pq.q(0.0) == doctest::Approx(-f.b * f.b * f.e * f.e / 64.0));
    }
    SUBCASE("random forms agree with the determinant") {
        Rng rng(42);
        for (int trial = 0; trial < 50; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::any);
            const auto pq = pq_from_form(f);
            for (int probe = 0; probe < 50; ++probe) {
                const double th = rng.uniform(0.0, 2.0 * kPi), lam = rng.uniform(-1.0, 1.0);
                const double want = testing::eigen_kippenhahn(f.matrix(), lam, th);
                CHECK(std::abs(-lam * pq.p(lam * lam) * std::cos(th) + pq.q(lam * lam) - want) <= 1e-9);
            }
        }
    }
}

TEST_CASE("circles_defect2") {
    SUBCASE("oracle agreement over 500 admissible forms") {
        Rng rng(43);
        int empty = 0;
        for (int trial = 0; trial < 500; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::any);
            const auto closed = closed_radii(f);
            const auto oracle = oracle_radii(f.matrix());
            if (closed.empty()) ++empty;
            if (closed.size() != oracle.size()) {
                FAIL("trial " << trial << ": " << closed.size() << " closed vs " << oracle.size() << " oracle");
                continue;
            }
            for (std::size_t i = 0; i < closed.size(); ++i) CHECK(std::abs(closed[i] - oracle[i]) <= 1e-6);
        }
        CHECK(empty > 0);
    }
    SUBCASE("nilpotent with ceg = 0 brackets 1/2") {
        Rng rng(44);
        for (int trial = 0; trial < 50; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::nilpotent_ceg0);
            const auto c = circles_defect2(f);
            CHECK(c.nilpotent_branch);
            std::vector<double> r;
            for (const auto& root : c.radii)
                for (int m = 0; m < root.multiplicity; ++m) r.push_back(root.value);
            REQUIRE(r.size() == 3);
            CHECK(r[0] <= 0.5 + 1e-9);
            CHECK(r[2] >= 0.5 - 1e-9);
        }
    }
    SUBCASE("h = be = ceg = 0 matches the closed radii") {
        Rng rng(45);
        for (int trial = 0; trial < 50; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::nilpotent_be0);
            const auto want = nilpotent_be0_radii(f.b, f.c, f.e);
            const auto got = closed_radii(f);
            for (double r : want) CHECK(contains(got, r, 1e-7));
            CHECK(got.front() == doctest::Approx(0.0));
        }
        const auto j4 = nilpotent_be0_radii(0.0, 0.0, 0.0);
        CHECK(j4[1] == doctest::Approx((std::sqrt(5.0) - 1.0) / 4.0).epsilon(1e-12));
        CHECK(j4[2] == doctest::Approx((std::sqrt(5.0) + 1.0) / 4.0).epsilon(1e-12));
    }
    SUBCASE("c = g = 0 gives sqrt(1 -+ d) / 2") {
        for (double d : {0.1, 0.5, 0.98}) {
            const auto f = two_circle_form(d, 0.3);
            const auto got = closed_radii(f);
            CHECK(contains(got, std::sqrt(1.0 - d) / 2.0, 1e-9));
            CHECK(contains(got, std::sqrt(1.0 + d) / 2.0, 1e-9));
        }
    }
}

TEST_CASE("Lemma identities on nilpotent forms") {
    Rng rng(46);
    for (int trial = 0; trial < 200; ++trial) {
        const auto f = *sampling::sample_defect2(rng, Stratum::nilpotent);
        const double b2 = f.b * f.b, e2 = f.e * f.e;
        CHECK(std::abs(b2 + f.c * f.c + e2 + f.d * f.d * f.g * f.g - 1.0 - b2 * e2) <= 1e-12);
        if (f.g == 0.0) CHECK(std::abs(b2 * e2 + f.d * f.d + f.f * f.f - 1.0) <= 1e-12);
        const auto pq = pq_from_form(f);
        CHECK(std::abs(pq.q(0.25) + f.d * f.d * f.g * f.g / 64.0) <= 1e-12);
        // r2 = 1/2 exactly when g = 0 or c = d = 0
        const bool half = contains(closed_radii(f), 0.5, 1e-7);
        CHECK(half == (f.g == 0.0 || (f.c == 0.0 && f.d == 0.0)));
    }
}

TEST_CASE("has_circle_half") {
    Rng rng(47);
    for (Stratum s : {Stratum::half_cd0, Stratum::half_gh0}) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto f = *sampling::sample_defect2(rng, s);
            CHECK(has_circle_half(f));
            CHECK(kipp::contains_circle(f.matrix(), 0.0, 0.5));
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = *sampling::sample_defect2(rng, Stratum::no_half);
        CHECK_FALSE(has_circle_half(f));
        CHECK_FALSE(kipp::contains_circle(f.matrix(), 0.0, 0.5));
        const auto pq = pq_from_form(f);
        CHECK(std::max(std::abs(pq.p(0.25)), std::abs(pq.q(0.25))) > 1e-9);
    }
    CHECK_FALSE(has_circle_half(example_form("example1")));
}

TEST_CASE("reduce_J2") {
    Rng rng(48);
    for (Stratum s : {Stratum::half_cd0, Stratum::half_gh0}) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto f = *sampling::sample_defect2(rng, s);
            const auto red = reduce_J2(f);
            CHECK(red.t == doctest::Approx(f.b * f.e).epsilon(1e-10));
            if (s == Stratum::half_gh0) CHECK(red.h == 0.0);
            if (s == Stratum::half_cd0) CHECK(red.h == doctest::Approx(f.h));
            const ComplexMatrix target = linalg::direct_sum(testing::jordan(2), ath_matrix(red.t, red.h));
            CHECK((red.unitary.adjoint() * f.matrix() * red.unitary - target).max_abs() <= 1e-8);
            for (int j = 0; j < 64; ++j) {
                const double th = 2.0 * kPi * j / 64.0, lam = 0.9 * std::cos(7.0 * j);
                CHECK(std::abs(testing::eigen_kippenhahn(f.matrix(), lam, th) -
                               testing::eigen_kippenhahn(target, lam, th)) <= 1e-8);
            }
        }
    }
    SUBCASE("three Jordan blocks") {
        const auto red = reduce_J2(form(1, 0, 0, 1, 0, 0, 0));
        CHECK(red.t == 1.0);
        const auto radii = oracle_radii(linalg::direct_sum(testing::jordan(2), ath_matrix(red.t, red.h)));
        REQUIRE(radii.size() == 1);
        CHECK(radii[0] == doctest::Approx(0.5));
    }
    CHECK_THROWS_AS(reduce_J2(example_form("example1")), std::invalid_argument);
}

TEST_CASE("x_value") {
    CHECK(*x_value(two_circle_form(0.4, 0.5)) == doctest::Approx(0.4));
    // d = 0 with ceg / h < 0
    auto f = form(0.6, 0.8, 0.0, 0.5, 0.0, -0.5, std::sqrt(0.5));
    CHECK_FALSE(x_value(f).has_value());
    CHECK_THROWS_AS((void)x_value(form(1, 0, 0, 1, 0, 0, 0)), std::invalid_argument);

    // the circle of the first worked example is the minus one
    const auto ex1 = example_form("example1");
    const auto x = x_value(ex1);
    REQUIRE(x.has_value());
    const double r = kipp::detect_circles(ex1.matrix(), kipp::DetectOptions::rounded()).circles.at(0).radius;
    CHECK(std::abs(std::sqrt(1.0 - *x) / 2.0 - r) <= 1e-4);
}

TEST_CASE("crith_conditions") {
    SUBCASE("two-circle members satisfy both") {
        for (double d : {0.2, 0.6, 0.9}) {
            const auto c = crith_conditions(two_circle_form(d, 0.4));
            CHECK(c.plus_holds);
            CHECK(c.minus_holds);
            CHECK(contains(c.radii, std::sqrt(1.0 + d) / 2.0, 1e-12));
            CHECK(contains(c.radii, std::sqrt(1.0 - d) / 2.0, 1e-12));
        }
    }
    SUBCASE("the plus stratum yields the plus circle in the oracle") {
        Rng rng(49);
        for (int trial = 0; trial < 50; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::crith_plus);
            const auto c = crith_conditions(f);
            CHECK(c.plus_holds);
            CHECK(contains(oracle_radii(f.matrix()), std::sqrt(1.0 + c.x) / 2.0, 1e-6));
        }
    }
    SUBCASE("monotone consistency on general forms") {
        Rng rng(50);
        for (int trial = 0; trial < 200; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::general);
            if (!x_value(f)) continue;
            const auto c = crith_conditions(f);
            const auto radii = oracle_radii(f.matrix());
            if (c.plus_holds) CHECK(contains(radii, std::sqrt(1.0 + c.x) / 2.0));
            if (c.minus_holds && c.x < 1.0) CHECK(contains(radii, std::sqrt(1.0 - c.x) / 2.0));
        }
    }
    SUBCASE("third worked example satisfies the plus condition") {
        const auto f = example_form("example3");
        const auto c = crith_conditions(f, 1e-3);
        CHECK(c.plus_holds);
    }
    CHECK_THROWS_AS(crith_conditions(form(1, 0, 0, 1, 0, 0, 0)), std::invalid_argument);
}

TEST_CASE("two_circles_classification") {
    CHECK(two_circles_classification(two_circle_form(0.98, std::sqrt(0.5))));
    CHECK_FALSE(two_circles_classification(two_circle_form(1.0, 0.5)));
    CHECK_FALSE(two_circles_classification(two_circle_form(0.0, 0.5)));
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        CHECK_FALSE(two_circles_classification(*sampling::sample_defect2(rng, Stratum::general)));
        CHECK(two_circles_classification(*sampling::sample_defect2(rng, Stratum::two_circles)));
    }
}

TEST_CASE("disk_classification") {
    SUBCASE("c = g = 0, d = 0.5, h = 0.3 is not a disk") {
        const auto v = disk_classification(two_circle_form(0.5, 0.3));
        CHECK_FALSE(v.disk);
        CHECK(kipp::detect_circles(two_circle_form(0.5, 0.3).matrix()).disk == kipp::DiskClass::non_disk);
    }
    SUBCASE("c = g = 0 with d above 2h + h^2 is a disk") {
        const auto f = two_circle_form(0.9, 0.3);
        const auto v = disk_classification(f);
        CHECK(v.disk);
        REQUIRE(v.radius.has_value());
        CHECK(*v.radius == doctest::Approx(std::sqrt(1.9) / 2.0));
        CHECK(kipp::numerical_radius(f.matrix()).value == doctest::Approx(*v.radius).epsilon(1e-7));
    }
    SUBCASE("nilpotent ceg = 0 is the disk of the largest circle") {
        Rng rng(52);
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::nilpotent_ceg0);
            const auto v = disk_classification(f);
            CHECK(v.disk);
            CHECK(*v.radius == doctest::Approx(closed_radii(f).back()));
        }
    }
    SUBCASE("agreement with the oracle and the argmax dichotomy") {
        Rng rng(53);
        for (int trial = 0; trial < 150; ++trial) {
            const Stratum s = trial % 3 == 0 ? Stratum::crith_plus : Stratum::any;
            const auto f = *sampling::sample_defect2(rng, s);
            const auto v = disk_classification(f);
            const auto r = kipp::detect_circles(f.matrix());
            if (r.disk == kipp::DiskClass::undetermined) continue;
            CHECK(v.disk == (r.disk == kipp::DiskClass::circular_disk));
            const auto w = kipp::numerical_radius(f.matrix());
            if (v.disk) {
                double largest = 0.0;
                for (const auto& c : r.circles) largest = std::max(largest, c.radius);
                CHECK(std::abs(w.value - largest) <= 1e-7);
            } else {
                bool real_argmax = true;
                for (double th : w.argmax_thetas)
                    real_argmax = real_argmax && (std::abs(th) <= 1e-6 || std::abs(std::abs(th) - kPi) <= 1e-6);
                bool above = true;
                for (const auto& c : r.circles) above = above && w.value > c.radius + 1e-9;
                CHECK((real_argmax || above));
            }
        }
    }
    SUBCASE("partial isometry entry point") {
        Rng rng(54);
        CHECK_FALSE(disk_classification(pisom::validate(sampling::sample_defect1(rng))).disk);
        CHECK_FALSE(disk_classification(pisom::validate(sampling::sample_defect0_rank2(rng))).disk);
        const auto f = two_circle_form(0.9, 0.3);
        CHECK(disk_classification(pisom::validate(sampling::disguise(rng, f.matrix()))).disk);
    }
}

TEST_CASE("derivative_margin") {
    const auto f = form(0.3, 0.4, std::sqrt(0.75), 0.5, -0.4, 0.6, std::sqrt(0.23));
    const double x = 0.5;
    const double want = 3 * x * x + 2 * f.h * f.h * x + f.h * f.h + f.e * f.e - f.d * f.d - 1.0 -
                        4 * f.h * x * std::sqrt(1.0 + x);
    CHECK(derivative_margin(f, x) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("nrc_half_shape") {
    SUBCASE("h = 0 is a disk with the closed radius") {
        Rng rng(55);
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::half_gh0);
            const auto s = nrc_half_shape(f);
            CHECK(s.shape == HalfShape::disk);
            const double be = f.b * f.e;
            CHECK(*s.radius == doctest::Approx(std::sqrt(1.0 + std::sqrt(1.0 - be * be)) / 2.0));
            CHECK(kipp::numerical_radius(f.matrix()).value == doctest::Approx(*s.radius).epsilon(1e-8));
        }
    }
    CHECK(nrc_half_shape(form(1, 0, 0, 0, 0, 0, 1)).shape == HalfShape::cone_to_one);
    CHECK(nrc_half_shape(form(1, 0, 0, 0.6, 0, 0, 0.8)).shape == HalfShape::cone_to_ellipse);
    CHECK(nrc_half_shape(form(1, 0, 0, 0.0, 0, 0.6, 0.8)).shape == HalfShape::ovular_carrier);
    CHECK(nrc_half_shape(form(1, 0, 0, 0.5, 0, 0.5, std::sqrt(0.5))).shape == HalfShape::ath_carrier);
    CHECK_THROWS_AS(nrc_half_shape(example_form("example1")), std::invalid_argument);

    SUBCASE("support functions") {
        for (int j = 0; j < 64; ++j) {
            const double th = 2.0 * kPi * j / 64.0;
            CHECK(kipp::support_value(form(1, 0, 0, 0, 0, 0, 1).matrix(), th) ==
                  doctest::Approx(std::max(0.5, std::cos(th))).epsilon(1e-9));
            const double h = 0.8;
            const double ell = h / 2.0 * std::cos(th) +
                               0.5 * std::sqrt(std::cos(th) * std::cos(th) + (1 - h * h) * std::sin(th) * std::sin(th));
            CHECK(kipp::support_value(form(1, 0, 0, 0.6, 0, 0, h).matrix(), th) ==
                  doctest::Approx(std::max(0.5, ell)).epsilon(1e-9));
        }
    }
}

TEST_CASE("ath_matrix") {
    const ComplexMatrix a = ath_matrix(0.6, 0.3);
    CHECK_NOTHROW((void)pisom::validate(a));
    CHECK(pisom::validate(a).rank == 2);
    CHECK(a(3, 3) == cplx(0.3));
    // radicand clamp on the boundary t^2 + h^2 = 1
    const ComplexMatrix edge = ath_matrix(0.6, 0.8);
    CHECK(edge(2, 3) == cplx(0.0));
    CHECK_NOTHROW((void)pisom::validate(edge));
}

TEST_CASE("interlacing") {
    SUBCASE("d = 0.98") {
        const auto r = interlacing_bound_check(two_circle_form(0.98, 0.1));
        CHECK(r.holds);
        CHECK(r.positive == 1);
        const std::vector<double> want{-1 - std::sqrt(1.98), -1 - std::sqrt(0.02), -1.0, -1 + std::sqrt(0.02),
                                       -1 + std::sqrt(1.98)};
        std::vector<double> w = want;
        std::sort(w.begin(), w.end());
        for (std::size_t i = 0; i < 5; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(w[i]).epsilon(1e-12));
    }
    SUBCASE("d close to 1") {
        const auto r = interlacing_bound_check(two_circle_form(1.0 - 1e-12, 0.1));
        CHECK(r.positive == 1);
        CHECK(r.eigenvalues.back() == doctest::Approx(-1 + std::sqrt(2.0)));
    }
    SUBCASE("closed form matches the explicit block") {
        Rng rng(56);
        for (int trial = 0; trial < 50; ++trial) {
            const auto f = *sampling::sample_defect2(rng, Stratum::two_circles);
            const auto r = interlacing_bound_check(f);
            const auto eig = linalg::hermitian_eigenvalues(interlacing_block(f));
            REQUIRE(eig.size() == 5);
            for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(eig[i] - r.eigenvalues[i]) <= 1e-9);
            CHECK(r.holds);
        }
    }
}

TEST_CASE("GWW centering on rank-3 partial isometries") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto r = kipp::detect_circles(pisom::random_rank3(seed));
        for (const auto& c : r.circles)
            if (std::abs(c.center) > 1e-6) FAIL("seed " << seed << " center " << c.center);
    }
}
