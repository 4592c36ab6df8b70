#include "kippen/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kippen::criteria {

namespace {

bool is_zero(double v, double tol) { return std::abs(v) <= tol; }

// Real roots of p in [0, 1) with a little slack below 0 for roundoff.
std::vector<linalg::Root> unit_roots(const RealPolynomial& p) {
    auto res = linalg::poly_real_roots(p, -1e-9, 1.0 - 1e-12);
    for (auto& r : res.roots) r.value = std::max(0.0, r.value);
    return res.roots;
}

}  // namespace

PQPair pq_from_form(const Defect2Form& f) {
    const double b2 = f.b * f.b;
    const double c2 = f.c * f.c;
    const double e2 = f.e * f.e;
    const double h = f.h;
    const double h2 = h * h;
    const double ceg = f.c * f.e * f.g;
    PQPair out;
    out.p.coeffs = {((b2 + c2) * h - ceg) / 16.0, -0.5 * h, h};
    out.q.coeffs = {-b2 * e2 / 64.0, (c2 + b2 + e2 + 1.0 - h2) / 16.0, -(3.0 - h2) / 4.0, 1.0};
    return out;
}

Defect2Circles circles_defect2(const Defect2Form& f, double tol) {
    const auto [p, q] = pq_from_form(f);
    Defect2Circles out;
    if (f.h > kZeroTol) {
        const double rad = f.d * f.d + f.c * f.e * f.g / f.h;
        out.x_undefined = rad < -kZeroTol;
    }
    if (p.max_abs_coeff() <= tol) {
        out.nilpotent_branch = true;
        for (const auto& r : unit_roots(q)) out.radii.push_back({std::sqrt(r.value), r.multiplicity});
        return out;
    }
    std::vector<double> accepted;
    // lambda = 0 only needs q(0) = 0; the p-term carries a factor lambda
    if (std::abs(q.coeffs.front()) <= tol) accepted.push_back(0.0);
    auto consider = [&](double rho) {
        if (rho <= 1e-6 || std::abs(p(rho)) > tol || std::abs(q(rho)) > tol) return;
        for (double a : accepted)
            if (std::abs(a - rho) <= 1e-6) return;
        accepted.push_back(rho);
    };
    for (const auto& r : unit_roots(q)) consider(r.value);
    for (const auto& r : unit_roots(p)) consider(r.value);
    std::sort(accepted.begin(), accepted.end());
    for (double rho : accepted) out.radii.push_back({std::sqrt(rho), 1});
    return out;
}

bool has_circle_half(const Defect2Form& f, double zero_tol) {
    return (is_zero(f.c, zero_tol) && is_zero(f.d, zero_tol)) || (is_zero(f.g, zero_tol) && is_zero(f.h, zero_tol));
}

ComplexMatrix ath_matrix(double t, double h) {
    ComplexMatrix m(4, 4);
    m(0, 2) = 1.0;
    m(1, 3) = t;
    const double rad = 1.0 - t * t - h * h;
    m(2, 3) = rad > 1e-14 ? std::sqrt(rad) : 0.0;  // roundoff on t^2 + h^2 = 1 would leave s ~ 1e-8
    m(3, 3) = h;
    return m;
}

J2Reduction reduce_J2(const Defect2Form& f, double zero_tol) {
    if (!has_circle_half(f, zero_tol)) throw std::invalid_argument("reduce_J2: no circle of radius 1/2");
    J2Reduction out;
    out.unitary = ComplexMatrix(6, 6);
    auto& u = out.unitary;
    if (is_zero(f.c, zero_tol) && is_zero(f.d, zero_tol)) {
        // b = 1. Rotate (f, g) onto one axis in coordinates 3,4 and mirror it in 0,1.
        const double s = std::hypot(f.f, f.g);
        const double cs = s > 0.0 ? f.g / s : 1.0;
        const double sn = s > 0.0 ? f.f / s : 0.0;
        // columns: e1' = cs e0 - sn e1, e4' = cs e3 - sn e4, e2' = sn e0 + cs e1, e2, e5' = sn e3 + cs e4, e5
        u(0, 0) = cs;
        u(1, 0) = -sn;
        u(3, 1) = cs;
        u(4, 1) = -sn;
        u(0, 2) = sn;
        u(1, 2) = cs;
        u(2, 3) = 1.0;
        u(3, 4) = sn;
        u(4, 4) = cs;
        u(5, 5) = 1.0;
        out.t = f.b * f.e;
        out.h = f.h;
        return out;
    }
    // g = h = 0 and d^2 + f^2 > 0
    const double r = std::hypot(f.d, f.f);
    const double rows[6][6] = {
        {0, 0, r, 0, 0, 0},
        {f.b * f.f, 0, 0, f.d * f.e - f.c * f.f, 0, 0},
        {f.c * f.f - f.d * f.e, 0, 0, f.b * f.f, 0, 0},
        {0, 0, 0, 0, r, 0},
        {0, f.f, 0, 0, 0, f.d},
        {0, -f.d, 0, 0, 0, f.f},
    };
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) u(i, j) = rows[i][j] / r;
    out.t = f.b * f.e;
    out.h = 0.0;
    return out;
}

std::optional<double> x_value(const Defect2Form& f, double zero_tol) {
    if (f.h <= zero_tol) throw std::invalid_argument("x_value: h must be nonzero");
    const double rad = f.d * f.d + f.c * f.e * f.g / f.h;
    if (rad < -zero_tol) return std::nullopt;
    return std::sqrt(std::max(0.0, rad));
}

CrithResult crith_conditions(const Defect2Form& f, double tol, double zero_tol) {
    if (f.h <= zero_tol) throw std::invalid_argument("crith_conditions: h must be nonzero");
    if (is_zero(f.c, zero_tol) && is_zero(f.d, zero_tol))
        throw std::invalid_argument("crith_conditions: c^2 + d^2 must be positive");
    const auto x = x_value(f, zero_tol);
    if (!x) throw std::invalid_argument("crith_conditions: x undefined");
    const double ceg = f.c * f.e * f.g;
    const double base = ceg * f.h - f.d * f.d * f.g * f.g;
    const double slope = f.e * f.e + f.h * f.h + ceg / f.h - 1.0;
    CrithResult out;
    out.x = *x;
    out.plus_residual = base + slope * out.x;
    out.minus_residual = base - slope * out.x;
    out.plus_holds = std::abs(out.plus_residual) <= tol && out.x <= 3.0;
    out.minus_holds = std::abs(out.minus_residual) <= tol && out.x <= 1.0 + tol;
    if (out.minus_holds) out.radii.push_back(std::sqrt(std::max(0.0, 1.0 - out.x)) / 2.0);
    if (out.plus_holds) out.radii.push_back(std::sqrt(1.0 + out.x) / 2.0);
    return out;
}

bool two_circles_classification(const Defect2Form& f, double zero_tol) {
    return f.h > zero_tol && is_zero(f.c, zero_tol) && is_zero(f.f, zero_tol) && is_zero(f.g, zero_tol) &&
           !is_zero(f.d, zero_tol) && !is_zero(f.d - 1.0, zero_tol);
}

double derivative_margin(const Defect2Form& f, double x) {
    const double h2 = f.h * f.h;
    const double lhs = 3.0 * x * x + 2.0 * h2 * x + h2 + f.e * f.e - f.d * f.d - 1.0;
    return lhs - 4.0 * f.h * x * std::sqrt(1.0 + x);
}

DiskVerdict disk_classification(const Defect2Form& f, double tol, double zero_tol) {
    const bool c0 = is_zero(f.c, zero_tol);
    const bool g0 = is_zero(f.g, zero_tol);
    if (f.h <= zero_tol) {
        if (c0 || is_zero(f.e, zero_tol) || g0) {
            const auto circles = circles_defect2(f, tol);
            double r3 = 0.0;
            for (const auto& r : circles.radii) r3 = std::max(r3, r.value);
            return {true, "nilpotent with ceg = 0", r3};
        }
        return {false, "nilpotent with ceg != 0", std::nullopt};
    }
    if (has_circle_half(f, zero_tol)) return {false, "contains C_{1/2}, not nilpotent", std::nullopt};
    if (c0 && g0) {
        if (f.d >= 2.0 * f.h + f.h * f.h) return {true, "c = g = 0, d >= 2h + h^2", std::sqrt(1.0 + f.d) / 2.0};
        return {false, "c = g = 0, d < 2h + h^2", std::nullopt};
    }
    if (c0 || g0) return {false, "cg = 0 without a circle other than C_{1/2}", std::nullopt};
    if (is_zero(f.d, zero_tol) || is_zero(f.e, zero_tol) || is_zero(f.f, zero_tol))
        return {false, "outside closed-form hypotheses", std::nullopt};
    const auto x = x_value(f, zero_tol);
    if (!x) return {false, "x undefined", std::nullopt};
    const auto crith = crith_conditions(f, tol, zero_tol);
    if (!crith.plus_holds) return {false, "crith+ fails", std::nullopt};
    if (derivative_margin(f, *x) > 0.0) return {true, "crith+ and derivative condition", std::sqrt(1.0 + *x) / 2.0};
    return {false, "crith+ holds, derivative condition fails", std::nullopt};
}

DiskVerdict disk_classification(const pisom::PartialIsometry& a, double tol) {
    const std::size_t def = pisom::defect(a);
    if (def == 0) return {false, "defect 0: no circles", std::nullopt};
    if (def == 1) return {false, "defect 1: at most C_{1/2}", std::nullopt};
    try {
        const auto canon = pisom::canonicalize_defect2(a);
        return disk_classification(canon.form, tol);
    } catch (const pisom::NotRealizable&) {
        return {false, "ce != 0 with non-real g: no circles", std::nullopt};
    }
}

std::string to_string(HalfShape s) {
    switch (s) {
        case HalfShape::disk: return "disk";
        case HalfShape::cone_to_one: return "cone(C_1/2,1)";
        case HalfShape::cone_to_ellipse: return "cone(C_1/2,E)";
        case HalfShape::ovular_carrier: return "ovular-carrier";
        case HalfShape::ath_carrier: return "A_eh-carrier";
    }
    return "?";
}

HalfShapeResult nrc_half_shape(const Defect2Form& f, double zero_tol) {
    if (!has_circle_half(f, zero_tol)) throw std::invalid_argument("nrc_half_shape: no circle of radius 1/2");
    if (f.h <= zero_tol) {
        const double be = f.b * f.e;
        return {HalfShape::disk, std::sqrt(1.0 + std::sqrt(std::max(0.0, 1.0 - be * be))) / 2.0};
    }
    if (is_zero(f.h - 1.0, zero_tol)) return {HalfShape::cone_to_one, std::nullopt};
    if (is_zero(f.e * f.e + f.h * f.h - 1.0, zero_tol)) return {HalfShape::cone_to_ellipse, std::nullopt};
    if (is_zero(f.e, zero_tol)) return {HalfShape::ovular_carrier, std::nullopt};
    return {HalfShape::ath_carrier, std::nullopt};
}

ComplexMatrix interlacing_block(const Defect2Form& f) {
    const ComplexMatrix a = f.matrix();
    ComplexMatrix m = a + a.transpose() - ComplexMatrix::identity(6);
    return m.block(0, 0, 5, 5);
}

InterlacingResult interlacing_bound_check(const Defect2Form& f) {
    const double sp = std::sqrt(1.0 + f.d);
    const double sm = std::sqrt(std::max(0.0, 1.0 - f.d));
    InterlacingResult out;
    out.eigenvalues = {-1.0, -1.0 + sp, -1.0 - sp, -1.0 + sm, -1.0 - sm};
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    for (double v : out.eigenvalues) {
        if (v < 0.0) ++out.negative;
        if (v > 0.0) ++out.positive;
    }
    out.holds = out.negative == 4 && out.positive == 1;
    return out;
}

std::vector<double> nilpotent_be0_radii(double b, double c, double e) {
    const double s = std::sqrt(std::max(0.0, 5.0 - 4.0 * (b * b + e * e + c * c)));
    return {0.0, 0.5 * std::sqrt((3.0 - s) / 2.0), 0.5 * std::sqrt((3.0 + s) / 2.0)};
}

}  // namespace kippen::criteria
