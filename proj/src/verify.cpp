#include "kippen/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kippen/criteria.hpp"
#include "kippen/document.hpp"
#include "kippen/kipp.hpp"
#include "kippen/matpoly.hpp"
#include "kippen/pisom.hpp"
#include "kippen/random.hpp"
#include "kippen/sampling.hpp"

namespace kippen::verify {

namespace {

using linalg::ComplexMatrix;
using linalg::cplx;
using pisom::Defect2Form;
using sampling::Stratum;
using json = nlohmann::ordered_json;

constexpr double kRadiusTol = 1e-6;
constexpr double kCenterTol = 1e-6;
// Residual reported when the two sides disagree combinatorially (different circle counts).
constexpr double kMismatch = 1.0;

struct Outcome {
    bool ok = true;
    double residual = 0.0;
    std::string witness;
};

// nullopt: the draw missed the hypothesis class and is rejected.
using Trial = std::function<std::optional<Outcome>(Rng&, TheoremReport&)>;

struct Check {
    std::string id;
    std::string claim;
    bool exploratory = false;
    Trial trial;
};

std::string form_witness(const Defect2Form& f) {
    return json{{"b", f.b}, {"c", f.c}, {"d", f.d}, {"e", f.e}, {"f", f.f}, {"g", f.g}, {"h", f.h}}.dump();
}

std::string matrix_witness(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return json{{"n", m.rows()}, {"entries", std::move(rows)}}.dump();
}

Defect2Form draw(Rng& rng, Stratum s) {
    auto f = sampling::sample_defect2(rng, s);
    if (!f) throw std::runtime_error("sampling exhausted for stratum " + sampling::to_string(s));
    return *f;
}

std::vector<double> merged(std::vector<double> v, double tol = kRadiusTol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    return out;
}

double set_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return kMismatch;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

struct OracleCircles {
    std::vector<double> radii;  // distinct, ascending, degenerate circle as 0
    double max_center = 0.0;
    kipp::DiskClass disk = kipp::DiskClass::non_disk;
    double numerical_radius = 0.0;

    bool has(double r) const {
        return std::any_of(radii.begin(), radii.end(), [&](double x) { return std::abs(x - r) <= kRadiusTol; });
    }
    std::size_t nondegenerate_other_than_half() const {
        return static_cast<std::size_t>(std::count_if(radii.begin(), radii.end(), [](double x) {
            return x > kRadiusTol && std::abs(x - 0.5) > kRadiusTol;
        }));
    }
};

OracleCircles oracle(const ComplexMatrix& a) {
    const auto rep = kipp::detect_circles(a);
    OracleCircles out;
    std::vector<double> r;
    for (const auto& c : rep.circles) {
        r.push_back(c.degenerate ? 0.0 : c.radius);
        out.max_center = std::max(out.max_center, std::abs(c.center));
    }
    out.radii = merged(std::move(r));
    out.disk = rep.disk;
    out.numerical_radius = rep.numerical_radius;
    return out;
}

std::vector<double> closed_radii(const Defect2Form& f) {
    std::vector<double> r;
    for (const auto& root : criteria::circles_defect2(f).radii) r.push_back(root.value);
    return merged(std::move(r));
}

void bump(TheoremReport& rep, const std::string& key, double by = 1.0) { rep.counters[key] += by; }

Defect2Form draw_half(Rng& rng) { return draw(rng, rng.uniform() < 0.5 ? Stratum::half_cd0 : Stratum::half_gh0); }

ComplexMatrix j2() { return ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}; }

// ---- individual checks ----

std::optional<Outcome> gww_rank3(Rng& rng, TheoremReport& rep) {
    ComplexMatrix a;
    switch (rng.index(3)) {
        case 0: a = pisom::random_rank3(rng.bits()); break;
        case 1: a = sampling::disguise(rng, draw(rng, Stratum::any).matrix()); break;
        default: a = sampling::disguise(rng, sampling::sample_defect1(rng)); break;
    }
    const auto o = oracle(a);
    if (!o.radii.empty()) bump(rep, "with_circles");
    return Outcome{o.max_center <= kCenterTol, o.max_center, matrix_witness(a)};
}

std::optional<Outcome> thm_5_1(Rng& rng, TheoremReport& rep) {
    ComplexMatrix a;
    const bool with_j2 = rng.uniform() < 0.5;
    if (with_j2) {
        a = sampling::disguise(rng, linalg::direct_sum(j2(), sampling::sample_defect0_rank2(rng)));
    } else {
        a = sampling::disguise(rng, sampling::sample_defect1(rng));
    }
    const auto pi = pisom::validate(a);
    if (pisom::defect(pi) != 1) return Outcome{false, kMismatch, matrix_witness(a)};
    const auto o = oracle(a);
    double residual = o.max_center;
    bool ok = o.radii.size() <= 1 && o.max_center <= kCenterTol;
    if (!o.radii.empty()) {
        bump(rep, "with_circle");
        residual = std::max(residual, std::abs(o.radii.front() - 0.5));
        ok = ok && std::abs(o.radii.front() - 0.5) <= kRadiusTol;
    }
    if (with_j2) ok = ok && o.radii.size() == 1;
    return Outcome{ok, residual, matrix_witness(a)};
}

std::optional<Outcome> thm_5_2(Rng& rng, TheoremReport& rep) {
    const Defect2Form f = draw(rng, Stratum::any);
    const ComplexMatrix a = sampling::disguise(rng, f.matrix());
    const bool predicted = f.b * f.e == 0.0;
    const bool found = kipp::contains_point_circle(a);
    if (predicted) bump(rep, "be_zero");
    return Outcome{predicted == found, kipp::divisibility_residual(a, 0.0, 0.0) * (predicted ? 1.0 : 0.0),
                   form_witness(f)};
}

std::optional<Outcome> thm_5_3(Rng& rng, TheoremReport&) {
    const Defect2Form f = draw(rng, Stratum::any);
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    const double dist = std::max(set_distance(closed_radii(f), o.radii), o.max_center);
    return Outcome{dist <= kRadiusTol, dist, form_witness(f)};
}

std::optional<Outcome> thm_6_1(Rng& rng, TheoremReport& rep) {
    const Defect2Form f = draw(rng, Stratum::nilpotent);
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    const bool ceg0 = f.c * f.e * f.g == 0.0;
    const bool nontrivial = std::any_of(o.radii.begin(), o.radii.end(), [](double r) { return r > kRadiusTol; });
    bool ok = nontrivial == ceg0 && o.has(0.0) == (f.b * f.e == 0.0);
    double residual = 0.0;
    if (ceg0) {
        bump(rep, "ceg_zero");
        const auto circles = criteria::circles_defect2(f);
        int total = 0;
        for (const auto& r : circles.radii) total += r.multiplicity;
        residual = set_distance(closed_radii(f), o.radii);
        ok = ok && total == 3 && residual <= kRadiusTol;
    }
    return Outcome{ok, residual, form_witness(f)};
}

std::optional<Outcome> prop_6_1(Rng& rng, TheoremReport& rep) {
    const Defect2Form f = draw(rng, Stratum::nilpotent_ceg0);
    std::vector<double> r;
    for (const auto& root : criteria::circles_defect2(f).radii)
        for (int k = 0; k < root.multiplicity; ++k) r.push_back(root.value);
    if (r.size() != 3) return Outcome{false, kMismatch, form_witness(f)};
    std::sort(r.begin(), r.end());
    const double b2 = f.b * f.b, e2 = f.e * f.e;
    const auto [p, q] = criteria::pq_from_form(f);
    double residual = std::abs(q(0.25) + f.d * f.d * f.g * f.g / 64.0);
    residual = std::max(residual, std::abs(b2 + f.c * f.c + e2 + f.d * f.d * f.g * f.g - 1.0 - b2 * e2));
    if (f.g == 0.0) residual = std::max(residual, std::abs(b2 * e2 + f.d * f.d + f.f * f.f - 1.0));
    const bool middle_half = std::abs(r[1] - 0.5) <= 1e-7;
    const bool predicted_half = f.g == 0.0 || (f.c == 0.0 && f.d == 0.0);
    if (predicted_half) bump(rep, "r2_half");
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    const double dist = set_distance(merged(r), o.radii);
    const bool ok = r[0] <= 0.5 + 1e-12 && r[2] >= 0.5 - 1e-12 && middle_half == predicted_half && residual <= 1e-12 &&
                    dist <= kRadiusTol;
    return Outcome{ok, std::max(residual, dist), form_witness(f)};
}

std::optional<Outcome> cor_6_1(Rng& rng, TheoremReport&) {
    const Defect2Form f = draw(rng, Stratum::nilpotent_be0);
    const auto predicted = merged(criteria::nilpotent_be0_radii(f.b, f.c, f.e));
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    const double dist = std::max(set_distance(predicted, o.radii), set_distance(predicted, closed_radii(f)));
    return Outcome{dist <= kRadiusTol, dist, form_witness(f)};
}

std::optional<Outcome> thm_7_1(Rng& rng, TheoremReport& rep) {
    // alternate directions so both get the same number of samples
    const bool half_side = rep.trials % 2 == 0;
    const Defect2Form f = half_side ? draw_half(rng) : draw(rng, Stratum::no_half);
    const ComplexMatrix a = sampling::disguise(rng, f.matrix());
    const bool predicted = criteria::has_circle_half(f);
    const bool divisible = kipp::contains_circle(a, 0.0, 0.5, 1e-7);
    const auto o = oracle(a);
    bump(rep, predicted ? "half_direction" : "no_half_direction");
    return Outcome{predicted == divisible && predicted == o.has(0.5), kipp::divisibility_residual(a, 0.0, 0.5),
                   form_witness(f)};
}

std::optional<Outcome> prop_7_1(Rng& rng, TheoremReport&) {
    const Defect2Form f = draw_half(rng);
    const auto red = criteria::reduce_J2(f);
    const ComplexMatrix m = red.unitary.adjoint() * f.matrix() * red.unitary;
    const ComplexMatrix target = linalg::direct_sum(j2(), criteria::ath_matrix(red.t, red.h));
    double residual = (m - target).max_abs();
    residual = std::max(residual, (red.unitary.adjoint() * red.unitary - ComplexMatrix::identity(6)).max_abs());
    residual = std::max(residual, std::abs(red.t - f.b * f.e));
    return Outcome{residual <= 1e-10, residual, form_witness(f)};
}

std::optional<Outcome> prop_7_2(Rng& rng, TheoremReport& rep) {
    double t = 0.0, h = 0.0;
    switch (rng.index(5)) {
        case 0: t = 0.0; h = rng.uniform(0.0, 1.0); break;
        case 1: t = 1.0; h = 0.0; break;
        case 2: t = rng.uniform(0.05, 0.95); h = std::sqrt(1.0 - t * t); break;
        case 3: t = rng.uniform(0.05, 0.95); h = 0.0; break;
        default: t = rng.uniform(0.05, 0.95); h = rng.uniform(0.0, 0.95) * std::sqrt(1.0 - t * t); break;
    }
    const bool predicted = !(t == 0.0 || t == 1.0 || std::abs(t * t + h * h - 1.0) <= 1e-12);
    const ComplexMatrix m = criteria::ath_matrix(t, h);
    const auto pi = pisom::validate(m);
    const bool irreducible = pisom::is_unitarily_irreducible(sampling::disguise(rng, m, false));
    const bool block = pisom::is_unitarily_irreducible_blockform(pi.block.b, pi.block.c);
    if (predicted) bump(rep, "irreducible");
    const json w{{"t", t}, {"h", h}};
    return Outcome{irreducible == predicted && block == predicted, 0.0, w.dump()};
}

std::optional<Outcome> prop_7_3(Rng& rng, TheoremReport&) {
    Defect2Form f = draw(rng, Stratum::half_gh0);
    if (rng.uniform() < 0.5) {
        f = draw(rng, Stratum::half_cd0);
        if (f.h != 0.0) return std::nullopt;
    }
    const double be = f.b * f.e;
    const double root = std::sqrt(1.0 - be * be);
    const std::vector<double> predicted =
        merged({std::sqrt(1.0 - root) / 2.0, 0.5, std::sqrt(1.0 + root) / 2.0});
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    double residual = set_distance(predicted, o.radii);
    const double t = rng.uniform(0.0, 1.0);
    const double w_closed = std::sqrt(1.0 + std::sqrt(1.0 - t * t)) / 2.0;
    const double w_num = kipp::numerical_radius(criteria::ath_matrix(t, 0.0)).value;
    const bool ok = residual <= kRadiusTol && std::abs(w_closed - w_num) <= 1e-9;
    residual = std::max(residual, std::abs(w_closed - w_num));
    return Outcome{ok, residual, form_witness(f)};
}

double ellipse_support(double h, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return 0.5 * h * c + 0.5 * std::sqrt(c * c + (1.0 - h * h) * s * s);
}

std::optional<Outcome> thm_7_2(Rng& rng, TheoremReport& rep) {
    const Defect2Form f = draw_half(rng);
    const auto shape = criteria::nrc_half_shape(f);
    bump(rep, "shape:" + criteria::to_string(shape.shape));
    const ComplexMatrix a = sampling::disguise(rng, f.matrix(), false);
    const ComplexMatrix carrier = criteria::ath_matrix(f.b * f.e, f.h);
    constexpr int kGrid = 64;
    double residual = 0.0;
    for (int j = 0; j < kGrid; ++j) {
        const double th = 2.0 * std::numbers::pi * j / kGrid;
        double predicted = 0.0;
        switch (shape.shape) {
            case criteria::HalfShape::disk: predicted = *shape.radius; break;
            case criteria::HalfShape::cone_to_one: predicted = std::max(0.5, std::cos(th)); break;
            case criteria::HalfShape::cone_to_ellipse: predicted = std::max(0.5, ellipse_support(f.h, th)); break;
            case criteria::HalfShape::ovular_carrier:
            case criteria::HalfShape::ath_carrier: predicted = kipp::support_value(carrier, th); break;
        }
        residual = std::max(residual, std::abs(kipp::support_value(a, th) - predicted));
    }
    return Outcome{residual <= 1e-9, residual, form_witness(f)};
}

std::optional<Outcome> cor_7_1(Rng& rng, TheoremReport& rep) {
    const Defect2Form f = draw_half(rng);
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    const bool predicted = f.h == 0.0;
    if (o.disk == kipp::DiskClass::undetermined) bump(rep, "oracle_undetermined");
    const bool disk = o.disk == kipp::DiskClass::circular_disk;
    return Outcome{o.disk != kipp::DiskClass::undetermined && disk == predicted, 0.0, form_witness(f)};
}

std::optional<Outcome> prop_8_1(Rng& rng, TheoremReport& rep) {
    static constexpr Stratum kMix[] = {Stratum::general, Stratum::crith_plus, Stratum::cg0, Stratum::two_circles,
                                       Stratum::no_half};
    const Defect2Form f = draw(rng, kMix[rng.index(std::size(kMix))]);
    if (f.h <= criteria::kZeroTol || (f.c == 0.0 && f.d == 0.0) || !criteria::x_value(f)) return std::nullopt;
    const auto crith = criteria::crith_conditions(f);
    std::vector<double> predicted = crith.radii;
    if (f.b * f.e == 0.0) predicted.push_back(0.0);
    predicted = merged(std::move(predicted));
    if (crith.plus_holds) bump(rep, "crith_plus");
    if (crith.minus_holds) bump(rep, "crith_minus");
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    const double dist = std::max(set_distance(predicted, o.radii), set_distance(predicted, closed_radii(f)));
    return Outcome{dist <= kRadiusTol, dist, form_witness(f)};
}

std::optional<Outcome> thm_8_1(Rng& rng, TheoremReport& rep) {
    const Defect2Form f = draw(rng, Stratum::cg0);
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    const bool predicted = f.d != 0.0 && f.c == 0.0 && f.g == 0.0;
    const bool found = o.nondegenerate_other_than_half() > 0;
    bool ok = predicted == found;
    double residual = 0.0;
    if (predicted) {
        bump(rep, "c_g_zero");
        std::vector<double> expect = {std::sqrt(1.0 + f.d) / 2.0};
        if (f.d < 1.0) expect.push_back(std::sqrt(1.0 - f.d) / 2.0);
        std::vector<double> got;
        for (double r : o.radii)
            if (r > kRadiusTol && std::abs(r - 0.5) > kRadiusTol) got.push_back(r);
        residual = set_distance(merged(expect), got);
        ok = ok && residual <= kRadiusTol;
    }
    return Outcome{ok, residual, form_witness(f)};
}

std::optional<Outcome> cor_8_1(Rng& rng, TheoremReport& rep) {
    const Defect2Form f = draw(rng, Stratum::cg0_c_g_zero);
    const double margin = f.d - 2.0 * f.h - f.h * f.h;
    if (std::abs(margin) < 1e-3) return std::nullopt;
    const bool predicted = margin >= 0.0;
    if (predicted) bump(rep, "disk");
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    if (o.disk == kipp::DiskClass::undetermined) bump(rep, "oracle_undetermined");
    const bool ok = (o.disk == kipp::DiskClass::circular_disk) == predicted &&
                    o.disk != kipp::DiskClass::undetermined && criteria::disk_classification(f).disk == predicted;
    return Outcome{ok, 0.0, form_witness(f)};
}

std::optional<Outcome> thm_8_2(Rng& rng, TheoremReport& rep) {
    static constexpr Stratum kNegative[] = {Stratum::general, Stratum::cg0, Stratum::crith_plus, Stratum::no_half};
    const Defect2Form f =
        rep.trials % 2 == 0 ? draw(rng, Stratum::two_circles) : draw(rng, kNegative[rng.index(std::size(kNegative))]);
    const bool predicted = criteria::two_circles_classification(f);
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    bool ok = predicted == (o.nondegenerate_other_than_half() == 2);
    double residual = 0.0;
    if (predicted) {
        bump(rep, "two_circles");
        const std::vector<double> radii = {std::sqrt(1.0 - f.d) / 2.0, std::sqrt(1.0 + f.d) / 2.0};
        residual = set_distance(merged(radii), o.radii);
        try {
            const auto e = recover_ellipse(f.matrix(), radii);
            const auto [lo, hi] = std::minmax(e.foci[0], e.foci[1], [](cplx x, cplx y) { return x.real() < y.real(); });
            residual = std::max({residual, std::abs(lo), std::abs(hi - f.h), std::abs(e.semi_major - 0.5)});
            ok = ok && std::abs(lo) <= 1e-3 && std::abs(hi - f.h) <= 1e-3 && std::abs(e.semi_major - 0.5) <= 1e-3;
        } catch (const std::exception&) {
            ok = false;
            residual = kMismatch;
        }
        ok = ok && set_distance(merged(radii), o.radii) <= kRadiusTol;
    }
    return Outcome{ok, residual, form_witness(f)};
}

std::optional<Outcome> thm_8_3(Rng& rng, TheoremReport& rep) {
    const Defect2Form f = draw(rng, Stratum::crith_plus);
    const auto verdict = criteria::disk_classification(f);
    const auto x = criteria::x_value(f);
    bump(rep, "crith_plus_holds", criteria::crith_conditions(f).plus_holds ? 1.0 : 0.0);
    bump(rep, criteria::derivative_margin(f, *x) > 0.0 ? "dercond_true" : "dercond_false");
    const auto o = oracle(sampling::disguise(rng, f.matrix()));
    if (o.disk == kipp::DiskClass::undetermined) bump(rep, "oracle_undetermined");
    const bool agree = o.disk != kipp::DiskClass::undetermined && (o.disk == kipp::DiskClass::circular_disk) == verdict.disk;
    if (agree) bump(rep, "agreement");
    double residual = 0.0;
    if (verdict.disk && verdict.radius) residual = std::abs(o.numerical_radius - *verdict.radius);
    return Outcome{agree, residual, form_witness(f)};
}

std::optional<Outcome> thm_3_1(Rng& rng, TheoremReport& rep) {
    const std::size_t n = 4 + rng.index(5);
    const std::size_t k = 2 + rng.index(n - 2);
    ComplexMatrix a;
    if (rng.uniform() < 0.5) {
        if (k - 1 > n - 2) return std::nullopt;
        a = sampling::disguise(rng, linalg::direct_sum(j2(), pisom::random_partial_isometry(rng, n - 2, k - 1)));
    } else {
        a = pisom::random_partial_isometry(rng, n, k);
    }
    const auto pi = pisom::validate(a);
    const auto check = matpoly::check_theorem31(pi);
    const bool kipp_half = kipp::contains_circle(a, 0.0, 0.5);
    if (check.hypothesis_holds) bump(rep, "hypothesis");
    if (check.contains_c_half) bump(rep, "contains_c_half");
    if (check.hypothesis_holds && check.contains_c_half) bump(rep, "nontrivial");
    if (kipp_half != check.contains_c_half) bump(rep, "criterion_disagreement");
    return Outcome{check.implication_holds && kipp_half == check.contains_c_half, 0.0, matrix_witness(a)};
}

std::optional<Outcome> prop_3_1(Rng& rng, TheoremReport& rep) {
    const std::size_t n = 2 + rng.index(5);
    ComplexMatrix c = ginibre(rng, n, n);
    if (rng.uniform() < 0.4) {
        // force a common kernel vector of C and C*
        const ComplexMatrix v = haar_unitary(rng, n).block(0, 0, n, 1);
        const ComplexMatrix p = ComplexMatrix::identity(n) - v * v.adjoint();
        c = p * c * p;
    } else if (rng.uniform() < 0.3) {
        c = c * ComplexMatrix::identity(n).block(0, 0, n, n - 1) * ginibre(rng, n - 1, n);  // singular only
    }
    const auto check = matpoly::check_prop31(c);
    if (check.flipped_singular) bump(rep, "flipped_singular");
    const double res = check.flipped_singular
                           ? matpoly::probe_singularity(matpoly::flipped_polynomial(c)).max_relative_det
                           : 0.0;
    return Outcome{check.implication_holds, res, matrix_witness(c)};
}

std::optional<Outcome> thm_3_2(Rng& rng, TheoremReport& rep) {
    if (rng.uniform() < 0.5) {
        const std::size_t m = 1 + rng.index(3);
        const std::size_t zeros = rng.index(3);
        ComplexMatrix a = j2();
        for (std::size_t i = 1; i < m; ++i) a = linalg::direct_sum(a, j2());
        if (zeros > 0) a = linalg::direct_sum(a, ComplexMatrix(zeros, zeros));
        a = sampling::disguise(rng, a);
        const double w = kipp::numerical_radius(a).value;
        const auto pi = pisom::validate(a);
        // P_A = (-1)^n (lambda^2 - 1/4)^m lambda^zeros
        const auto poly = kipp::kippenhahn_polynomial(a);
        double residual = std::abs(w - 0.5);
        for (double lam : {-0.7, -0.2, 0.1, 0.45, 0.9})
            for (double th : {0.0, 1.1, 2.3, 4.0}) {
                const double sign = a.rows() % 2 == 0 ? 1.0 : -1.0;
                const double expect = sign * std::pow(lam * lam - 0.25, static_cast<double>(m)) *
                                      std::pow(lam, static_cast<double>(zeros));
                residual = std::max(residual, std::abs(poly(lam, th) - expect));
            }
        bump(rep, "direct_sums");
        const bool ok = residual <= 1e-9 && pi.rank == m && (a * a).max_abs() <= 1e-12;
        return Outcome{ok, residual, matrix_witness(a)};
    }
    const std::size_t n = 3 + rng.index(5);
    const std::size_t k = 1 + rng.index(n - 1);
    const ComplexMatrix a = pisom::random_partial_isometry(rng, n, k);
    const double w = kipp::numerical_radius(a).value;
    const bool half = std::abs(w - 0.5) < 1e-9;
    const bool square_zero = (a * a).max_abs() <= 1e-9;
    if (half) bump(rep, "random_at_half");
    return Outcome{half == square_zero && w >= 0.5 - 1e-12, half ? (a * a).max_abs() : 0.0, matrix_witness(a)};
}

std::optional<Outcome> gww_rank4_n6(Rng& rng, TheoremReport& rep) {
    ComplexMatrix a;
    if (rng.uniform() < 0.5) {
        a = pisom::random_partial_isometry(rng, 6, 4);
    } else {
        a = sampling::disguise(rng, linalg::direct_sum(j2(), pisom::random_partial_isometry(rng, 4, 3)));
    }
    const auto o = oracle(a);
    if (!o.radii.empty()) bump(rep, "with_circles");
    return Outcome{o.max_center <= kCenterTol, o.max_center, matrix_witness(a)};
}

const std::vector<Check>& checks() {
    static const std::vector<Check> table = {
        {"gww-rank3", "circles of rank-3 6x6 partial isometries are centered at 0", false, gww_rank3},
        {"thm-5-1", "defect one: at most one circle, of radius 1/2", false, thm_5_1},
        {"thm-5-2", "{0} is a component iff be = 0", false, thm_5_2},
        {"thm-5-3", "circle radii are the common roots of p and q", false, thm_5_3},
        {"thm-6-1", "nilpotent: nontrivial circles iff ceg = 0, then three concentric", false, thm_6_1},
        {"prop-6-1", "r1 <= 1/2 <= r3; r2 = 1/2 iff g = 0 or c = d = 0; identities", false, prop_6_1},
        {"cor-6-1", "be = 0 nilpotent radii formula", false, cor_6_1},
        {"thm-7-1", "C_1/2 contained iff c = d = 0 or g = h = 0", false, thm_7_1},
        {"prop-7-1", "J2 plus A_{be,h} reduction", false, prop_7_1},
        {"prop-7-2", "A_{t,h} irreducible iff t not in {0,1} and t^2 + h^2 != 1", false, prop_7_2},
        {"prop-7-3", "h = 0: radii r1, 1/2, r3 and w(A_{t,0})", false, prop_7_3},
        {"thm-7-2", "shape of W(A) when C_1/2 is contained", false, thm_7_2},
        {"cor-7-1", "with C_1/2 contained, W(A) is a disk iff nilpotent", false, cor_7_1},
        {"prop-8-1", "circles for h != 0 are given by crith+ and crith-", false, prop_8_1},
        {"thm-8-1", "cg = 0: a circle other than C_1/2 iff d != 0, c = g = 0", false, thm_8_1},
        {"cor-8-1", "c = g = 0: disk iff d >= 2h + h^2", false, cor_8_1},
        {"thm-8-2", "two circles and an ellipse iff c = f = g = 0, d not in {0,1}", false, thm_8_2},
        {"thm-8-3", "crith+ instances: disk iff derivative condition", false, thm_8_3},
        {"thm-3-1", "dim ker C >= k/2 and C_1/2 contained imply J2 reducing", false, thm_3_1},
        {"prop-3-1", "flipped polynomial singular implies ker C and ker C* meet", false, prop_3_1},
        {"thm-3-2", "w = 1/2 iff A is a direct sum of J2 blocks and zeros", false, thm_3_2},
        {"gww-rank4-n6", "rank-4 6x6 circle centers (open case)", true, gww_rank4_n6},
    };
    return table;
}

TheoremReport run_check(const Check& check, std::size_t index, std::uint64_t seed, std::size_t trials) {
    TheoremReport rep;
    rep.id = check.id;
    rep.claim = check.claim;
    rep.exploratory = check.exploratory;
    const std::size_t cap = 50 * trials + 100;
    for (std::size_t attempt = 0; rep.trials < trials && attempt < cap; ++attempt) {
        Rng rng(derive_seed(seed, index, attempt));
        std::optional<Outcome> out;
        try {
            out = check.trial(rng, rep);
        } catch (const std::exception& e) {
            out = Outcome{false, kMismatch, json{{"error", e.what()}}.dump()};
        }
        if (!out) {
            ++rep.rejected;
            continue;
        }
        ++rep.trials;
        if (std::isfinite(out->residual)) rep.worst_residual = std::max(rep.worst_residual, out->residual);
        if (!out->ok) {
            ++rep.failures;
            if (rep.witnesses.size() < 5) rep.witnesses.push_back(out->witness);
        }
    }
    if (rep.trials < trials) {
        ++rep.failures;
        rep.counters["sampling_exhausted"] = 1.0;
    }
    return rep;
}

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::vector<std::string> theorem_ids() {
    std::vector<std::string> ids;
    for (const auto& c : checks()) ids.push_back(c.id);
    return ids;
}

TheoremReport run_theorem(const std::string& id, std::uint64_t seed, std::size_t trials) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    const auto& table = checks();
    for (std::size_t i = 0; i < table.size(); ++i)
        if (table[i].id == id) return run_check(table[i], i, seed, trials);
    throw std::invalid_argument("unknown theorem id: " + id);
}

std::vector<TheoremReport> run_suite(std::uint64_t seed, std::size_t trials, const std::optional<std::string>& only) {
    if (only) return {run_theorem(*only, seed, trials)};
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    std::vector<TheoremReport> out;
    const auto& table = checks();
    for (std::size_t i = 0; i < table.size(); ++i) out.push_back(run_check(table[i], i, seed, trials));
    return out;
}

std::size_t total_failures(const std::vector<TheoremReport>& reports) {
    std::size_t n = 0;
    for (const auto& r : reports)
        if (!r.exploratory) n += r.failures;
    return n;
}

std::string report_json(std::uint64_t seed, const std::vector<TheoremReport>& reports) {
    json theorems = json::array();
    for (const auto& r : reports) {
        json witnesses = json::array();
        for (const auto& w : r.witnesses) witnesses.push_back(json::parse(w));
        json counters = json::object();
        for (const auto& [k, v] : r.counters) counters[k] = v;
        const std::size_t drawn = r.trials + r.rejected;
        theorems.push_back({{"theoremId", r.id},
                            {"claim", r.claim},
                            {"exploratory", r.exploratory},
                            {"trials", r.trials},
                            {"failures", r.failures},
                            {"worstResidual", r.worst_residual},
                            {"rejected", r.rejected},
                            {"acceptanceRate", drawn ? static_cast<double>(r.trials) / static_cast<double>(drawn) : 0.0},
                            {"counters", std::move(counters)},
                            {"witnesses", std::move(witnesses)}});
    }
    json doc{{"seed", seed}, {"failures", total_failures(reports)}, {"theorems", std::move(theorems)}};
    return doc.dump(2) + "\n";
}

std::string report_table(const std::vector<TheoremReport>& reports) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-14s %7s %8s %8s %12s  %s\n", "theorem", "trials", "failures", "rejected",
                  "worst", "status");
    os << line;
    for (const auto& r : reports) {
        const char* status = r.exploratory ? "exploratory" : (r.failures == 0 ? "ok" : "FAIL");
        std::snprintf(line, sizeof line, "%-14s %7zu %8zu %8zu %12.3e  %s\n", r.id.c_str(), r.trials, r.failures,
                      r.rejected, r.worst_residual, status);
        os << line;
        for (const auto& [k, v] : r.counters) os << "    " << k << " = " << v << "\n";
    }
    return os.str();
}

bool PaperExamplesReport::all_pass() const {
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ExampleRow& r) { return r.pass; });
}

geometry::Ellipse recover_ellipse(const ComplexMatrix& a, std::span<const double> circle_radii, std::size_t steps) {
    const auto pts = kipp::trace_curve(a, steps);
    const std::size_t n = a.rows();
    std::vector<geometry::Point> keep;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        const bool on_circle = std::any_of(circle_radii.begin(), circle_radii.end(),
                                           [&](double r) { return std::abs(std::abs(p.z) - r) <= 1e-6; });
        if (on_circle) continue;
        // eigenvectors at a crossing are arbitrary mixtures; skip them
        const std::size_t base = i - p.branch;
        bool crossing = false;
        for (std::size_t j = 0; j < n; ++j)
            if (j != p.branch && std::abs(pts[base + j].lambda - p.lambda) <= 1e-6) crossing = true;
        if (!crossing) keep.push_back(p.z);
    }
    return geometry::fit_ellipse(keep);
}

PaperExamplesReport reproduce_paper_examples(const std::filesystem::path& data_dir) {
    PaperExamplesReport report;
    auto row = [&](std::string name, std::string quantity, std::string expected, std::string computed, bool pass) {
        report.rows.push_back({std::move(name), std::move(quantity), std::move(expected), std::move(computed), pass});
    };

    struct Prepared {
        ComplexMatrix matrix;
        kipp::CircleReport circles;
    };
    auto prepare = [&](const std::string& name) -> std::optional<Prepared> {
        try {
            const auto doc = io::load_document(data_dir / (name + ".json"));
            const ComplexMatrix m = pisom::project_to_partial_isometry(doc.matrix);
            const bool changed = (m - doc.matrix).max_abs() > 1e-10;
            const auto opts = changed ? kipp::DetectOptions::rounded() : kipp::DetectOptions{};
            return Prepared{m, kipp::detect_circles(m, opts)};
        } catch (const std::exception& e) {
            row(name, "load", "valid document", e.what(), false);
            return std::nullopt;
        }
    };
    auto nondegenerate = [](const kipp::CircleReport& rep) {
        std::vector<double> r;
        for (const auto& c : rep.circles)
            if (!c.degenerate) r.push_back(c.radius);
        return r;
    };
    auto radius_rows = [&](const std::string& name, const std::vector<double>& radii, double expected) {
        row(name, "circles", "1", std::to_string(radii.size()), radii.size() == 1);
        const bool near = radii.size() == 1 && std::abs(radii.front() - expected) <= kPaperTol;
        row(name, "radius", fixed(expected, 2) + " +- 0.005", radii.empty() ? "none" : fixed(radii.front()), near);
    };

    if (auto ex = prepare("example1")) {
        const auto radii = nondegenerate(ex->circles);
        radius_rows("example1", radii, 0.48);
        const double w = ex->circles.numerical_radius;
        const bool inner = radii.size() == 1 && radii.front() < w - kPaperTol;
        row("example1", "component", "not outer", "r " + (radii.empty() ? std::string("-") : fixed(radii.front())) +
                                                      " < w " + fixed(w),
            inner);
    }
    if (auto ex = prepare("example2")) {
        const auto radii = nondegenerate(ex->circles);
        radius_rows("example2", radii, 0.41);
        // positive eigenvalue levels form three nested components; the circle is the middle one
        std::vector<kipp::BranchRange> positive;
        for (const auto& b : kipp::branch_ranges(ex->matrix, 720))
            if (b.min > 0.0) positive.push_back(b);
        bool middle = false;
        std::string levels;
        for (const auto& b : positive) levels += "[" + fixed(b.min, 3) + "," + fixed(b.max, 3) + "]";
        if (radii.size() == 1 && positive.size() == 3) {
            const double r = radii.front();
            middle = positive[0].max < r - 1e-3 && std::abs(positive[1].min - r) <= 1e-3 &&
                     std::abs(positive[1].max - r) <= 1e-3 && positive[2].min > r + 1e-3;
        }
        row("example2", "component", "intermediate of three", levels, middle);
    }
    if (auto ex = prepare("example3")) {
        const auto radii = nondegenerate(ex->circles);
        radius_rows("example3", radii, 0.73);
        row("example3", "disk", "circular-disk", kipp::to_string(ex->circles.disk),
            ex->circles.disk == kipp::DiskClass::circular_disk);
    }
    const double d = std::sqrt(0.96);
    const std::vector<double> expected = {std::sqrt(1.0 - d) / 2.0, std::sqrt(1.0 + d) / 2.0};
    for (const auto& [name, disk] : {std::pair{"figure1", false}, std::pair{"figure2", false}, std::pair{"figure3", true}}) {
        auto fig = prepare(name);
        if (!fig) continue;
        const auto radii = merged(nondegenerate(fig->circles));
        const double dist = set_distance(expected, radii);
        std::string got;
        for (double r : radii) got += (got.empty() ? "" : " ") + fixed(r);
        row(name, "radii", fixed(expected[0]) + " " + fixed(expected[1]), got, dist <= kRadiusTol);
        row(name, "disk", disk ? "circular-disk" : "non-disk", kipp::to_string(fig->circles.disk),
            (fig->circles.disk == kipp::DiskClass::circular_disk) == disk &&
                fig->circles.disk != kipp::DiskClass::undetermined);
    }
    return report;
}

std::string examples_table(const PaperExamplesReport& report) {
    std::ostringstream os;
    char line[512];
    std::snprintf(line, sizeof line, "%-9s %-10s %-24s %-36s %s\n", "config", "quantity", "expected", "computed",
                  "status");
    os << line;
    for (const auto& r : report.rows) {
        std::snprintf(line, sizeof line, "%-9s %-10s %-24s %-36s %s\n", r.name.c_str(), r.quantity.c_str(),
                      r.expected.c_str(), r.computed.c_str(), r.pass ? "ok" : "MISMATCH");
        os << line;
    }
    return os.str();
}

}  // namespace kippen::verify
