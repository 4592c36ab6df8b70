#include "kippen/sampling.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "kippen/criteria.hpp"

namespace kippen::sampling {

namespace {

using linalg::ComplexMatrix;
using linalg::cplx;

// Magnitudes kept away from the structural-zero threshold.
double mag(Rng& rng) { return rng.uniform(0.15, 1.0); }
double signed_mag(Rng& rng) { return rng.uniform() < 0.5 ? -mag(rng) : mag(rng); }

// Raw parameters before normalisation. (e, f) follow from s and (c, d) except when
// c = d = 0, where psi sets their direction.
struct Raw {
    double b = 0.0, c = 0.0, d = 0.0;
    double s = 0.0, g = 0.0, h = 0.0;
    double psi = 0.0;
};

Defect2Form build(Raw r) {
    const double n1 = std::sqrt(r.b * r.b + r.c * r.c + r.d * r.d);
    Defect2Form f;
    if (n1 == 0.0) {
        f.b = 1.0;
    } else {
        f.b = r.b / n1;
        f.c = r.c / n1;
        f.d = r.d / n1;
    }
    const double n2 = std::sqrt(r.s * r.s + r.g * r.g + r.h * r.h);
    const double s = n2 > 0.0 ? r.s / n2 : 1.0;
    f.g = n2 > 0.0 ? r.g / n2 : 0.0;
    f.h = n2 > 0.0 ? r.h / n2 : 0.0;
    const double cd = std::hypot(f.c, f.d);
    if (cd == 0.0) {
        f.e = r.psi >= std::numbers::pi / 2 ? 0.0 : s * std::cos(r.psi);
        f.f = r.psi <= 0.0 ? 0.0 : s * std::sin(r.psi);
    } else {
        f.e = s * f.d / cd;
        f.f = -s * f.c / cd;
    }
    if (f.e == 0.0) {
        // e = 0 forces c = 0
        f.b = std::hypot(f.b, f.c);
        f.c = 0.0;
        if (f.d == 0.0) f.f = std::abs(f.f);
    }
    if (f.f == 0.0) f.f = 0.0;  // no negative zero
    return f;
}

Raw general(Rng& rng) {
    return {mag(rng), mag(rng), mag(rng), mag(rng), signed_mag(rng), mag(rng), 0.0};
}

Defect2Form nilpotent_ceg0(Rng& rng) {
    Raw r = general(rng);
    r.h = 0.0;
    switch (rng.index(3)) {
        case 0: r.c = 0.0; break;
        case 1: r.s = 0.0; r.c = 0.0; break;  // e = 0
        default: r.g = 0.0; break;
    }
    if (rng.uniform() < 0.2) r.b = 0.0;
    if (rng.uniform() < 0.2) r.d = 0.0, r.c = 0.0, r.psi = rng.uniform(0.0, std::numbers::pi / 2);
    return build(r);
}

Defect2Form nilpotent_be0(Rng& rng) {
    Raw r = general(rng);
    r.h = 0.0;
    if (rng.uniform() < 0.5) {
        r.b = 0.0;
        if (rng.uniform() < 0.5) r.c = 0.0; else r.g = 0.0;
    } else {
        r.s = 0.0;  // e = f = 0, so c = 0 as well
        r.c = 0.0;
    }
    if (r.c == 0.0 && r.d == 0.0) r.b = 1.0;
    return build(r);
}

Defect2Form half_cd0(Rng& rng) {
    Raw r = general(rng);
    r.b = 1.0;
    r.c = 0.0;
    r.d = 0.0;
    r.psi = rng.uniform(0.0, std::numbers::pi / 2);
    const double u = rng.uniform();
    if (u < 0.25) {
        r.h = 0.0;
    } else if (u < 0.45) {
        r.psi = std::numbers::pi / 2;  // e = 0
    } else if (u < 0.6) {
        r.psi = 0.0;  // e^2 + h^2 = 1
        r.g = 0.0;
    } else if (u < 0.65) {
        r.s = 0.0;  // h = 1
        r.g = 0.0;
    }
    return build(r);
}

Defect2Form half_gh0(Rng& rng) {
    Raw r = general(rng);
    r.g = 0.0;
    r.h = 0.0;
    if (rng.uniform() < 0.25) r.c = 0.0;
    if (rng.uniform() < 0.2) r.b = 0.0;
    return build(r);
}

Defect2Form no_half(Rng& rng) {
    Raw r = general(rng);
    switch (rng.index(6)) {
        case 0: break;
        case 1: r.c = 0.0; break;
        case 2: r.g = 0.0; break;
        case 3: r.h = 0.0; break;
        case 4: r.b = 0.0; break;
        default: r.s = 0.0; r.c = 0.0; break;
    }
    return build(r);
}

Defect2Form cg0(Rng& rng) {
    Raw r = general(rng);
    switch (rng.index(3)) {
        case 0: r.c = 0.0; break;
        case 1: r.g = 0.0; break;
        default: r.c = 0.0; r.g = 0.0; break;
    }
    if (rng.uniform() < 0.15) r.b = 0.0;
    return build(r);
}

Defect2Form cg0_c_g_zero(Rng& rng) {
    Raw r = general(rng);
    r.c = 0.0;
    r.g = 0.0;
    if (rng.uniform() < 0.15) r.b = 0.0;
    return build(r);
}

Defect2Form two_circles(Rng& rng) {
    Raw r = general(rng);
    r.c = 0.0;
    r.g = 0.0;
    return build(r);
}

double plus_residual(const Defect2Form& f) {
    const double rad = f.d * f.d + f.c * f.e * f.g / f.h;
    if (rad < 0.0) return std::nan("");
    const double x = std::sqrt(rad);
    const double ceg = f.c * f.e * f.g;
    return ceg * f.h - f.d * f.d * f.g * f.g + (f.e * f.e + f.h * f.h + ceg / f.h - 1.0) * x;
}

std::optional<Defect2Form> crith_plus_once(Rng& rng) {
    Raw r = general(rng);
    const double n1 = std::sqrt(r.b * r.b + r.c * r.c + r.d * r.d);
    const double s = rng.uniform(0.1, 0.95);
    const double rest = std::sqrt(1.0 - s * s);
    Defect2Form base;
    base.b = r.b / n1;
    base.c = r.c / n1;
    base.d = r.d / n1;
    const double cd = std::hypot(base.c, base.d);
    base.e = s * base.d / cd;
    base.f = -s * base.c / cd;
    auto at = [&](double phi) {
        Defect2Form f = base;
        f.g = rest * std::cos(phi);
        f.h = rest * std::sin(phi);
        return f;
    };
    constexpr int kScan = 720;
    std::vector<double> roots;
    const double lo = 1e-3;
    const double hi = std::numbers::pi - 1e-3;
    double prev_phi = lo;
    double prev = plus_residual(at(lo));
    for (int i = 1; i <= kScan; ++i) {
        const double phi = lo + (hi - lo) * i / kScan;
        const double cur = plus_residual(at(phi));
        if (std::isfinite(prev) && std::isfinite(cur) && (prev < 0.0) != (cur < 0.0)) {
            double a = prev_phi;
            double b = phi;
            double fa = prev;
            for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = plus_residual(at(m));
                if (!std::isfinite(fm)) break;
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_phi = phi;
        prev = cur;
    }
    if (roots.empty()) return std::nullopt;
    const Defect2Form f = at(roots[rng.index(roots.size())]);
    if (std::abs(f.g) < 0.02 || f.h < 0.02) return std::nullopt;
    const auto x = criteria::x_value(f);
    if (!x) return std::nullopt;
    const auto crith = criteria::crith_conditions(f);
    if (!crith.plus_holds) return std::nullopt;
    if (std::abs(criteria::derivative_margin(f, *x)) < 1e-6) return std::nullopt;
    return f;
}

}  // namespace

std::string to_string(Stratum s) {
    switch (s) {
        case Stratum::general: return "general";
        case Stratum::any: return "any";
        case Stratum::nilpotent: return "nilpotent";
        case Stratum::nilpotent_ceg0: return "nilpotent-ceg0";
        case Stratum::nilpotent_be0: return "nilpotent-be0";
        case Stratum::half_cd0: return "half-cd0";
        case Stratum::half_gh0: return "half-gh0";
        case Stratum::no_half: return "no-half";
        case Stratum::cg0: return "cg0";
        case Stratum::cg0_c_g_zero: return "cg0-c-g-zero";
        case Stratum::two_circles: return "two-circles";
        case Stratum::crith_plus: return "crith-plus";
    }
    return "?";
}

std::optional<Defect2Form> sample_defect2(Rng& rng, Stratum s) {
    switch (s) {
        case Stratum::general: return build(general(rng));
        case Stratum::any: {
            static constexpr Stratum kMix[] = {Stratum::general,   Stratum::nilpotent_ceg0, Stratum::nilpotent_be0,
                                               Stratum::half_cd0,  Stratum::half_gh0,       Stratum::no_half,
                                               Stratum::cg0,       Stratum::two_circles,    Stratum::nilpotent};
            return sample_defect2(rng, kMix[rng.index(std::size(kMix))]);
        }
        case Stratum::nilpotent: {
            if (rng.uniform() < 0.5) return nilpotent_ceg0(rng);
            Raw r = general(rng);
            r.h = 0.0;
            return build(r);
        }
        case Stratum::nilpotent_ceg0: return nilpotent_ceg0(rng);
        case Stratum::nilpotent_be0: return nilpotent_be0(rng);
        case Stratum::half_cd0: return half_cd0(rng);
        case Stratum::half_gh0: return half_gh0(rng);
        case Stratum::no_half: return no_half(rng);
        case Stratum::cg0: return cg0(rng);
        case Stratum::cg0_c_g_zero: return cg0_c_g_zero(rng);
        case Stratum::two_circles: return two_circles(rng);
        case Stratum::crith_plus:
            for (int attempt = 0; attempt < 500; ++attempt)
                if (auto f = crith_plus_once(rng)) return f;
            return std::nullopt;
    }
    return std::nullopt;
}

ComplexMatrix disguise(Rng& rng, const ComplexMatrix& a, bool rotate) {
    const ComplexMatrix v = haar_unitary(rng, a.rows());
    ComplexMatrix out = v * a * v.adjoint();
    if (rotate) out *= std::polar(1.0, rng.uniform(-std::numbers::pi, std::numbers::pi));
    return out;
}

ComplexMatrix sample_defect1(Rng& rng) {
    ComplexMatrix m(6, 6);
    m(0, 3) = 1.0;
    // column 4: (0, b, c, d, a, 0); column 5: (0, 0, e, f, g, h) with g fixed by orthogonality
    std::vector<cplx> c4 = {0.0, rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), 0.0};
    std::vector<cplx> c5 = {0.0, 0.0, rng.complex_normal(), rng.complex_normal(), 0.0, rng.complex_normal()};
    if (std::abs(c4[4]) < 0.1) c4[4] += 0.5;
    if (std::abs(c5[5]) < 0.1) c5[5] += 0.5;
    const double n4 = linalg::vector_norm(c4);
    for (auto& x : c4) x /= n4;
    c5[4] = -(std::conj(c4[2]) * c5[2] + std::conj(c4[3]) * c5[3]) / std::conj(c4[4]);
    const double n5 = linalg::vector_norm(c5);
    for (auto& x : c5) x /= n5;
    m.set_column(4, c4);
    m.set_column(5, c5);
    return m;
}

ComplexMatrix sample_defect0_rank2(Rng& rng) {
    const ComplexMatrix q = haar_unitary(rng, 4);
    ComplexMatrix m(4, 4);
    m.set_block(0, 2, q.block(0, 0, 4, 2));
    return m;
}

}  // namespace kippen::sampling
