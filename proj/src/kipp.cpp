#include "kippen/kipp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <numbers>
#include <numeric>

#include "kippen/pisom.hpp"

namespace kippen::kipp {

using linalg::RealPolynomial;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexMatrix shifted(const ComplexMatrix& a, cplx center) {
    if (center == cplx{}) return a;
    return a - center * ComplexMatrix::identity(a.rows());
}

double wrap_angle(double t) {
    t = std::remainder(t, kTwoPi);
    return t <= -std::numbers::pi ? t + kTwoPi : t;
}

// Real polynomials whose common zeros are the real lambda with P(lambda, .) == 0.
std::vector<RealPolynomial> harmonic_parts(const TrigPolynomial& p) {
    std::vector<RealPolynomial> out;
    for (int k = 0; k <= p.harmonics(); ++k) {
        const auto h = p.harmonic(k);
        RealPolynomial re;
        RealPolynomial im;
        for (const auto& c : h) {
            re.coeffs.push_back(k == 0 ? c.real() : 2.0 * c.real());
            im.coeffs.push_back(2.0 * c.imag());
        }
        out.push_back(std::move(re));
        if (k > 0) out.push_back(std::move(im));
    }
    return out;
}

double residual_at(const std::vector<RealPolynomial>& polys, double r) {
    double m = 0.0;
    for (const auto& p : polys) m = std::max({m, std::abs(p(r)), std::abs(p(-r))});
    return m;
}

double refine_radius(const std::vector<RealPolynomial>& polys, double r) {
    double best = residual_at(polys, r);
    for (int it = 0; it < 8; ++it) {
        double jtf = 0.0;
        double jtj = 0.0;
        for (const auto& p : polys) {
            const auto dp = p.derivative();
            const double fp = p(r);
            const double fm = p(-r);
            const double dpp = dp(r);
            const double dpm = -dp(-r);
            jtf += fp * dpp + fm * dpm;
            jtj += dpp * dpp + dpm * dpm;
        }
        if (jtj <= 0.0) break;
        const double r1 = r - jtf / jtj;
        const double res1 = residual_at(polys, r1);
        if (!(res1 < best)) break;
        r = r1;
        best = res1;
    }
    return r;
}

std::vector<cplx> cluster_means(const std::vector<cplx>& ev, double tol) {
    const std::size_t n = ev.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(ev[i] - ev[j]) <= tol) parent[find(i)] = find(j);
    std::vector<cplx> sum(n);
    std::vector<int> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[find(i)] += ev[i];
        ++count[find(i)];
    }
    std::vector<cplx> means;
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] > 0) means.push_back(sum[i] / static_cast<double>(count[i]));
    return means;
}

std::vector<cplx> center_candidates(const ComplexMatrix& a, const DetectOptions& opts) {
    const auto ev = linalg::schur(a).eigenvalues();
    std::vector<cplx> cands = cluster_means(ev, opts.center_cluster);
    for (const auto& c : cluster_means(ev, opts.coarse_cluster)) {
        const bool dup = std::any_of(cands.begin(), cands.end(), [&](cplx x) { return std::abs(x - c) <= 1e-12; });
        if (!dup) cands.push_back(c);
    }
    std::vector<cplx> defective;
    for (const auto& c : cands)
        if (pisom::algebraic_multiplicity(a, c) > pisom::geometric_multiplicity(a, c)) defective.push_back(c);
    return defective;
}

}  // namespace

TrigPolynomial kippenhahn_polynomial(const ComplexMatrix& a) {
    const int n = static_cast<int>(a.rows());
    const std::size_t samples = static_cast<std::size_t>(2 * n + 1);
    std::vector<std::vector<double>> coeff(static_cast<std::size_t>(n + 1), std::vector<double>(samples));
    for (std::size_t m = 0; m < samples; ++m) {
        const double theta = kTwoPi * static_cast<double>(m) / static_cast<double>(samples);
        const auto mu = linalg::hermitian_eigenvalues(linalg::hermitian_part(a, theta));
        std::vector<double> poly{1.0};
        for (double x : mu) {
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t k = 0; k < poly.size(); ++k) {
                next[k] += x * poly[k];
                next[k + 1] -= poly[k];
            }
            poly = std::move(next);
        }
        for (int k = 0; k <= n; ++k) coeff[static_cast<std::size_t>(k)][m] = poly[static_cast<std::size_t>(k)];
    }
    TrigPolynomial p(n, n);
    for (int k = 0; k <= n; ++k) {
        const auto c = linalg::trig_interpolate(coeff[static_cast<std::size_t>(k)]);
        for (int j = -n; j <= n; ++j) p.coeff(k, j) = c[static_cast<std::size_t>(j + n)];
    }
    return p;
}

std::vector<CurvePoint> trace_curve(const ComplexMatrix& a, std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("trace_curve: steps must be positive");
    const std::size_t n = a.rows();
    std::vector<CurvePoint> pts;
    pts.reserve(steps * n);
    for (std::size_t j = 0; j < steps; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(steps);
        const auto eig = linalg::hermitian_eigen(linalg::hermitian_part(a, theta));
        for (std::size_t b = 0; b < n; ++b) {
            const auto u = eig.vectors.column(b);
            const auto au = a * std::span<const cplx>(u);
            pts.push_back({theta, b, eig.values[b], linalg::inner(u, au)});
        }
    }
    return pts;
}

double support_value(const ComplexMatrix& a, double theta) {
    return linalg::hermitian_eigenvalues(linalg::hermitian_part(a, theta)).back();
}

NumericalRadius numerical_radius(const ComplexMatrix& a) {
    constexpr std::size_t kGrid = 256;
    const double step = kTwoPi / kGrid;
    std::vector<double> theta(kGrid);
    std::vector<double> val(kGrid);
    for (std::size_t i = 0; i < kGrid; ++i) {
        theta[i] = -std::numbers::pi + step * static_cast<double>(i + 1);
        val[i] = support_value(a, theta[i]);
    }
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < kGrid; ++i) {
        const double l = val[(i + kGrid - 1) % kGrid];
        const double r = val[(i + 1) % kGrid];
        if (val[i] >= l && val[i] >= r) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](auto x, auto y) { return val[x] > val[y]; });
    if (peaks.size() > 8) peaks.resize(8);

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    NumericalRadius out;
    std::vector<std::pair<double, double>> refined;
    for (std::size_t i : peaks) {
        double lo = theta[i] - step;
        double hi = theta[i] + step;
        double x1 = hi - invphi * (hi - lo);
        double x2 = lo + invphi * (hi - lo);
        double f1 = support_value(a, x1);
        double f2 = support_value(a, x2);
        while (hi - lo > 1e-10) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + invphi * (hi - lo);
                f2 = support_value(a, x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - invphi * (hi - lo);
                f1 = support_value(a, x1);
            }
        }
        const double tm = 0.5 * (lo + hi);
        double best = support_value(a, tm);
        double at = tm;
        if (val[i] > best) {
            best = val[i];
            at = theta[i];
        }
        refined.emplace_back(wrap_angle(at), best);
    }
    out.value = *std::max_element(val.begin(), val.end());
    for (const auto& [t, v] : refined) out.value = std::max(out.value, v);

    std::vector<double> args;
    for (const auto& [t, v] : refined)
        if (v >= out.value - 1e-8) args.push_back(t);
    for (std::size_t i = 0; i < kGrid; ++i)
        if (val[i] >= out.value - 1e-8) args.push_back(theta[i]);
    std::sort(args.begin(), args.end());
    for (double t : args)
        if (out.argmax_thetas.empty() || t - out.argmax_thetas.back() > 1e-9) out.argmax_thetas.push_back(t);
    return out;
}

std::string to_string(Source s) { return s == Source::closed_form ? "closed-form" : "oracle"; }

std::string to_string(DiskClass d) {
    switch (d) {
        case DiskClass::circular_disk:
            return "circular-disk";
        case DiskClass::non_disk:
            return "non-disk";
        default:
            return "undetermined";
    }
}

DetectOptions DetectOptions::rounded() {
    DetectOptions o;
    o.coefficient_tol = 5e-5;
    o.merge_tol = 1e-3;
    o.oracle_tol = 1e-3;
    o.disk_tol = 1e-4;
    o.gray_zone = 1e-3;
    return o;
}

double divisibility_residual(const ComplexMatrix& a, cplx center, double radius) {
    const TrigPolynomial p = kippenhahn_polynomial(shifted(a, center));
    const double scale = std::max(1.0, p.max_abs_coeff());
    const auto polys = harmonic_parts(p);
    if (radius == 0.0) {
        double m = 0.0;
        for (const auto& q : polys) m = std::max(m, std::abs(q.coeffs.front()));
        return m / scale;
    }
    return residual_at(polys, radius) / scale;
}

bool contains_circle(const ComplexMatrix& a, cplx center, double radius, double tol) {
    return divisibility_residual(a, center, radius) <= tol;
}

bool contains_point_circle(const ComplexMatrix& a, cplx center, double tol) {
    return contains_circle(a, center, 0.0, tol);
}

double circle_oracle_residual(const ComplexMatrix& a, cplx center, double radius, std::size_t grid) {
    const ComplexMatrix b = shifted(a, center);
    double worst = 0.0;
    for (std::size_t m = 0; m < grid; ++m) {
        const double theta = kTwoPi * static_cast<double>(m) / static_cast<double>(grid);
        const auto mu = linalg::hermitian_eigenvalues(linalg::hermitian_part(b, theta));
        double pp = 1.0;
        double pm = 1.0;
        for (double x : mu) {
            pp *= x - radius;
            pm *= x + radius;
        }
        worst = std::max({worst, std::abs(pp), std::abs(pm)});
    }
    return worst;
}

namespace {

// Nearest eigenvalue of Re(e^{i theta}(A - center)) to r across a theta grid: mean and
// largest deviation. A genuine circle has every deviation at roundoff level.
struct Track {
    double mean = 0.0;
    double spread = 0.0;
};

Track eigen_track(const ComplexMatrix& b, double r, std::size_t grid = 64) {
    std::vector<double> near(grid);
    for (std::size_t m = 0; m < grid; ++m) {
        const double theta = kTwoPi * static_cast<double>(m) / static_cast<double>(grid);
        const auto mu = linalg::hermitian_eigenvalues(linalg::hermitian_part(b, theta));
        double best = mu.front();
        for (double x : mu)
            if (std::abs(x - r) < std::abs(best - r)) best = x;
        near[m] = best;
    }
    Track t;
    for (double x : near) t.mean += x;
    t.mean /= static_cast<double>(grid);
    for (double x : near) t.spread = std::max(t.spread, std::abs(x - t.mean));
    return t;
}

}  // namespace

CircleReport detect_circles(const ComplexMatrix& a, const DetectOptions& opts) {
    if (!a.square()) throw std::invalid_argument("detect_circles: matrix must be square");
    CircleReport report;
    report.numerical_radius = numerical_radius(a).value;

    std::vector<Circle> found;
    auto add = [&](const Circle& c) {
        for (auto& f : found) {
            if (std::abs(f.center - c.center) <= opts.merge_tol && std::abs(f.radius - c.radius) <= opts.merge_tol &&
                f.degenerate == c.degenerate) {
                if (c.residual < f.residual) f = c;
                return;
            }
        }
        found.push_back(c);
    };

    for (const cplx center : center_candidates(a, opts)) {
        const ComplexMatrix b = shifted(a, center);
        const TrigPolynomial p = kippenhahn_polynomial(b);
        const double scale = std::max(1.0, p.max_abs_coeff());
        const double tol = opts.coefficient_tol * scale;
        const auto polys = harmonic_parts(p);

        double zero_res = 0.0;
        for (const auto& q : polys) zero_res = std::max(zero_res, std::abs(q.coeffs.front()));
        if (zero_res <= tol) {
            const Track track = eigen_track(b, 0.0);
            if (std::abs(track.mean) + track.spread <= opts.oracle_tol)
                add({center, 0.0, true, Source::oracle, zero_res / scale});
        }

        const double rmax = linalg::spectral_norm(b) * (1.0 + 1e-9) + 1e-12;
        std::vector<double> cand;
        for (const auto& q : polys) {
            if (q.max_abs_coeff() <= tol) continue;
            for (const auto& r : linalg::poly_real_roots(q, -rmax, rmax).roots) {
                const double rr = std::abs(r.value);
                if (rr > opts.merge_tol) cand.push_back(rr);
            }
        }
        std::sort(cand.begin(), cand.end());
        for (double r0 : cand) {
            const double r1 = refine_radius(polys, r0);
            if (!(residual_at(polys, r1) <= tol)) continue;
            const Track track = eigen_track(b, r1);
            if (track.spread > opts.oracle_tol || track.mean <= opts.merge_tol) continue;
            const double r = track.mean;
            const double res = residual_at(polys, r);
            if (!(res <= tol)) continue;
            if (circle_oracle_residual(a, center, r) > opts.oracle_tol * scale) continue;
            add({center, r, false, Source::oracle, res / scale});
        }
    }
    std::sort(found.begin(), found.end(), [](const Circle& x, const Circle& y) {
        if (std::abs(std::abs(x.center) - std::abs(y.center)) > 1e-12) return std::abs(x.center) < std::abs(y.center);
        return x.radius < y.radius;
    });
    report.circles = std::move(found);

    report.disk = DiskClass::non_disk;
    for (const auto& c : report.circles) {
        if (c.degenerate) continue;
        const double w = c.center == cplx{} ? report.numerical_radius : numerical_radius(shifted(a, c.center)).value;
        const double gap = std::abs(w - c.radius);
        if (gap <= opts.disk_tol) {
            report.disk = DiskClass::circular_disk;
            break;
        }
        if (gap < opts.gray_zone) report.disk = DiskClass::undetermined;
    }
    return report;
}

std::vector<BranchRange> branch_ranges(const ComplexMatrix& a, std::size_t steps) {
    const std::size_t n = a.rows();
    std::vector<BranchRange> out(n);
    for (std::size_t b = 0; b < n; ++b) out[b] = {b, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < steps; ++j) {
        const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(steps);
        const auto mu = linalg::hermitian_eigenvalues(linalg::hermitian_part(a, theta));
        for (std::size_t b = 0; b < n; ++b) {
            out[b].min = std::min(out[b].min, mu[b]);
            out[b].max = std::max(out[b].max, mu[b]);
        }
    }
    return out;
}

}  // namespace kippen::kipp
