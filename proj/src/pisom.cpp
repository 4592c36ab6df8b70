#include "kippen/pisom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace kippen::pisom {

using linalg::svd;

namespace {

cplx phase_of(cplx z) {
    const double r = std::abs(z);
    return r > 1e-14 ? z / r : cplx(1.0, 0.0);
}

// Columns of V whose singular value is <= thr (absolute).
ComplexMatrix kernel_abs(const ComplexMatrix& x, double thr) {
    const auto s = svd(x);
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < s.sigma.size(); ++j)
        if (s.sigma[j] <= thr) idx.push_back(j);
    ComplexMatrix k(x.cols(), idx.size());
    for (std::size_t c = 0; c < idx.size(); ++c)
        for (std::size_t i = 0; i < x.cols(); ++i) k(i, c) = s.v(i, idx[c]);
    return k;
}

// Orthonormal complement of orthonormal columns.
ComplexMatrix complement(const ComplexMatrix& q) {
    if (q.cols() == 0) return ComplexMatrix::identity(q.rows());
    return linalg::null_space(q.adjoint(), 0.5);
}

ComplexMatrix hcat(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(0, a.cols(), b);
    return m;
}

ComplexMatrix unit_column(std::span<const cplx> v) {
    ComplexMatrix m(v.size(), 1);
    const double n = linalg::vector_norm(v);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i] / n;
    return m;
}

// 2x2 unitary M with M [x; y] = [0; rho].
std::array<cplx, 4> zero_first(cplx x, cplx y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ax == 0.0) return {1.0, 0.0, 0.0, 1.0};
    if (ay == 0.0) return {0.0, std::conj(x) / ax, 1.0, 0.0};
    const double r = std::hypot(ax, ay);
    const double c = ay / r;
    const cplx s = (y / ay) * std::conj(x) / r;
    return {c, -std::conj(s), s, c};
}

// Rows (i, i+1) of the kernel coordinates transform by the 2x2 unitary m.
void rotate_kernel_rows(ComplexMatrix& w, std::size_t i, const std::array<cplx, 4>& m) {
    // W <- W L with L* acting on rows: L = m* on columns i, i+1.
    for (std::size_t r = 0; r < w.rows(); ++r) {
        const cplx x = w(r, i);
        const cplx y = w(r, i + 1);
        w(r, i) = x * std::conj(m[0]) + y * std::conj(m[1]);
        w(r, i + 1) = x * std::conj(m[2]) + y * std::conj(m[3]);
    }
}

ComplexMatrix similar(const ComplexMatrix& w, const ComplexMatrix& a) { return w.adjoint() * a * w; }

ComplexMatrix prepare6(const PartialIsometry& pa) {
    if (pa.rank != 3) throw std::invalid_argument("canonical form requires rank 3, got " + std::to_string(pa.rank));
    ComplexMatrix a = pa.matrix;
    if (a.rows() > 6) a = compress_to_active_subspace(a);
    if (a.rows() < 6) a = linalg::direct_sum(a, ComplexMatrix(6 - a.rows(), 6 - a.rows()));
    return a;
}

// Map the first kernel-coordinate column of B to a positive multiple of e1.
void householder_first_column(ComplexMatrix& w, const ComplexMatrix& a) {
    const ComplexMatrix a1 = similar(w, a);
    ComplexMatrix b0(3, 1);
    for (std::size_t i = 0; i < 3; ++i) b0(i, 0) = a1(i, 3);
    if (b0.frobenius_norm() < 1e-14) return;
    const auto f = linalg::qr(b0);
    const ComplexMatrix k = w.block(0, 0, w.rows(), 3) * f.q;
    w.set_block(0, 0, k);
}

// Unitary basis of the range coordinates ordering the zero eigenvalues of C first.
ComplexMatrix zero_flag_basis(const ComplexMatrix& c) {
    const ComplexMatrix k1 = kernel_abs(c, kKernelTol);
    switch (k1.cols()) {
        case 0:
            throw std::invalid_argument("canonicalize_defect2: defect < 2");
        case 3:
            return ComplexMatrix::identity(3);
        case 1: {
            const ComplexMatrix q2 = complement(k1);
            const ComplexMatrix k2 = kernel_abs(q2.adjoint() * c * q2, kKernelTol);
            if (k2.cols() == 0) throw std::invalid_argument("canonicalize_defect2: defect < 2");
            const ComplexMatrix u2 = q2 * k2.block(0, 0, 2, 1);
            const ComplexMatrix u12 = hcat(k1, u2);
            return hcat(u12, complement(u12));
        }
        default: {
            const ComplexMatrix u3 = complement(k1);
            const ComplexMatrix cu3 = c * u3;
            const cplx h = (u3.adjoint() * cu3)(0, 0);
            if (std::abs(h) > kKernelTol) {
                const ComplexMatrix w = k1 * (k1.adjoint() * cu3);
                if (w.frobenius_norm() <= kKernelTol) return hcat(k1, u3);
                const ComplexMatrix u2 = unit_column(w.column(0));
                const ComplexMatrix u23 = hcat(u2, u3);
                return hcat(hcat(complement(u23), u2), u3);
            }
            const ComplexMatrix u1 = unit_column(cu3.column(0));
            const ComplexMatrix u12 = hcat(u1, u3);
            return hcat(u12, complement(u12));
        }
    }
}

}  // namespace

NotPartialIsometry::NotPartialIsometry(double max_deviation)
    : std::runtime_error("not a partial isometry: singular value deviation " + std::to_string(max_deviation)),
      max_deviation_(max_deviation) {}

PartialIsometry validate(const ComplexMatrix& m, double tol) {
    if (!m.square()) throw std::invalid_argument("validate: matrix must be square");
    const auto s = svd(m);
    double dev = 0.0;
    for (double sg : s.sigma) dev = std::max(dev, std::min(std::abs(sg), std::abs(sg - 1.0)));
    if (dev > tol) throw NotPartialIsometry(dev);

    const std::size_t n = m.rows();
    PartialIsometry p;
    p.matrix = m;
    p.rank = static_cast<std::size_t>(std::count_if(s.sigma.begin(), s.sigma.end(), [](double x) { return x > 0.5; }));
    const std::size_t k = n - p.rank;
    ComplexMatrix w(n, n);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < n; ++i) w(i, c) = s.v(i, p.rank + c);
    for (std::size_t c = 0; c < p.rank; ++c)
        for (std::size_t i = 0; i < n; ++i) w(i, k + c) = s.v(i, c);
    const ComplexMatrix a1 = similar(w, m);
    p.block.b = a1.block(0, k, k, p.rank);
    p.block.c = a1.block(k, k, p.rank, p.rank);
    p.block.basis = w;
    return p;
}

ComplexMatrix project_to_partial_isometry(const ComplexMatrix& m) {
    if (!m.square()) throw std::invalid_argument("project_to_partial_isometry: matrix must be square");
    const auto s = svd(m);
    const std::size_t n = m.rows();
    ComplexMatrix p(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (s.sigma[j] > 0.4 && s.sigma[j] < 0.6)
            throw std::invalid_argument("project_to_partial_isometry: singular value " + std::to_string(s.sigma[j]) +
                                        " too close to 1/2");
        if (s.sigma[j] <= 0.5) continue;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) p(r, c) += s.u(r, j) * std::conj(s.v(c, j));
    }
    return p;
}

ComplexMatrix compress_to_active_subspace(const ComplexMatrix& a) {
    const ComplexMatrix q = linalg::range_basis(hcat(a, a.adjoint()), 1e-10);
    if (q.cols() == a.rows()) return a;
    return similar(q, a);
}

ComplexMatrix random_rank3(std::uint64_t seed) {
    Rng rng(seed);
    const ComplexMatrix q = haar_unitary(rng, 6);
    ComplexMatrix a(6, 6);
    a.set_block(0, 3, q.block(0, 0, 6, 3));
    return a;
}

ComplexMatrix random_partial_isometry(Rng& rng, std::size_t n, std::size_t rank) {
    const ComplexMatrix v = haar_unitary(rng, n);
    const ComplexMatrix w = haar_unitary(rng, n);
    return v.block(0, 0, n, rank) * w.block(0, 0, n, rank).adjoint();
}

std::size_t algebraic_multiplicity(const ComplexMatrix& a, cplx z, double tol) {
    const double thr = tol * std::max(1.0, linalg::spectral_norm(a));
    ComplexMatrix x = a - z * ComplexMatrix::identity(a.rows());
    std::size_t total = 0;
    while (x.rows() > 0) {
        const auto s = svd(x);
        std::size_t k = 0;
        for (double sg : s.sigma) k += sg <= thr ? 1 : 0;
        if (k == 0) break;
        total += k;
        const std::size_t keep = x.rows() - k;
        ComplexMatrix q(x.rows(), keep);
        for (std::size_t c = 0; c < keep; ++c)
            for (std::size_t i = 0; i < x.rows(); ++i) q(i, c) = s.v(i, c);
        x = similar(q, x);
    }
    return total;
}

std::size_t geometric_multiplicity(const ComplexMatrix& a, cplx z, double tol) {
    const double thr = tol * std::max(1.0, linalg::spectral_norm(a));
    return kernel_abs(a - z * ComplexMatrix::identity(a.rows()), thr).cols();
}

std::size_t defect(const PartialIsometry& a) {
    const std::size_t alg = algebraic_multiplicity(a.matrix, 0.0);
    const std::size_t geo = a.kernel_dim();
    return alg > geo ? alg - geo : 0;
}

ComplexMatrix CanonicalForm6::matrix() const {
    const double s = std::sqrt(std::max(0.0, 1.0 - a * a));
    ComplexMatrix m(6, 6);
    m(0, 3) = s;
    m(0, 4) = b * a;
    m(0, 5) = d * a;
    m(1, 4) = v;
    m(2, 4) = c;
    m(2, 5) = e;
    m(3, 3) = a;
    m(3, 4) = -b * s;
    m(3, 5) = -d * s;
    m(4, 4) = lambda2;
    m(4, 5) = f;
    m(5, 5) = lambda3;
    return m;
}

ComplexMatrix Defect2Form::matrix() const {
    ComplexMatrix m(6, 6);
    m(0, 3) = 1.0;
    m(1, 4) = b;
    m(2, 4) = c;
    m(3, 4) = d;
    m(2, 5) = e;
    m(3, 5) = f;
    m(4, 5) = g;
    m(5, 5) = h;
    return m;
}

double Defect2Form::constraint_residual() const {
    return std::max({std::abs(b * b + c * c + d * d - 1.0), std::abs(e * e + f * f + g * g + h * h - 1.0),
                     std::abs(c * e + d * f)});
}

bool Defect2Form::admissible(double tol) const {
    if (constraint_residual() > tol) return false;
    if (b < -tol || c < -tol || d < -tol || e < -tol || h < -tol) return false;
    if (std::abs(c * e) <= tol ? f < -tol : f > tol) return false;
    if (std::abs(e) <= tol && std::abs(c) > tol) return false;
    return true;
}

Canonical<CanonicalForm6> canonicalize_rank3(const PartialIsometry& pa) {
    const ComplexMatrix a = prepare6(pa);
    const PartialIsometry p = validate(a, 1e-6);
    ComplexMatrix w = p.block.basis;

    linalg::Schur sch = linalg::schur(p.block.c);
    auto before = [](cplx x, cplx y) {
        const double ax = std::abs(x);
        const double ay = std::abs(y);
        if (std::abs(ax - ay) > 1e-12) return ax > ay;
        return std::arg(x) < std::arg(y) - 1e-12;
    };
    for (std::size_t pass = 0; pass < 3; ++pass)
        for (std::size_t k = 0; k + 1 < 3; ++k)
            if (before(sch.t(k + 1, k + 1), sch.t(k, k))) linalg::schur_swap(sch, k);
    w = w * linalg::direct_sum(ComplexMatrix::identity(3), sch.q);

    const cplx lead = similar(w, a)(3, 3);
    const double theta = std::abs(lead) > 1e-12 ? -std::arg(lead) : 0.0;

    householder_first_column(w, a);
    {
        const ComplexMatrix a1 = similar(w, a);
        rotate_kernel_rows(w, 1, zero_first(a1(1, 5), a1(2, 5)));
    }

    const ComplexMatrix a2 = std::polar(1.0, theta) * similar(w, a);
    const double aa = std::clamp(a2(3, 3).real(), 0.0, 1.0);
    const double s = std::sqrt(1.0 - aa * aa);
    std::array<cplx, 6> delta{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    delta[3] = phase_of(a2(0, 3));
    auto col_coeff = [&](std::size_t j) {
        return aa * (delta[0] * a2(0, j)) - s * (delta[3] * a2(3, j));
    };
    delta[4] = phase_of(col_coeff(4));
    delta[5] = phase_of(col_coeff(5));
    delta[1] = delta[4] * std::conj(phase_of(a2(1, 4)));
    delta[2] = std::abs(a2(2, 4)) > 1e-14 ? delta[4] * std::conj(phase_of(a2(2, 4)))
                                          : delta[5] * std::conj(phase_of(a2(2, 5)));
    ComplexMatrix dstar(6, 6);
    for (std::size_t i = 0; i < 6; ++i) dstar(i, i) = std::conj(delta[i]);
    w = w * dstar;

    const ComplexMatrix a3 = std::polar(1.0, theta) * similar(w, a);
    CanonicalForm6 f;
    f.a = aa;
    const cplx beta = aa * a3(0, 4) - s * a3(3, 4);
    const cplx dcoef = aa * a3(0, 5) - s * a3(3, 5);
    f.b = std::abs(beta);
    f.d = dcoef;
    f.v = a3(1, 4).real();
    f.c = a3(2, 4).real();
    f.e = a3(2, 5);
    f.f = a3(4, 5);
    f.lambda2 = a3(4, 4);
    f.lambda3 = a3(5, 5);

    Canonical<CanonicalForm6> out;
    out.form = f;
    out.unitary = w.adjoint();
    out.theta = theta;
    out.residual = (f.matrix() - a3).max_abs();
    return out;
}

Canonical<Defect2Form> canonicalize_defect2(const PartialIsometry& pa) {
    const ComplexMatrix a = prepare6(pa);
    const PartialIsometry p = validate(a, 1e-6);
    if (defect(p) < 2) throw std::invalid_argument("canonicalize_defect2: defect < 2");

    ComplexMatrix w = p.block.basis * linalg::direct_sum(ComplexMatrix::identity(3), zero_flag_basis(p.block.c));

    const cplx hraw = similar(w, a)(5, 5);
    double theta = std::abs(hraw) > 1e-12 ? -std::arg(hraw) : 0.0;

    householder_first_column(w, a);
    {
        const ComplexMatrix a1 = similar(w, a);
        rotate_kernel_rows(w, 1, zero_first(a1(1, 5), a1(2, 5)));
    }
    {
        const ComplexMatrix a1 = similar(w, a);
        if (std::abs(a1(2, 5)) <= kKernelTol && std::abs(a1(2, 4)) > kKernelTol) {
            // [b; c] -> [rho; 0]
            const auto m = zero_first(a1(2, 4), a1(1, 4));
            rotate_kernel_rows(w, 1, {m[3], m[2], m[1], m[0]});
        }
    }

    if (std::abs(hraw) <= 1e-12) {
        // h = 0 frees the rotation; spend it on the triangles through g, which diagonal phases cannot touch
        const ComplexMatrix a1 = similar(w, a);
        const cplx via_d = a1(3, 4) * a1(4, 5) * std::conj(a1(3, 5));
        const cplx via_c = a1(2, 4) * a1(4, 5) * std::conj(a1(2, 5));
        const cplx cyc = std::abs(via_d) >= std::abs(via_c) ? via_d : via_c;
        if (std::abs(cyc) > 1e-14) theta = -std::arg(cyc);
    }
    const ComplexMatrix a2 = std::polar(1.0, theta) * similar(w, a);
    std::array<cplx, 6> delta{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    std::array<bool, 6> fixed{true, false, false, false, false, false};
    delta[3] = phase_of(a2(0, 3));
    fixed[3] = true;
    struct Edge {
        std::size_t i;
        std::size_t j;
    };
    constexpr std::array<Edge, 6> edges{{{3, 4}, {1, 4}, {2, 4}, {2, 5}, {3, 5}, {4, 5}}};
    for (bool progress = true; progress;) {
        progress = false;
        for (const auto& [i, j] : edges) {
            if (fixed[i] == fixed[j] || std::abs(a2(i, j)) <= 1e-14) continue;
            if (fixed[i])
                delta[j] = delta[i] * phase_of(a2(i, j));
            else
                delta[i] = delta[j] * std::conj(phase_of(a2(i, j)));
            fixed[i] = fixed[j] = true;
            progress = true;
            break;
        }
        if (progress) continue;
        // a component not reached from the root (e.g. g = 0): anchor it anywhere
        for (const auto& [i, j] : edges) {
            if (fixed[i] || fixed[j] || std::abs(a2(i, j)) <= 1e-14) continue;
            fixed[i] = true;
            progress = true;
            break;
        }
    }
    ComplexMatrix dstar(6, 6);
    for (std::size_t i = 0; i < 6; ++i) dstar(i, i) = std::conj(delta[i]);
    w = w * dstar;

    const ComplexMatrix a3 = std::polar(1.0, theta) * similar(w, a);
    if (std::abs(a3(3, 5).imag()) > 1e-8 || std::abs(a3(4, 5).imag()) > 1e-8)
        throw NotRealizable("canonicalize_defect2: entries f, g cannot be made real simultaneously");

    auto snap = [](double x) { return std::abs(x) <= 1e-12 ? 0.0 : x; };
    Defect2Form f;
    f.b = snap(a3(1, 4).real());
    f.c = snap(a3(2, 4).real());
    f.d = snap(a3(3, 4).real());
    f.e = snap(a3(2, 5).real());
    f.f = snap(a3(3, 5).real());
    f.g = snap(a3(4, 5).real());
    f.h = snap(a3(5, 5).real());

    Canonical<Defect2Form> out;
    out.form = f;
    out.unitary = w.adjoint();
    out.theta = theta;
    out.residual = (f.matrix() - a3).max_abs();
    return out;
}

bool is_unitarily_irreducible(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    if (n <= 1) return true;
    const ComplexMatrix as = a.adjoint();
    // vec(X) row-major; rows: XA - AX then XA* - A*X
    ComplexMatrix m(2 * n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t r = i * n + j;
            for (std::size_t k = 0; k < n; ++k) {
                m(r, i * n + k) += a(k, j);
                m(r, k * n + j) -= a(i, k);
                m(n * n + r, i * n + k) += as(k, j);
                m(n * n + r, k * n + j) -= as(i, k);
            }
        }
    return linalg::null_space(m, 1e-8).cols() == 1;
}

bool is_unitarily_irreducible_blockform(const ComplexMatrix& b, const ComplexMatrix& c) {
    if (b.rows() > 0 && b.cols() > 0) {
        const auto s = svd(b.rows() >= b.cols() ? b : b.adjoint());
        if (s.sigma.back() <= 1e-8) return false;
    }
    return is_unitarily_irreducible(c);
}

ComplexMatrix assemble_from_contraction(const ComplexMatrix& c) {
    if (!c.square()) throw std::invalid_argument("assemble_from_contraction: C must be square");
    if (linalg::spectral_norm(c) > 1.0 + 1e-12) throw std::invalid_argument("assemble_from_contraction: ||C|| > 1");
    const std::size_t k = c.rows();
    ComplexMatrix a(2 * k, 2 * k);
    a.set_block(0, k, linalg::psd_sqrt(ComplexMatrix::identity(k) - c.adjoint() * c));
    a.set_block(k, k, c);
    return a;
}

}  // namespace kippen::pisom
