#include "kippen/matpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kippen::matpoly {

namespace {

double hadamard_bound(const ComplexMatrix& m) {
    double prod = 1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) row += std::norm(m(i, j));
        prod *= std::sqrt(row);
    }
    return prod;
}

// Block lower-triangular Toeplitz map (v_0..v_d) -> coefficients of P(z) v(z).
ComplexMatrix convolution_matrix(const MatrixPolynomial& p, std::size_t d) {
    const std::size_t n = p.size();
    const std::size_t deg = p.degree();
    ComplexMatrix t(n * (d + deg + 1), n * (d + 1));
    for (std::size_t j = 0; j <= d; ++j)
        for (std::size_t i = 0; i <= deg; ++i) t.set_block(n * (i + j), n * j, p.coeff(i));
    return t;
}

std::size_t absolute_kernel_dim(const ComplexMatrix& m, double tol) {
    const auto s = linalg::svd(m);
    return static_cast<std::size_t>(std::count_if(s.sigma.begin(), s.sigma.end(), [&](double x) { return x <= tol; }));
}

}  // namespace

MatrixPolynomial::MatrixPolynomial(std::vector<ComplexMatrix> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("MatrixPolynomial: no coefficients");
    const std::size_t n = coeffs_.front().rows();
    for (const auto& c : coeffs_)
        if (c.rows() != n || c.cols() != n) throw std::invalid_argument("MatrixPolynomial: coefficient shape");
}

ComplexMatrix MatrixPolynomial::operator()(cplx z) const {
    ComplexMatrix acc = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
        acc *= z;
        acc += coeffs_[i];
    }
    return acc;
}

MatrixPolynomial half_circle_polynomial(const ComplexMatrix& c) {
    const ComplexMatrix cs = c.adjoint();
    return MatrixPolynomial({cs, -1.0 * (cs * c), c});
}

MatrixPolynomial flipped_polynomial(const ComplexMatrix& c) {
    const ComplexMatrix cs = c.adjoint();
    return MatrixPolynomial({-1.0 * (cs * c), cs, c});
}

SingularityProbe probe_singularity(const MatrixPolynomial& p, double tol) {
    const std::size_t count = p.size() * p.degree() + 1;
    SingularityProbe out;
    for (std::size_t j = 0; j < count; ++j) {
        const cplx z = std::polar(1.1, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count));
        const ComplexMatrix m = p(z);
        const double bound = hadamard_bound(m);
        const double rel = bound > 0.0 ? std::abs(linalg::determinant(m)) / bound : 0.0;
        out.max_relative_det = std::max(out.max_relative_det, rel);
    }
    out.singular = out.max_relative_det <= tol;
    return out;
}

bool is_identically_singular(const MatrixPolynomial& p, double tol) { return probe_singularity(p, tol).singular; }

std::vector<cplx> KernelPolynomial::operator()(cplx z) const {
    std::vector<cplx> acc = vectors.back();
    for (std::size_t i = vectors.size() - 1; i-- > 0;)
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = acc[k] * z + vectors[i][k];
    return acc;
}

bool kernel_exists_at_degree(const MatrixPolynomial& p, std::size_t d, double null_tol) {
    return linalg::null_space(convolution_matrix(p, d), null_tol).cols() > 0;
}

std::optional<KernelPolynomial> minimal_kernel_polynomial(const MatrixPolynomial& p, double null_tol) {
    const std::size_t n = p.size();
    const std::size_t cap = n * p.degree();
    for (std::size_t d = 0; d <= cap; ++d) {
        const ComplexMatrix ns = linalg::null_space(convolution_matrix(p, d), null_tol);
        if (ns.cols() == 0) continue;
        KernelPolynomial v;
        v.vectors.assign(d + 1, std::vector<cplx>(n));
        for (std::size_t j = 0; j <= d; ++j)
            for (std::size_t k = 0; k < n; ++k) v.vectors[j][k] = ns(n * j + k, 0);
        const double lead = linalg::vector_norm(v.vectors.back());
        for (auto& vec : v.vectors)
            for (auto& x : vec) x /= lead;
        return v;
    }
    return std::nullopt;
}

double kernel_residual(const MatrixPolynomial& p, const KernelPolynomial& v) {
    const std::size_t count = 2 * v.degree() + 2;
    double worst = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const cplx z = std::polar(0.9, 2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(count));
        const ComplexMatrix m = p(z);
        const auto vz = v(z);
        const auto r = m * std::span<const cplx>(vz);
        const double scale = std::max(1e-300, m.frobenius_norm() * linalg::vector_norm(vz));
        worst = std::max(worst, linalg::vector_norm(r) / scale);
    }
    return worst;
}

ComplexMatrix kernel_intersection(const ComplexMatrix& c, double tol) {
    if (!c.square()) throw std::invalid_argument("kernel_intersection: square input required");
    const std::size_t n = c.rows();
    ComplexMatrix stacked(2 * n, n);
    stacked.set_block(0, 0, c);
    stacked.set_block(n, 0, c.adjoint());
    const auto s = linalg::svd(stacked);
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
        if (s.sigma[j] <= tol) idx.push_back(j);
    ComplexMatrix basis(n, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) basis(i, k) = s.v(i, idx[k]);
    return basis;
}

Theorem31Check check_theorem31(const pisom::PartialIsometry& a) {
    const ComplexMatrix& c = a.block.c;
    Theorem31Check out;
    out.hypothesis_holds = absolute_kernel_dim(c, 1e-8) >= a.rank / 2;
    out.contains_c_half = is_identically_singular(half_circle_polynomial(c));
    out.reducible_j2 = kernel_intersection(c).cols() > 0;
    out.implication_holds = !(out.hypothesis_holds && out.contains_c_half) || out.reducible_j2;
    return out;
}

Prop31Check check_prop31(const ComplexMatrix& c) {
    Prop31Check out;
    out.flipped_singular = is_identically_singular(flipped_polynomial(c));
    out.intersection_nontrivial = kernel_intersection(c).cols() > 0;
    out.implication_holds = !out.flipped_singular || out.intersection_nontrivial;
    return out;
}

}  // namespace kippen::matpoly
