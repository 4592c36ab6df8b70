#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kippen::linalg {

using cplx = std::complex<double>;

// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const cplx> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);
    std::vector<cplx> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const cplx> v);

    double frobenius_norm() const;
    double max_abs() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> x);

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

// Re(e^{i theta} A) = (e^{i theta} A + e^{-i theta} A*) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& a, double theta);

double vector_norm(std::span<const cplx> v);
cplx inner(std::span<const cplx> x, std::span<const cplx> y);  // x* y

// Polynomial with real coefficients, ascending powers.
struct RealPolynomial {
    std::vector<double> coeffs;

    double operator()(double x) const;
    std::complex<double> operator()(std::complex<double> z) const;
    int degree() const;  // -1 for the zero polynomial
    RealPolynomial derivative() const;
    double max_abs_coeff() const;
};

RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b);

// Polynomial in lambda whose coefficients are trigonometric polynomials in theta:
// P(lambda, theta) = sum_a lambda^a sum_{k=-K..K} c[a][k] e^{i k theta}.
class TrigPolynomial {
public:
    TrigPolynomial() = default;
    TrigPolynomial(int lambda_degree, int harmonics);

    int lambda_degree() const noexcept { return degree_; }
    int harmonics() const noexcept { return harmonics_; }

    cplx coeff(int a, int k) const { return c_[index(a, k)]; }
    cplx& coeff(int a, int k) { return c_[index(a, k)]; }

    double operator()(double lambda, double theta) const;

    // Coefficients (ascending in lambda) of the e^{ik theta} harmonic.
    std::vector<cplx> harmonic(int k) const;
    double max_abs_coeff() const;

private:
    std::size_t index(int a, int k) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(2 * harmonics_ + 1) +
               static_cast<std::size_t>(k + harmonics_);
    }
    int degree_ = 0;
    int harmonics_ = 0;
    std::vector<cplx> c_;
};

// Fourier coefficients c_{-K..K} of the trigonometric polynomial of degree K through
// samples at theta_m = 2 pi m / N, N = 2K + 1.
std::vector<cplx> trig_interpolate(std::span<const double> samples);

struct HermitianEigen {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column j belongs to values[j]
};

// Cyclic complex Jacobi. Throws std::invalid_argument for non-Hermitian input.
HermitianEigen hermitian_eigen(const ComplexMatrix& h, bool want_vectors = true);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

struct Schur {
    ComplexMatrix q;  // unitary, A = Q T Q*
    ComplexMatrix t;  // upper triangular
    std::vector<cplx> eigenvalues() const;
};

Schur schur(const ComplexMatrix& a);

// Swap adjacent diagonal entries k, k+1 of a Schur form in place.
void schur_swap(Schur& s, std::size_t k);

// Thin singular value decomposition A = U diag(sigma) V*, sigma descending.
// U is rows x cols; columns of U belonging to zero singular values are zero.
struct Svd {
    ComplexMatrix u;
    std::vector<double> sigma;
    ComplexMatrix v;
};

Svd svd(const ComplexMatrix& a);
double spectral_norm(const ComplexMatrix& a);

// Orthonormal basis (columns) of the null space: right singular vectors with
// sigma <= rel_tol * sigma_max (or all of them when A is zero).
ComplexMatrix null_space(const ComplexMatrix& a, double rel_tol);

// Orthonormal basis of the column space (sigma > rel_tol * sigma_max).
ComplexMatrix range_basis(const ComplexMatrix& a, double rel_tol);

struct Qr {
    ComplexMatrix q;  // rows x rows unitary
    ComplexMatrix r;  // rows x cols upper triangular
};

Qr qr(const ComplexMatrix& a);

cplx determinant(const ComplexMatrix& a);

// Principal square root of a Hermitian positive semidefinite matrix.
ComplexMatrix psd_sqrt(const ComplexMatrix& h);

struct Root {
    double value = 0.0;
    int multiplicity = 1;
};

struct RootResult {
    bool identically_zero = false;
    std::vector<Root> roots;  // ascending
};

// All complex roots via the companion matrix, one Newton polish each.
std::vector<cplx> poly_roots(const RealPolynomial& p);

// Real roots in [lo, hi] with multiplicities.
RootResult poly_real_roots(const RealPolynomial& p, double lo, double hi);

}  // namespace kippen::linalg
