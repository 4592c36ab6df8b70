#pragma once

#include <optional>
#include <vector>

#include "kippen/linalg.hpp"
#include "kippen/pisom.hpp"

namespace kippen::matpoly {

using linalg::ComplexMatrix;
using linalg::cplx;

inline constexpr double kSingularTol = 1e-8;  // |det| relative to the Hadamard bound
inline constexpr double kNullTol = 1e-9;      // sigma / sigma_max

// P(z) = sum_i coeffs[i] z^i with square coefficients of one size.
class MatrixPolynomial {
public:
    explicit MatrixPolynomial(std::vector<ComplexMatrix> coeffs);

    std::size_t size() const { return coeffs_.front().rows(); }
    std::size_t degree() const { return coeffs_.size() - 1; }
    const ComplexMatrix& coeff(std::size_t i) const { return coeffs_[i]; }

    ComplexMatrix operator()(cplx z) const;  // Horner

private:
    std::vector<ComplexMatrix> coeffs_;
};

// z^2 C - z C*C + C*
MatrixPolynomial half_circle_polynomial(const ComplexMatrix& c);
// z^2 C + z C* - C*C
MatrixPolynomial flipped_polynomial(const ComplexMatrix& c);

struct SingularityProbe {
    bool singular = false;
    double max_relative_det = 0.0;  // max over probes of |det P(z)| / Hadamard bound
};

// det P vanishes at n*d + 1 points 1.1 * exp(2 pi i j / (n d + 1)).
SingularityProbe probe_singularity(const MatrixPolynomial& p, double tol = kSingularTol);
bool is_identically_singular(const MatrixPolynomial& p, double tol = kSingularTol);

struct KernelPolynomial {
    std::vector<std::vector<cplx>> vectors;  // v_0 .. v_d

    std::size_t degree() const { return vectors.size() - 1; }
    std::vector<cplx> operator()(cplx z) const;
};

// Smallest degree d with sum_{i+j=m} P_i v_j = 0 for all m; leading vector has unit norm.
// nullopt when no solution exists up to degree n * deg P.
std::optional<KernelPolynomial> minimal_kernel_polynomial(const MatrixPolynomial& p, double null_tol = kNullTol);

// Whether the degree-d convolution system has a nontrivial solution.
bool kernel_exists_at_degree(const MatrixPolynomial& p, std::size_t d, double null_tol = kNullTol);

// max_z ||P(z) v(z)|| / (||P(z)|| ||v(z)||) over 2d + 2 deterministic probe points.
double kernel_residual(const MatrixPolynomial& p, const KernelPolynomial& v);

// Orthonormal basis (columns) of ker C intersected with ker C*.
ComplexMatrix kernel_intersection(const ComplexMatrix& c, double tol = 1e-8);

struct Theorem31Check {
    bool hypothesis_holds = false;  // dim ker C >= floor(k / 2)
    bool contains_c_half = false;   // z^2 C - z C*C + C* identically singular
    bool reducible_j2 = false;      // ker C and ker C* intersect
    bool implication_holds = true;
};

Theorem31Check check_theorem31(const pisom::PartialIsometry& a);

struct Prop31Check {
    bool flipped_singular = false;
    bool intersection_nontrivial = false;
    bool implication_holds = true;
};

Prop31Check check_prop31(const ComplexMatrix& c);

}  // namespace kippen::matpoly
