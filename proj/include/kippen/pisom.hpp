#pragma once

#include <cstdint>
#include <stdexcept>

#include "kippen/linalg.hpp"
#include "kippen/random.hpp"

namespace kippen::pisom {

using linalg::ComplexMatrix;
using linalg::cplx;

// Singular values within this distance of 0 or 1 count as partial-isometry values
// when validating; 1/2 splits them into kernel and isometric part.
inline constexpr double kDefaultValidateTol = 1e-10;
// Absolute singular-value threshold for kernel decisions on unit-norm matrices.
inline constexpr double kKernelTol = 1e-8;

class NotPartialIsometry : public std::runtime_error {
public:
    explicit NotPartialIsometry(double max_deviation);
    double max_deviation() const noexcept { return max_deviation_; }

private:
    double max_deviation_;
};

class NotRealizable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// W* A W = [[0, B], [0, C]] with the first m = dim ker A basis vectors spanning ker A.
struct BlockForm {
    ComplexMatrix b;
    ComplexMatrix c;
    ComplexMatrix basis;  // W
};

struct PartialIsometry {
    ComplexMatrix matrix;
    std::size_t rank = 0;
    BlockForm block;

    std::size_t size() const { return matrix.rows(); }
    std::size_t kernel_dim() const { return matrix.rows() - rank; }
};

PartialIsometry validate(const ComplexMatrix& m, double tol = kDefaultValidateTol);

// Nearest partial isometry U1 V1* from the singular vectors with sigma > 1/2.
// Throws std::invalid_argument when a singular value lies in (0.4, 0.6).
ComplexMatrix project_to_partial_isometry(const ComplexMatrix& m);

// Compression to R(A) + R(A*); returns A unchanged when that is the whole space.
ComplexMatrix compress_to_active_subspace(const ComplexMatrix& a);

// Rank-3 6x6 partial isometry [0 | Q] with Q a random 6x3 isometry.
ComplexMatrix random_rank3(std::uint64_t seed);
ComplexMatrix random_partial_isometry(Rng& rng, std::size_t n, std::size_t rank);

// Algebraic multiplicity of the eigenvalue z by staircase kernel deflation of A - zI.
std::size_t algebraic_multiplicity(const ComplexMatrix& a, cplx z, double tol = kKernelTol);
std::size_t geometric_multiplicity(const ComplexMatrix& a, cplx z, double tol = kKernelTol);

// Algebraic minus geometric multiplicity of the zero eigenvalue.
std::size_t defect(const PartialIsometry& a);

// Rank-3 6x6 canonical form with parameters a, b, c, v >= 0.
struct CanonicalForm6 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double v = 0.0;
    cplx d;
    cplx e;
    cplx f;
    cplx lambda2;
    cplx lambda3;

    ComplexMatrix matrix() const;
};

// Real family for defect >= 2: entries (1,4)=1, (2,5)=b, (3,5)=c, (4,5)=d,
// (3,6)=e, (4,6)=f, (5,6)=g, (6,6)=h (1-based).
struct Defect2Form {
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double e = 0.0;
    double f = 0.0;
    double g = 0.0;
    double h = 0.0;

    ComplexMatrix matrix() const;
    // Largest violation of the norm and orthogonality identities.
    double constraint_residual() const;
    // Sign rules, identities within tol, and the e = 0 => c = 0 convention.
    bool admissible(double tol = 1e-8) const;
};

template <typename Form>
struct Canonical {
    Form form;
    ComplexMatrix unitary;  // form.matrix() = e^{i theta} U A U*
    double theta = 0.0;
    double residual = 0.0;
};

Canonical<CanonicalForm6> canonicalize_rank3(const PartialIsometry& a);

// Throws std::invalid_argument if rank != 3 or defect < 2, NotRealizable if g cannot be
// made real. In the strata where ker C is two-dimensional the representative with f = 0
// is chosen.
Canonical<Defect2Form> canonicalize_defect2(const PartialIsometry& a);

// Scalars are the only matrices commuting with A and A*.
bool is_unitarily_irreducible(const ComplexMatrix& a);
// Irreducibility of [[0, B], [0, C]]: B full rank and C irreducible.
bool is_unitarily_irreducible_blockform(const ComplexMatrix& b, const ComplexMatrix& c);

// Assemble [[0, B], [0, C]] with B = (I - C*C)^{1/2}; requires ||C|| <= 1.
ComplexMatrix assemble_from_contraction(const ComplexMatrix& c);

}  // namespace kippen::pisom
