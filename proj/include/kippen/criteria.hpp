#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kippen/kipp.hpp"
#include "kippen/linalg.hpp"
#include "kippen/pisom.hpp"

namespace kippen::criteria {

using linalg::ComplexMatrix;
using linalg::RealPolynomial;
using pisom::Defect2Form;

// Canonical parameters come out of unitary reductions, so their zeros are structural.
inline constexpr double kZeroTol = 1e-9;
inline constexpr double kCrithTol = 1e-8;

// P_A(lambda, theta) = -lambda p(lambda^2) cos(theta) + q(lambda^2).
struct PQPair {
    RealPolynomial p;  // degree <= 2 in rho
    RealPolynomial q;  // monic cubic in rho
};

PQPair pq_from_form(const Defect2Form& f);

struct Defect2Circles {
    std::vector<linalg::Root> radii;  // ascending; multiplicity as a root of q when p == 0
    bool nilpotent_branch = false;    // p vanished identically
    bool x_undefined = false;         // h != 0 and d^2 + ceg/h < 0
};

// Radii sqrt(rho) over common roots rho in [0, 1) of p and q.
Defect2Circles circles_defect2(const Defect2Form& f, double tol = kCrithTol);

// c = d = 0 or g = h = 0.
bool has_circle_half(const Defect2Form& f, double zero_tol = kZeroTol);

// 4x4 member of the two-parameter family with B = diag(1, t) and C = [[0, s], [0, h]],
// s = sqrt(1 - t^2 - h^2).
ComplexMatrix ath_matrix(double t, double h);

struct J2Reduction {
    double t = 0.0;
    double h = 0.0;
    ComplexMatrix unitary;  // U* F.matrix() U = J2 (+) ath_matrix(t, h)
};

// Throws std::invalid_argument unless has_circle_half(f).
J2Reduction reduce_J2(const Defect2Form& f, double zero_tol = kZeroTol);

// sqrt(d^2 + ceg/h); nullopt when the radicand is negative. Throws for h == 0.
std::optional<double> x_value(const Defect2Form& f, double zero_tol = kZeroTol);

struct CrithResult {
    double x = 0.0;
    double plus_residual = 0.0;
    double minus_residual = 0.0;
    bool plus_holds = false;   // radius sqrt(1 + x) / 2
    bool minus_holds = false;  // radius sqrt(1 - x) / 2
    std::vector<double> radii;
};

// Requires h != 0, c^2 + d^2 > 0 and x defined; throws std::invalid_argument otherwise.
CrithResult crith_conditions(const Defect2Form& f, double tol = kCrithTol, double zero_tol = kZeroTol);

// c = f = g = 0 with d not in {0, 1} (two circles plus the ellipse with foci 0, h).
bool two_circles_classification(const Defect2Form& f, double zero_tol = kZeroTol);

struct DiskVerdict {
    bool disk = false;
    std::string reason;
    std::optional<double> radius;  // boundary radius when disk
};

DiskVerdict disk_classification(const Defect2Form& f, double tol = kCrithTol, double zero_tol = kZeroTol);

// Rank-3 partial isometry: defect 0 or 1 is never a disk; defect >= 2 goes through the
// canonical form.
DiskVerdict disk_classification(const pisom::PartialIsometry& a, double tol = kCrithTol);

// Left side minus right side of the derivative condition 3x^2 + 2h^2 x + h^2 + e^2 - d^2 - 1
// > 4hx sqrt(1 + x).
double derivative_margin(const Defect2Form& f, double x);

enum class HalfShape { disk, cone_to_one, cone_to_ellipse, ovular_carrier, ath_carrier };
std::string to_string(HalfShape s);

struct HalfShapeResult {
    HalfShape shape = HalfShape::disk;
    std::optional<double> radius;  // disk case
};

// Shape of W(A) when C(A) contains the circle of radius 1/2.
HalfShapeResult nrc_half_shape(const Defect2Form& f, double zero_tol = kZeroTol);

struct InterlacingResult {
    std::vector<double> eigenvalues;  // closed form, ascending
    int negative = 0;
    int positive = 0;
    bool holds = false;  // four negative, one positive
};

// Leading 5x5 block of A + A^T - I for the real family.
ComplexMatrix interlacing_block(const Defect2Form& f);
InterlacingResult interlacing_bound_check(const Defect2Form& f);

// Radii predicted for the nilpotent ceg = 0, be = 0 stratum: {0, r2, r3}.
std::vector<double> nilpotent_be0_radii(double b, double c, double e);

}  // namespace kippen::criteria
