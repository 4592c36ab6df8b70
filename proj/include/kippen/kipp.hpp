#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kippen/linalg.hpp"

namespace kippen::kipp {

using linalg::ComplexMatrix;
using linalg::cplx;
using linalg::TrigPolynomial;

// det(Re(e^{i theta} A) - lambda I), exact for n x n input (harmonics up to n).
TrigPolynomial kippenhahn_polynomial(const ComplexMatrix& a);

struct CurvePoint {
    double theta = 0.0;
    std::size_t branch = 0;  // eigenvalue index, ascending
    double lambda = 0.0;
    cplx z;                  // e^{-i theta}(lambda - i lambda'(theta))
};

// steps samples theta_j = 2 pi j / steps, n branches each; ordered by theta then branch.
std::vector<CurvePoint> trace_curve(const ComplexMatrix& a, std::size_t steps);

// Largest eigenvalue of Re(e^{i theta} A).
double support_value(const ComplexMatrix& a, double theta);

struct NumericalRadius {
    double value = 0.0;
    std::vector<double> argmax_thetas;  // in (-pi, pi]
};

NumericalRadius numerical_radius(const ComplexMatrix& a);

enum class Source { closed_form, oracle };
enum class DiskClass { circular_disk, non_disk, undetermined };

std::string to_string(Source s);
std::string to_string(DiskClass d);

struct Circle {
    cplx center;
    double radius = 0.0;
    bool degenerate = false;
    Source source = Source::oracle;
    double residual = 0.0;  // largest harmonic residual at +-radius
};

struct CircleReport {
    std::vector<Circle> circles;  // ascending (|center|, radius)
    DiskClass disk = DiskClass::non_disk;
    double numerical_radius = 0.0;
};

struct DetectOptions {
    double coefficient_tol = 1e-7;  // relative to max(1, largest coefficient)
    double merge_tol = 1e-6;        // radii / centers closer than this are one circle
    double oracle_tol = 1e-6;       // eigenvalue cross-check on a 64-point grid
    double disk_tol = 1e-7;
    double gray_zone = 1e-5;
    double center_cluster = 1e-6;
    double coarse_cluster = 1e-3;

    // Inputs rounded to about four digits and projected back onto the partial isometries.
    static DetectOptions rounded();
};

CircleReport detect_circles(const ComplexMatrix& a, const DetectOptions& opts = {});

// P_{A - center I} divisible by lambda^2 - radius^2 (by lambda when radius == 0).
bool contains_circle(const ComplexMatrix& a, cplx center, double radius, double tol = 1e-7);
bool contains_point_circle(const ComplexMatrix& a, cplx center = 0.0, double tol = 1e-7);

// Largest harmonic residual of P_{A - center I} at +-radius, relative to max(1, |coeffs|).
double divisibility_residual(const ComplexMatrix& a, cplx center, double radius);

// max over a theta grid of |det(Re(e^{i theta}(A - center I)) -+ radius I)|.
double circle_oracle_residual(const ComplexMatrix& a, cplx center, double radius, std::size_t grid = 64);

// Range over a theta grid of each sorted eigenvalue of Re(e^{i theta}A), for inspecting
// how the curve splits into nested components.
struct BranchRange {
    std::size_t branch = 0;
    double min = 0.0;
    double max = 0.0;
};
std::vector<BranchRange> branch_ranges(const ComplexMatrix& a, std::size_t steps);

}  // namespace kippen::kipp
