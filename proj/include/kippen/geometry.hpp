#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "kippen/linalg.hpp"

namespace kippen::geometry {

using Point = std::complex<double>;

// Counter-clockwise hull without collinear points.
std::vector<Point> convex_hull(std::vector<Point> pts);

// Circumscribed polygon of W(A) from supporting lines at thetas (ascending, spanning 2 pi).
std::vector<Point> support_polygon(const linalg::ComplexMatrix& a, std::span<const double> thetas);

// Distance from p to the region bounded by a convex CCW polygon (0 inside).
double distance_to_convex(const std::vector<Point>& poly, Point p);

// Hausdorff distance between two convex CCW polygons regarded as regions.
double hausdorff_convex(const std::vector<Point>& p, const std::vector<Point>& q);

struct Ellipse {
    Point center;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double angle = 0.0;  // of the major axis
    std::array<Point, 2> foci;
    double fit_residual = 0.0;  // RMS algebraic residual, normalised coefficients
};

// Least-squares conic through the points; throws if it is not an ellipse.
Ellipse fit_ellipse(std::span<const Point> pts);

}  // namespace kippen::geometry
