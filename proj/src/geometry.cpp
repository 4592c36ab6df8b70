#include "kippen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kippen/kipp.hpp"

namespace kippen::geometry {

namespace {

double cross(Point o, Point a, Point b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

// Angular lookup of edges of a convex CCW polygon around an interior point.
class AngularPolygon {
public:
    explicit AngularPolygon(const std::vector<Point>& poly) : poly_(poly) {
        for (const auto& v : poly_) center_ += v;
        center_ /= static_cast<double>(poly_.size());
        start_ = 0;
        angles_.resize(poly_.size());
        for (std::size_t i = 0; i < poly_.size(); ++i) angles_[i] = std::arg(poly_[i] - center_);
        start_ = static_cast<std::size_t>(std::min_element(angles_.begin(), angles_.end()) - angles_.begin());
        sorted_.resize(poly_.size());
        for (std::size_t k = 0; k < poly_.size(); ++k) sorted_[k] = angles_[(start_ + k) % poly_.size()];
    }

    double distance(Point p) const {
        const std::size_t n = poly_.size();
        const double a = std::arg(p - center_);
        // first sorted vertex with angle > a; the crossing edge ends there
        const std::size_t k = static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), a) - sorted_.begin());
        const std::size_t hi = (start_ + k) % n;
        const std::size_t lo = (hi + n - 1) % n;
        if (cross(poly_[lo], poly_[hi], p) >= 0.0) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        constexpr std::size_t kWindow = 16;
        const std::size_t span = std::min(n, 2 * kWindow + 1);
        for (std::size_t s = 0; s < span; ++s) {
            const std::size_t i = (lo + n - std::min(kWindow, n / 2) + s) % n;
            best = std::min(best, segment_distance(p, poly_[i], poly_[(i + 1) % n]));
        }
        return best;
    }

private:
    const std::vector<Point>& poly_;
    Point center_{};
    std::size_t start_ = 0;
    std::vector<double> angles_;
    std::vector<double> sorted_;
};

double directed(const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    if (to.size() >= 3) {
        const AngularPolygon ap(to);
        for (const auto& p : from) worst = std::max(worst, ap.distance(p));
    } else {
        for (const auto& p : from) worst = std::max(worst, distance_to_convex(to, p));
    }
    return worst;
}

}  // namespace

std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<Point> support_polygon(const linalg::ComplexMatrix& a, std::span<const double> thetas) {
    const std::size_t n = thetas.size();
    if (n < 3) throw std::invalid_argument("support_polygon: need at least three directions");
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = kipp::support_value(a, thetas[i]);
    std::vector<Point> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double c1 = std::cos(thetas[i]);
        const double s1 = std::sin(thetas[i]);
        const double c2 = std::cos(thetas[j]);
        const double s2 = std::sin(thetas[j]);
        // x c - y s = h
        const double det = -c1 * s2 + s1 * c2;
        const double x = (h[i] * (-s2) - (-s1) * h[j]) / det;
        const double y = (c1 * h[j] - c2 * h[i]) / det;
        v[i] = {x, y};
    }
    std::reverse(v.begin(), v.end());
    return v;
}

double distance_to_convex(const std::vector<Point>& poly, Point p) {
    const std::size_t n = poly.size();
    if (n == 0) throw std::invalid_argument("distance_to_convex: empty polygon");
    if (n == 1) return std::abs(p - poly[0]);
    if (n == 2) return segment_distance(p, poly[0], poly[1]);
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % n];
        if (cross(a, b, p) < 0.0) inside = false;
        best = std::min(best, segment_distance(p, a, b));
    }
    return inside ? 0.0 : best;
}

double hausdorff_convex(const std::vector<Point>& p, const std::vector<Point>& q) {
    return std::max(directed(p, q), directed(q, p));
}

Ellipse fit_ellipse(std::span<const Point> pts) {
    if (pts.size() < 6) throw std::invalid_argument("fit_ellipse: need at least six points");
    Point mean{};
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(pts.size());
    double scale = 0.0;
    for (const auto& p : pts) scale += std::norm(p - mean);
    scale = std::sqrt(scale / static_cast<double>(pts.size()));
    if (scale == 0.0) throw std::invalid_argument("fit_ellipse: coincident points");

    linalg::ComplexMatrix d(pts.size(), 6);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point u = (pts[i] - mean) / scale;
        const double x = u.real();
        const double y = u.imag();
        d(i, 0) = x * x;
        d(i, 1) = x * y;
        d(i, 2) = y * y;
        d(i, 3) = x;
        d(i, 4) = y;
        d(i, 5) = 1.0;
    }
    const auto s = linalg::svd(d);
    double c[6];
    for (int k = 0; k < 6; ++k) c[k] = s.v(static_cast<std::size_t>(k), 5).real();
    const double A = c[0], B = c[1], C = c[2], D = c[3], E = c[4], F = c[5];
    if (B * B - 4.0 * A * C >= 0.0) throw std::runtime_error("fit_ellipse: conic is not an ellipse");

    const double det = 4.0 * A * C - B * B;
    const double x0 = (B * E - 2.0 * C * D) / det;
    const double y0 = (B * D - 2.0 * A * E) / det;
    const double f0 = A * x0 * x0 + B * x0 * y0 + C * y0 * y0 + D * x0 + E * y0 + F;
    // eigen-decomposition of [[A, B/2], [B/2, C]]
    const double tr = A + C;
    const double disc = std::sqrt(std::max(0.0, 0.25 * (A - C) * (A - C) + 0.25 * B * B));
    const double l1 = 0.5 * tr + disc;
    const double l2 = 0.5 * tr - disc;
    const double ax1 = std::sqrt(-f0 / l1);
    const double ax2 = std::sqrt(-f0 / l2);
    // eigenvector of l2 (larger axis when l1, l2 > 0)
    double ang = 0.5 * std::atan2(B, A - C);  // direction of l1
    double major = ax1;
    double minor = ax2;
    if (ax2 > ax1) {
        ang += 0.5 * std::numbers::pi;
        major = ax2;
        minor = ax1;
    }
    if (!std::isfinite(major) || !std::isfinite(minor)) throw std::runtime_error("fit_ellipse: degenerate conic");

    Ellipse e;
    e.center = mean + scale * Point(x0, y0);
    e.semi_major = scale * major;
    e.semi_minor = scale * minor;
    e.angle = ang;
    const double focal = std::sqrt(std::max(0.0, e.semi_major * e.semi_major - e.semi_minor * e.semi_minor));
    const Point dir = std::polar(1.0, ang);
    e.foci = {e.center - focal * dir, e.center + focal * dir};
    e.fit_residual = s.sigma[5] / std::sqrt(static_cast<double>(pts.size()));
    return e;
}

}  // namespace kippen::geometry
