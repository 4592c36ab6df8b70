#include "kippen/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace kippen::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const ComplexMatrix& a, const char* what) {
    if (!a.square()) throw std::invalid_argument(std::string(what) + ": matrix must be square");
}

// Unitary G = [[c, s], [-conj(s), c]] with G [x; y] = [rho; 0].
struct Givens {
    double c = 1.0;
    cplx s{0.0, 0.0};
};

Givens make_givens(cplx x, cplx y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ay == 0.0) return {};
    if (ax == 0.0) return {0.0, std::conj(y) / ay};
    const double r = std::hypot(ax, ay);
    return {ax / r, (x / ax) * std::conj(y) / r};
}

// rows k, k+1 <- G * rows, columns [c0, c1)
void apply_left(ComplexMatrix& m, const Givens& g, std::size_t k, std::size_t c0, std::size_t c1) {
    for (std::size_t j = c0; j < c1; ++j) {
        const cplx a = m(k, j);
        const cplx b = m(k + 1, j);
        m(k, j) = g.c * a + g.s * b;
        m(k + 1, j) = -std::conj(g.s) * a + g.c * b;
    }
}

// columns k, k+1 <- columns * G^*, rows [r0, r1)
void apply_right_adj(ComplexMatrix& m, const Givens& g, std::size_t k, std::size_t r0, std::size_t r1) {
    for (std::size_t i = r0; i < r1; ++i) {
        const cplx a = m(i, k);
        const cplx b = m(i, k + 1);
        m(i, k) = a * g.c + b * std::conj(g.s);
        m(i, k + 1) = -a * g.s + b * g.c;
    }
}

void hessenberg(ComplexMatrix& h, ComplexMatrix& q) {
    const std::size_t n = h.rows();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        std::vector<cplx> v(len);
        double norm = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            v[i] = h(k + 1 + i, k);
            norm += std::norm(v[i]);
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const cplx phase = std::abs(v[0]) > 0.0 ? v[0] / std::abs(v[0]) : cplx(1.0, 0.0);
        v[0] += phase * norm;
        double vv = 0.0;
        for (const auto& x : v) vv += std::norm(x);
        if (vv == 0.0) continue;
        // H <- (I - 2 v v*/vv) H
        for (std::size_t j = 0; j < n; ++j) {
            cplx dot{};
            for (std::size_t i = 0; i < len; ++i) dot += std::conj(v[i]) * h(k + 1 + i, j);
            dot *= 2.0 / vv;
            for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= v[i] * dot;
        }
        // H <- H (I - 2 v v*/vv), Q <- Q (I - 2 v v*/vv)
        for (auto* m : {&h, &q}) {
            for (std::size_t i = 0; i < n; ++i) {
                cplx dot{};
                for (std::size_t j = 0; j < len; ++j) dot += (*m)(i, k + 1 + j) * v[j];
                dot *= 2.0 / vv;
                for (std::size_t j = 0; j < len; ++j) (*m)(i, k + 1 + j) -= dot * std::conj(v[j]);
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

cplx wilkinson_shift(const ComplexMatrix& h, std::size_t hi) {
    const cplx a = h(hi - 1, hi - 1);
    const cplx b = h(hi - 1, hi);
    const cplx c = h(hi, hi - 1);
    const cplx d = h(hi, hi);
    const cplx half = 0.5 * (a - d);
    const cplx disc = std::sqrt(half * half + b * c);
    const cplx m1 = 0.5 * (a + d) + disc;
    const cplx m2 = 0.5 * (a + d) - disc;
    return std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
}

void qr_sweep(ComplexMatrix& h, ComplexMatrix& z, std::size_t lo, std::size_t hi, cplx mu) {
    const std::size_t n = h.rows();
    for (std::size_t k = lo; k < hi; ++k) {
        cplx x;
        cplx y;
        if (k == lo) {
            x = h(lo, lo) - mu;
            y = h(lo + 1, lo);
        } else {
            x = h(k, k - 1);
            y = h(k + 1, k - 1);
        }
        const Givens g = make_givens(x, y);
        apply_left(h, g, k, k == lo ? lo : k - 1, n);
        apply_right_adj(h, g, k, 0, std::min(k + 3, hi + 1));
        apply_right_adj(z, g, k, 0, n);
        if (k > lo) h(k + 1, k - 1) = 0.0;
    }
}

void balance(ComplexMatrix& a) {
    const std::size_t n = a.rows();
    bool changed = true;
    for (int iter = 0; changed && iter < 100; ++iter) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if ((c + r) < 0.95 * s) {
                changed = true;
                for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ComplexMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("ComplexMatrix::block");
    ComplexMatrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw std::out_of_range("ComplexMatrix::set_block");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

std::vector<cplx> ComplexMatrix::column(std::size_t j) const {
    std::vector<cplx> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void ComplexMatrix::set_column(std::size_t j, std::span<const cplx> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("ComplexMatrix: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("ComplexMatrix: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("ComplexMatrix: product shape mismatch");
    ComplexMatrix m(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
        }
    return m;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> x) {
    if (x.size() != a.cols()) throw std::invalid_argument("ComplexMatrix: vector shape mismatch");
    std::vector<cplx> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a, double theta) {
    require_square(a, "hermitian_part");
    const cplx w = std::polar(1.0, theta);
    const std::size_t n = a.rows();
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const cplx v = 0.5 * (w * a(i, j) + std::conj(w * a(j, i)));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
        h(i, i) = std::real(h(i, i));
    }
    return h;
}

double vector_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
    cplx s{};
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

// ---------------------------------------------------------------- polynomials

double RealPolynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::complex<double> RealPolynomial::operator()(std::complex<double> z) const {
    std::complex<double> acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

int RealPolynomial::degree() const {
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
        if (coeffs[static_cast<std::size_t>(k)] != 0.0) return k;
    return -1;
}

RealPolynomial RealPolynomial::derivative() const {
    RealPolynomial d;
    for (std::size_t k = 1; k < coeffs.size(); ++k) d.coeffs.push_back(static_cast<double>(k) * coeffs[k]);
    return d;
}

double RealPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs) m = std::max(m, std::abs(c));
    return m;
}

RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    RealPolynomial p;
    p.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) p.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return p;
}

TrigPolynomial::TrigPolynomial(int lambda_degree, int harmonics)
    : degree_(lambda_degree),
      harmonics_(harmonics),
      c_(static_cast<std::size_t>(lambda_degree + 1) * static_cast<std::size_t>(2 * harmonics + 1)) {}

double TrigPolynomial::operator()(double lambda, double theta) const {
    double acc = 0.0;
    for (int a = degree_; a >= 0; --a) {
        cplx s{};
        for (int k = -harmonics_; k <= harmonics_; ++k) s += coeff(a, k) * std::polar(1.0, k * theta);
        acc = acc * lambda + s.real();
    }
    return acc;
}

std::vector<cplx> TrigPolynomial::harmonic(int k) const {
    std::vector<cplx> h(static_cast<std::size_t>(degree_ + 1));
    for (int a = 0; a <= degree_; ++a) h[static_cast<std::size_t>(a)] = coeff(a, k);
    return h;
}

double TrigPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, std::abs(x));
    return m;
}

std::vector<cplx> trig_interpolate(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n % 2 == 0) throw std::invalid_argument("trig_interpolate: sample count must be odd");
    const int k_max = static_cast<int>(n - 1) / 2;
    std::vector<cplx> c(n);
    for (int k = -k_max; k <= k_max; ++k) {
        cplx s{};
        for (std::size_t m = 0; m < n; ++m) {
            const double phase = -2.0 * std::numbers::pi * k * static_cast<double>(m) / static_cast<double>(n);
            s += samples[m] * std::polar(1.0, phase);
        }
        c[static_cast<std::size_t>(k + k_max)] = s / static_cast<double>(n);
    }
    return c;
}

// ---------------------------------------------------------------- Hermitian eigen

HermitianEigen hermitian_eigen(const ComplexMatrix& h_in, bool want_vectors) {
    require_square(h_in, "hermitian_eigen");
    const std::size_t n = h_in.rows();
    const double scale = std::max(1.0, h_in.max_abs());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (std::abs(h_in(i, j) - std::conj(h_in(j, i))) > 1e-10 * scale)
                throw std::invalid_argument("hermitian_eigen: matrix is not Hermitian");

    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (h_in(i, j) + std::conj(h_in(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double stop = 1e-13 * std::max(1.0, h.frobenius_norm());
    auto off = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(h(i, j));
        return std::sqrt(s);
    };

    int sweeps = 0;
    while (off() >= stop) {
        if (++sweeps > 100) throw std::runtime_error("hermitian_eigen: no convergence");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double b = std::abs(h(p, q));
                if (b < 1e-300) continue;
                const cplx omega = h(p, q) / b;
                const double app = h(p, p).real();
                const double aqq = h(q, q).real();
                const double zeta = (aqq - app) / (2.0 * b);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = [[c, s], [-s conj(omega), c conj(omega)]] on columns p, q; H <- J* H J
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx hp = h(i, p);
                    const cplx hq = h(i, q);
                    h(i, p) = c * hp - s * std::conj(omega) * hq;
                    h(i, q) = s * hp + c * std::conj(omega) * hq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx hp = h(p, j);
                    const cplx hq = h(q, j);
                    h(p, j) = c * hp - s * omega * hq;
                    h(q, j) = s * hp + c * omega * hq;
                }
                h(p, q) = 0.0;
                h(q, p) = 0.0;
                h(p, p) = h(p, p).real();
                h(q, q) = h(q, q).real();
                if (want_vectors) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const cplx vp = v(i, p);
                        const cplx vq = v(i, q);
                        v(i, p) = c * vp - s * std::conj(omega) * vq;
                        v(i, q) = s * vp + c * std::conj(omega) * vq;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return h(a, a).real() < h(b, b).real(); });
    HermitianEigen out;
    out.values.resize(n);
    if (want_vectors) out.vectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = h(order[j], order[j]).real();
        if (want_vectors)
            for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) { return hermitian_eigen(h, false).values; }

// ---------------------------------------------------------------- Schur

std::vector<cplx> Schur::eigenvalues() const {
    std::vector<cplx> ev(t.rows());
    for (std::size_t i = 0; i < t.rows(); ++i) ev[i] = t(i, i);
    return ev;
}

Schur schur(const ComplexMatrix& a) {
    require_square(a, "schur");
    const std::size_t n = a.rows();
    Schur s{ComplexMatrix::identity(n), a};
    if (n <= 1) return s;
    ComplexMatrix& h = s.t;
    ComplexMatrix& z = s.q;
    hessenberg(h, z);

    const double norm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());
    std::size_t hi = n - 1;
    int iter = 0;
    int total = 0;
    while (hi > 0) {
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (sub <= kEps * diag || sub <= kEps * kEps * norm) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            iter = 0;
            continue;
        }
        if (++total > 200 * static_cast<int>(n)) throw std::runtime_error("schur: no convergence");
        ++iter;
        cplx mu;
        if (iter % 11 == 10)
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1)) * cplx(1.0, 1.0);
        else
            mu = wilkinson_shift(h, hi);
        qr_sweep(h, z, lo, hi, mu);
    }
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;
    return s;
}

void schur_swap(Schur& s, std::size_t k) {
    const std::size_t n = s.t.rows();
    if (k + 1 >= n) throw std::out_of_range("schur_swap");
    const cplx a = s.t(k, k);
    const cplx d = s.t(k + 1, k + 1);
    if (a == d) return;
    const Givens g = make_givens(s.t(k, k + 1), d - a);
    apply_left(s.t, g, k, k, n);
    apply_right_adj(s.t, g, k, 0, k + 2);
    apply_right_adj(s.q, g, k, 0, n);
    s.t(k + 1, k) = 0.0;
}

// ---------------------------------------------------------------- SVD

Svd svd(const ComplexMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    ComplexMatrix g = a;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double tol = 1e-14;
    // columns below roundoff of the whole matrix carry no direction worth orthogonalizing
    const double floor2 = std::pow(1e-16 * std::max(a.frobenius_norm(), 1e-300), 2);

    for (int sweep = 0;; ++sweep) {
        if (sweep > 80) throw std::runtime_error("svd: no convergence");
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                cplx gamma{};
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += std::norm(g(i, p));
                    beta += std::norm(g(i, q));
                    gamma += std::conj(g(i, p)) * g(i, q);
                }
                const double ag = std::abs(gamma);
                if (alpha <= floor2 || beta <= floor2 || ag <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const cplx phase = std::conj(gamma / ag);  // e^{-i phi}
                const double zeta = (beta - alpha) / (2.0 * ag);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = c * t;
                for (auto* mat : {&g, &v}) {
                    for (std::size_t i = 0; i < mat->rows(); ++i) {
                        const cplx xp = (*mat)(i, p);
                        const cplx xq = phase * (*mat)(i, q);
                        (*mat)(i, p) = c * xp - sn * xq;
                        (*mat)(i, q) = sn * xp + c * xq;
                    }
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(g(i, j));
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return sigma[x] > sigma[y]; });

    Svd out{ComplexMatrix(m, n), std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.sigma[j] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
        if (sigma[src] > 0.0)
            for (std::size_t i = 0; i < m; ++i) out.u(i, j) = g(i, src) / sigma[src];
    }
    return out;
}

double spectral_norm(const ComplexMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return svd(a).sigma.front();
}

ComplexMatrix null_space(const ComplexMatrix& a, double rel_tol) {
    const Svd s = svd(a);
    const double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < s.sigma.size(); ++j)
        if (smax == 0.0 || s.sigma[j] <= rel_tol * smax) idx.push_back(j);
    ComplexMatrix ns(a.cols(), idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t i = 0; i < a.cols(); ++i) ns(i, k) = s.v(i, idx[k]);
    return ns;
}

ComplexMatrix range_basis(const ComplexMatrix& a, double rel_tol) {
    const Svd s = svd(a);
    const double smax = s.sigma.empty() ? 0.0 : s.sigma.front();
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < s.sigma.size(); ++j)
        if (smax > 0.0 && s.sigma[j] > rel_tol * smax) idx.push_back(j);
    ComplexMatrix r(a.rows(), idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        for (std::size_t i = 0; i < a.rows(); ++i) r(i, k) = s.u(i, idx[k]);
    return r;
}

// ---------------------------------------------------------------- QR, det, sqrt

Qr qr(const ComplexMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Qr out{ComplexMatrix::identity(m), a};
    ComplexMatrix& r = out.r;
    for (std::size_t k = 0; k < std::min(m - (m ? 1 : 0), n); ++k) {
        const std::size_t len = m - k;
        std::vector<cplx> v(len);
        double norm = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            v[i] = r(k + i, k);
            norm += std::norm(v[i]);
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const cplx phase = std::abs(v[0]) > 0.0 ? v[0] / std::abs(v[0]) : cplx(1.0, 0.0);
        v[0] += phase * norm;
        double vv = 0.0;
        for (const auto& x : v) vv += std::norm(x);
        for (std::size_t j = 0; j < n; ++j) {
            cplx dot{};
            for (std::size_t i = 0; i < len; ++i) dot += std::conj(v[i]) * r(k + i, j);
            dot *= 2.0 / vv;
            for (std::size_t i = 0; i < len; ++i) r(k + i, j) -= v[i] * dot;
        }
        for (std::size_t i = 0; i < m; ++i) {
            cplx dot{};
            for (std::size_t j = 0; j < len; ++j) dot += out.q(i, k + j) * v[j];
            dot *= 2.0 / vv;
            for (std::size_t j = 0; j < len; ++j) out.q(i, k + j) -= dot * std::conj(v[j]);
        }
        for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
    }
    return out;
}

cplx determinant(const ComplexMatrix& a) {
    require_square(a, "determinant");
    ComplexMatrix lu = a;
    const std::size_t n = a.rows();
    cplx det{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        if (lu(piv, k) == cplx{}) return {};
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            det = -det;
        }
        det *= lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = lu(i, k) / lu(k, k);
            for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return det;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
    const HermitianEigen e = hermitian_eigen(h);
    const std::size_t n = h.rows();
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(std::max(0.0, e.values[k]));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) += s * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return out;
}

// ---------------------------------------------------------------- roots

std::vector<cplx> poly_roots(const RealPolynomial& p) {
    std::vector<double> c = p.coeffs;
    const double cmax = p.max_abs_coeff();
    if (cmax == 0.0) return {};
    while (!c.empty() && std::abs(c.back()) <= 1e-13 * cmax) c.pop_back();
    std::vector<cplx> roots;
    std::size_t low = 0;
    while (low < c.size() && c[low] == 0.0) {
        roots.emplace_back(0.0, 0.0);
        ++low;
    }
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
    const std::size_t d = c.empty() ? 0 : c.size() - 1;
    if (d == 0) return roots;
    if (d == 1) {
        roots.emplace_back(-c[0] / c[1], 0.0);
        return roots;
    }
    ComplexMatrix comp(d, d);
    for (std::size_t j = 0; j < d; ++j) comp(0, j) = -c[d - 1 - j] / c[d];
    for (std::size_t i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    balance(comp);
    const RealPolynomial trimmed{c};
    const RealPolynomial dp = trimmed.derivative();
    for (const cplx& z0 : schur(comp).eigenvalues()) {
        cplx z = z0;
        const cplx fz = trimmed(z);
        const cplx dz = dp(z);
        if (std::abs(dz) > 0.0) {
            const cplx z1 = z - fz / dz;
            if (std::isfinite(z1.real()) && std::isfinite(z1.imag()) && std::abs(trimmed(z1)) <= std::abs(fz)) z = z1;
        }
        roots.push_back(z);
    }
    return roots;
}

RootResult poly_real_roots(const RealPolynomial& p, double lo, double hi) {
    RootResult out;
    if (p.max_abs_coeff() == 0.0) {
        out.identically_zero = true;
        return out;
    }
    const std::vector<cplx> z = poly_roots(p);

    struct Cluster {
        cplx sum{};
        int count = 0;
        cplx mean() const { return sum / static_cast<double>(count); }
    };
    auto radius = [](int m, cplx at) {
        const double base = m <= 1 ? 0.0 : 10.0 * std::pow(kEps, 1.0 / m);
        return std::max(1e-7, base) * std::max(1.0, std::abs(at));
    };
    // Largest multiplicity first: an m-fold root scatters at eps^(1/m), so a pair taken
    // from a triple root is farther apart than the double-root radius allows.
    std::vector<Cluster> clusters;
    std::vector<bool> used(z.size(), false);
    for (int m = static_cast<int>(z.size()); m >= 1; --m) {
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (used[i]) continue;
            std::vector<std::size_t> near;
            for (std::size_t j = 0; j < z.size(); ++j)
                if (!used[j]) near.push_back(j);
            if (near.size() < static_cast<std::size_t>(m)) continue;
            std::sort(near.begin(), near.end(),
                      [&](std::size_t a, std::size_t b) { return std::abs(z[a] - z[i]) < std::abs(z[b] - z[i]); });
            near.resize(static_cast<std::size_t>(m));
            Cluster cl;
            for (std::size_t j : near) {
                cl.sum += z[j];
                ++cl.count;
            }
            const cplx c = cl.mean();
            const bool tight = std::all_of(near.begin(), near.end(),
                                           [&](std::size_t j) { return std::abs(z[j] - c) <= radius(m, c); });
            if (!tight) continue;
            for (std::size_t j : near) used[j] = true;
            clusters.push_back(cl);
        }
    }

    for (const auto& cl : clusters) {
        const cplx mean = cl.mean();
        // the mean of an m-fold cluster keeps some of the eps^(1/m) scatter
        const double imag_tol = cl.count <= 1 ? 1e-9 : std::max(1e-9, std::pow(kEps, 1.0 / cl.count));
        if (std::abs(mean.imag()) > imag_tol * std::max(1.0, std::abs(mean))) continue;
        double r = mean.real();
        RealPolynomial d = p;
        for (int k = 1; k < cl.count; ++k) d = d.derivative();
        const RealPolynomial dd = d.derivative();
        for (int it = 0; it < 3; ++it) {
            const double f = d(r);
            const double fp = dd(r);
            if (fp == 0.0) break;
            const double r1 = r - f / fp;
            if (!std::isfinite(r1) || std::abs(d(r1)) >= std::abs(f)) break;
            r = r1;
        }
        const double slack = 1e-12 * std::max(1.0, std::abs(r));
        if (r < lo - slack || r > hi + slack) continue;
        out.roots.push_back({std::clamp(r, lo, hi), cl.count});
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) { return a.value < b.value; });
    return out;
}

}  // namespace kippen::linalg
