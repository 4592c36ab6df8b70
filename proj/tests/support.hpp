#pragma once

#include <Eigen/Dense>
#include <filesystem>

#include "kippen/linalg.hpp"
#include "kippen/random.hpp"

#ifndef KIPPEN_DATA_DIR
#define KIPPEN_DATA_DIR "data"
#endif

namespace testing {

using kippen::linalg::ComplexMatrix;
using kippen::linalg::cplx;

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& e) {
    ComplexMatrix m(e.rows(), e.cols());
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
    return m;
}

inline ComplexMatrix random_hermitian(kippen::Rng& rng, std::size_t n) {
    const ComplexMatrix g = kippen::ginibre(rng, n, n);
    return 0.5 * (g + g.adjoint());
}

// det(Re(e^{i theta} A) - lambda I) straight from Eigen.
inline double eigen_kippenhahn(const ComplexMatrix& a, double lambda, double theta) {
    const Eigen::MatrixXcd e = to_eigen(a);
    const cplx ph = std::polar(1.0, theta);
    const Eigen::MatrixXcd h = 0.5 * (ph * e + std::conj(ph) * e.adjoint()) -
                               lambda * Eigen::MatrixXcd::Identity(e.rows(), e.cols());
    return h.determinant().real();
}

inline std::filesystem::path data_file(const std::string& name) {
    return std::filesystem::path(KIPPEN_DATA_DIR) / (name + ".json");
}

inline ComplexMatrix jordan(std::size_t n) {
    ComplexMatrix j(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
    return j;
}

// Odd-size seed of the family where the half-circle polynomial is singular but
// ker C and ker C* meet only in 0.
inline ComplexMatrix sharp_odd() {
    ComplexMatrix c(5, 5);
    c(0, 0) = 1.0;
    c(1, 2) = 1.0;
    c(2, 4) = 1.0;
    c(3, 1) = 1.0;
    return c;
}

inline ComplexMatrix sharp_even() {
    ComplexMatrix c(4, 4);
    c(0, 2) = 1.0;
    c(2, 1) = 1.0;
    c(3, 0) = 1.0;
    return c;
}

}  // namespace testing
