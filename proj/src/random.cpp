#include "kippen/random.hpp"

#include <cmath>
#include <numbers>

namespace kippen {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

linalg::cplx Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::size_t Rng::index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

linalg::ComplexMatrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
    linalg::ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
    return m;
}

linalg::ComplexMatrix haar_unitary(Rng& rng, std::size_t n) {
    auto f = linalg::qr(ginibre(rng, n, n));
    for (std::size_t j = 0; j < n; ++j) {
        const linalg::cplx d = f.r(j, j);
        const linalg::cplx ph = std::abs(d) > 0.0 ? d / std::abs(d) : linalg::cplx(1.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) f.q(i, j) *= ph;
    }
    return f.q;
}

}  // namespace kippen
