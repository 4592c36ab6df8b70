#pragma once

#include <cstdint>
#include <random>

#include "kippen/linalg.hpp"

namespace kippen {

// splitmix64 mix of a base seed with stream coordinates.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// Seeded generator with platform-independent uniform and normal draws
// (std::mt19937_64 output is fully specified; the distributions here are hand-rolled
// so that a seed reproduces bit-identical samples everywhere).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }
    double uniform();                   // [0, 1)
    double uniform(double lo, double hi);
    double normal();
    linalg::cplx complex_normal();      // E|z|^2 = 1
    std::size_t index(std::size_t n);   // [0, n)

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

linalg::ComplexMatrix ginibre(Rng& rng, std::size_t rows, std::size_t cols);
linalg::ComplexMatrix haar_unitary(Rng& rng, std::size_t n);

}  // namespace kippen
