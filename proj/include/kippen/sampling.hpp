#pragma once

#include <optional>
#include <string>

#include "kippen/pisom.hpp"
#include "kippen/random.hpp"

namespace kippen::sampling {

using pisom::Defect2Form;

// Hypothesis classes of the real defect-2 family.
enum class Stratum {
    general,           // every parameter nonzero (ce != 0, so f < 0)
    any,               // mixture of all strata below
    nilpotent,         // h = 0
    nilpotent_ceg0,    // h = 0, ceg = 0
    nilpotent_be0,     // h = 0, be = 0, ceg = 0
    half_cd0,          // c = d = 0
    half_gh0,          // g = h = 0
    no_half,           // neither c = d = 0 nor g = h = 0
    cg0,               // h != 0, cg = 0
    cg0_c_g_zero,      // h != 0, c = g = 0, d != 0
    two_circles,       // h != 0, c = f = g = 0, 0 < d < 1
    crith_plus,        // cdefgh != 0 with the plus condition solved for the (g, h) angle
};

std::string to_string(Stratum s);

// Draws an admissible form from the stratum. crith_plus may fail for a given draw of
// (b, c, d, e, f) and is retried internally; nullopt only after many failures.
std::optional<Defect2Form> sample_defect2(Rng& rng, Stratum s);

// Uniform random unitary conjugation V A V* and rotation e^{i phi}.
linalg::ComplexMatrix disguise(Rng& rng, const linalg::ComplexMatrix& a, bool rotate = true);

// Rank-3 6x6 partial isometry with defect exactly one (complex entries).
linalg::ComplexMatrix sample_defect1(Rng& rng);

// Rank-2 4x4 partial isometry [0 | Q] with nonsingular lower 2x2 block.
linalg::ComplexMatrix sample_defect0_rank2(Rng& rng);

}  // namespace kippen::sampling
