#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kippen/geometry.hpp"
#include "kippen/linalg.hpp"

namespace kippen::verify {

inline constexpr double kPaperTol = 5e-3;  // two printed decimals

struct TheoremReport {
    std::string id;
    std::string claim;
    bool exploratory = false;  // reported, never counted as failure
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t rejected = 0;  // hypothesis-sampling rejections
    double worst_residual = 0.0;
    std::vector<std::string> witnesses;  // compact JSON, at most five
    std::map<std::string, double> counters;
};

std::vector<std::string> theorem_ids();

// Throws std::invalid_argument for an unknown id.
TheoremReport run_theorem(const std::string& id, std::uint64_t seed, std::size_t trials);

// All theorems, or only `only` when given.
std::vector<TheoremReport> run_suite(std::uint64_t seed, std::size_t trials, const std::optional<std::string>& only = {});

// Non-exploratory failures.
std::size_t total_failures(const std::vector<TheoremReport>& reports);

std::string report_json(std::uint64_t seed, const std::vector<TheoremReport>& reports);
std::string report_table(const std::vector<TheoremReport>& reports);

struct ExampleRow {
    std::string name;
    std::string quantity;
    std::string expected;
    std::string computed;
    bool pass = false;
};

struct PaperExamplesReport {
    std::vector<ExampleRow> rows;
    bool all_pass() const;
};

PaperExamplesReport reproduce_paper_examples(const std::filesystem::path& data_dir);
std::string examples_table(const PaperExamplesReport& report);

// Conic fitted to the curve points that lie on none of the given circles (centered at 0)
// and away from eigenvalue crossings.
geometry::Ellipse recover_ellipse(const linalg::ComplexMatrix& a, std::span<const double> circle_radii,
                                  std::size_t steps = 720);

}  // namespace kippen::verify
