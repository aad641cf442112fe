#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "neurostream/autodiff.hpp"

namespace neurostream {

struct GradSuiteRow {
    std::string op;
    double max_rel_err = 0.0;
    std::size_t trials = 0;
    std::size_t coords_checked = 0;
    std::size_t coords_skipped = 0;  // relu kink rule
};

// Finite-difference verification of every differentiable op plus the full
// two-stream classifier loss, each over `trials` random small-shape
// instances. Deterministic per seed.
std::vector<GradSuiteRow> run_gradient_suite(std::uint64_t seed, std::size_t trials);

}  // namespace neurostream
