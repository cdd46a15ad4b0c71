#pragma once

// Canned setups: the worked examples as tensors, and the seeded simulation
// runs behind `hyperpos simulate --repro`.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hyperpos/dynamics.hpp"
#include "hyperpos/sis.hpp"

namespace hyperpos::repro {

// order 4, dim 4, off-diagonal 1, diagonal -64; lambda = -1
CubicalTensor stable_quartic();
// same with diagonal -62; lambda = +1
CubicalTensor unstable_quartic();
// unstable_quartic with every off-diagonal entry reduced to 0.5; lambda = -30.5
CubicalTensor feedback_quartic();
// 4x4 matrix, off-diagonal 1, diagonal -5; lambda = -2
CubicalTensor damping_matrix();
// order 3, dim 4, off-diagonal 0.01; beta2 = 1, gamma = 0.9, no pairwise term
SisModel sis_example();

// Uniform draw in [0, 1) with 53 random bits, independent of the standard
// library's distribution implementations.
double unit(std::mt19937_64& rng);
// Vector with entries in (lo, hi].
Vector random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi);

struct Run {
    std::string label;
    HypergraphModel model;
    Vector x0;
    SimConfig config;
};

struct Setup {
    std::string name;
    std::string description;
    std::vector<Run> runs;
};

std::vector<std::string> names();

// Errors: InvalidArgument for an unknown name.
Setup setup(std::string_view name, std::uint64_t seed);

}  // namespace hyperpos::repro
