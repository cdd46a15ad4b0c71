#pragma once

#include "hyperpos/tensor.hpp"

namespace hyperpos {

// Simplicial SIS epidemic model on a hypergraph with pairwise and triadic
// contacts:
//   x_i' = -gamma_i x_i + (1 - x_i) (beta1 (A x)_i + beta2 (C x^2)_i)
struct SisModel {
    CubicalTensor pairwise{2, 1};  // order 2, nonnegative
    CubicalTensor triplet{3, 1};   // order 3, nonnegative
    double beta1 = 0.0;
    double beta2 = 0.0;
    Vector gamma;  // recovery rates, positive

    int dim() const { return triplet.dim(); }
};

// Throws InvalidModel on shape or sign violations.
void validate(const SisModel& model);

}  // namespace hyperpos
