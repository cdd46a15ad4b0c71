#pragma once

// Feedback design for x' = A x^{k-1} + u.
//   scalar gain  u_i = q x_i^{k-1}   closed loop A + q I
//   tensor gain  u = D x^{k-1}        closed loop A + D, D = -alpha * B|mask

#include <optional>
#include <set>
#include <string>

#include "hyperpos/spectral.hpp"
#include "hyperpos/tensor.hpp"

namespace hyperpos {

using Mask = std::set<IndexTuple>;

enum class GainKind { ScalarDiag, TensorGain };
const char* to_string(GainKind kind) noexcept;

struct GainDesign {
    GainKind kind = GainKind::ScalarDiag;
    double q = 0.0;
    std::optional<CubicalTensor> d;
    std::string mask_description;
    double alpha = 0.0;
    double open_loop_value = 0.0;
    double closed_loop_value = 0.0;
    double margin = 0.0;       // requested: closed-loop value <= -margin
    bool unnecessary = false;  // open loop already met the margin
    double cost = 0.0;         // |q|, or the sum of |D| entries
    int bisection_steps = 0;
};

// q = -(lambda(A) + margin).
GainDesign design_scalar_gain(const CubicalTensor& a, double margin,
                              const PowerOptions& opts = {});

// Smallest alpha in [0, 1] (to within `tol`) with lambda(A + D(alpha)) <= -margin.
// Errors: InfeasibleMask when alpha = 1 is not enough; NotMetzler, NotIrreducible
// for the open loop.
GainDesign design_tensor_gain(const CubicalTensor& a, const Mask& mask, double margin,
                              double tol = 1e-10, std::string mask_description = "custom",
                              const PowerOptions& opts = {});

// A + q I or A + D.
CubicalTensor closed_loop(const CubicalTensor& a, const GainDesign& design);

// Every stored off-diagonal entry of A.
Mask mask_all_off_diagonal(const CubicalTensor& a);

// The stored entries of A whose index is a permutation of `edge`; with
// alpha = 1 the hyperedge disappears from the closed loop.
Mask mask_hyperedge(const CubicalTensor& a, const IndexTuple& edge);

// Perron value of a Metzler tensor, falling back to the upper end of the
// Collatz-Wielandt bracket (a valid upper bound) when the pattern is not
// strongly connected or the iteration stalls.
double perron_upper_value(const CubicalTensor& a, const PowerOptions& opts = {});

}  // namespace hyperpos
