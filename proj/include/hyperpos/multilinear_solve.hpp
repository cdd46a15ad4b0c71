#pragma once

#include <optional>
#include <span>
#include <string>

#include "hyperpos/tensor.hpp"

namespace hyperpos {

struct SolveOptions {
    double tol = 1e-10;  // absolute, on ||Aneg x^{k-1} - b||_inf
    int max_iter = 100000;
    std::optional<Vector> start;  // positive; default (b / eta)^{[1/(k-1)]}
};

struct SolveReport {
    Vector solution;
    double residual = 0.0;
    int iterations = 0;
    std::string method;
    // Residuals of the accepted iterates: an iterate is accepted when its
    // residual does not exceed the previously accepted one, so the history is
    // non-increasing. The iteration itself never skips a step.
    std::vector<double> residual_history;
};

// Positive solution of Aneg x^{k-1} = b for a nonsingular M-tensor
// Aneg = eta I - B, by the fixed point x <- ((B x^{k-1} + b) / eta)^{[1/(k-1)]}.
// Nonsingularity is established from a negative Perron value of -Aneg when
// its pattern is strongly connected, and from strict diagonal dominance
// otherwise.
// Errors: NotMTensor, NotPositiveRhs, DimensionMismatch, MaxIterExceeded.
SolveReport solve_mtensor(const CubicalTensor& aneg, std::span<const double> b,
                          const SolveOptions& opts = {});

// Positive equilibrium of x' = A x^{k-1} + b.
SolveReport equilibrium_affine(const CubicalTensor& a, std::span<const double> b,
                               const SolveOptions& opts = {});

struct LvEquilibria {
    SolveReport positive;
    Vector boundary;  // the trivial equilibrium x = 0
};

// Equilibria of x' = diag(x) (A x^{k-1} + b).
LvEquilibria equilibrium_lv(const CubicalTensor& a, std::span<const double> b,
                            const SolveOptions& opts = {});

// y > 0 with (-A) y^{k-1} = 1, hence (-A) y^{k-1} > 0.
Vector find_positive_vector(const CubicalTensor& a, const SolveOptions& opts = {});

// Throws NotMTensor unless aneg is a nonsingular M-tensor; returns its split
// aneg = shift * I - nonneg.
MetzlerSplit require_nonsingular_mtensor(const CubicalTensor& aneg);

}  // namespace hyperpos
