#pragma once

// Perron-H-eigenpairs of nonnegative and Metzler tensors.
//
// The eigenvector is computed by the shifted power iteration
//     y = (B + I) x^{k-1},   x <- y^{[1/(k-1)]} / ||y^{[1/(k-1)]}||_1
// starting from the uniform vector. At every step the Collatz-Wielandt
// quotients (B x^{k-1})_i / x_i^{k-1} bracket rho(B); the iteration stops when
// the bracket's relative width drops below tol and the residual meets
// residual <= 10 * tol * |value| + 1e-12.

#include <span>

#include "hyperpos/tensor.hpp"

namespace hyperpos {

struct PowerOptions {
    double tol = 1e-10;
    int max_iter = 10000;
    // Skip the strong-connectivity check (the bracket stays a valid
    // enclosure, but convergence is no longer guaranteed).
    bool assume_irreducible = false;
};

struct EigenPair {
    double value = 0.0;
    Vector vector;  // entrywise positive, ||vector||_1 = 1
    double residual = 0.0;
    int iterations = 0;
    double lower = 0.0;  // final eigenvalue bracket
    double upper = 0.0;
};

// rho(B) for a nonnegative, strongly connected B.
// Errors: NotNonnegative, NotIrreducible, MaxIterExceeded (MaxIterError
// carrying the bracket and the last iterate).
EigenPair perron_nonnegative(const CubicalTensor& b, const PowerOptions& opts = {});

// lambda(A) = rho(B) - s for A = B - s I.
EigenPair perron_metzler(const CubicalTensor& a, const PowerOptions& opts = {});

// ||A x^{k-1} - lambda x^{[k-1]}||_inf
double eigen_residual(const CubicalTensor& a, double lambda, std::span<const double> x);

struct CentralityResult {
    Vector scores;  // ||scores||_1 = 1
    double eigenvalue = 0.0;
    int order = 0;
    double residual = 0.0;
};

// H-eigenvector centrality. Metzler input is reduced to its nonnegative part,
// which has the same Perron vector; the reported eigenvalue is the input's.
// Requires strong connectivity (NotIrreducible otherwise).
CentralityResult hec_centrality(const CubicalTensor& b, const PowerOptions& opts = {});

}  // namespace hyperpos
