#pragma once

// Stability certificates for positive polynomial systems built on Metzler
// tensors:
//   x' = A x^{k-1}                      (uniform)
//   x' = A_k x^{k-1} + ... + A_2 x      (layered, non-uniform)
//   simplicial SIS
//
// A certificate is only ever GloballyStable when a sufficient condition has
// been verified; failure to verify is Inconclusive, never Unstable. The only
// instability verdict comes from a strictly positive Perron value of a single
// homogeneous layer.

#include <optional>
#include <span>
#include <string>

#include "hyperpos/sis.hpp"
#include "hyperpos/spectral.hpp"
#include "hyperpos/tensor.hpp"

namespace hyperpos {

enum class Verdict { GloballyStable, Unstable, Inconclusive };

enum class Method {
    PerronSign,
    SharedEigenvector,
    CommonPositiveVector,
    DiagDominance,
    OnesVector,
    SisUniform,
    SisSumCondition,
};

const char* to_string(Verdict v) noexcept;
const char* to_string(Method m) noexcept;

struct StabilityCertificate {
    Verdict verdict = Verdict::Inconclusive;
    Method method = Method::PerronSign;
    std::optional<EigenPair> eigen;  // Perron pair that decided the verdict
    std::optional<Vector> vector;    // positive witness y
    double margin = 0.0;             // distance of the decisive quantity from its threshold
    std::string note;
};

inline constexpr double kDefaultSignTol = 1e-8;

// Sign of the Perron value; Inconclusive inside [-tol, tol].
StabilityCertificate certify_uniform(const CubicalTensor& a, double tol = kDefaultSignTol);

// Supersymmetric, strictly diagonally dominant, negative diagonal.
StabilityCertificate quick_check_diag_dominant(const CubicalTensor& a);

// The all-ones vector if (-A_i) 1^{k_i-1} > 0 for every layer.
std::optional<Vector> check_ones_vector(std::span<const CubicalTensor> layers);

// Certificate form of check_ones_vector (layers must be Metzler).
StabilityCertificate certify_ones_vector(std::span<const CubicalTensor> layers);

// Every layer has a negative Perron value and all Perron vectors agree
// componentwise within 1e-6.
StabilityCertificate certify_nonuniform_shared_eigvec(std::span<const CubicalTensor> layers,
                                                      double tol = kDefaultSignTol);

// Searches for y > 0 with (-A_i) y^{k_i-1} > 0 for all i. Candidates in
// order: ones, each layer's Perron vector, the solution of
// (-A_j) y^{k_j-1} = 1 for each j, then `candidates`.
StabilityCertificate certify_common_positive_vector(std::span<const CubicalTensor> layers,
                                                    std::span<const Vector> candidates = {});

// Smallest component of (-A_i) y^{k_i-1} over all layers.
double positive_vector_margin(std::span<const CubicalTensor> layers, std::span<const double> y);

// beta1 == 0: sign test on beta2 C - diag(gamma) (order 3).
// beta1 > 0:  gamma_i > beta1 sum_j a_ij + beta2 sum_jk c_ijk for all i.
StabilityCertificate certify_sis(const SisModel& model, double tol = kDefaultSignTol);

enum class RateKind { Convergence, FiniteTimeBlowup };

struct RateEstimate {
    RateKind kind = RateKind::Convergence;
    double lambda = 0.0;  // Perron value
    double rate = 0.0;    // |lambda|
    int order = 0;
    Vector delta;  // Perron vector, ||delta||_1 = 1

    // Blowup only. The scaled state y = x_i / delta_i obeys
    //   lambda dmin^{k-2} y^{k-1} <= y' <= lambda dmax^{k-2} y^{k-1}
    // along the extremal components, so divergence happens inside
    // [blowup_time, blowup_time_latest]. Both equal x0^{2-k} / ((k-2) lambda)
    // for the scalar equation x' = lambda x^{k-1}.
    std::optional<double> blowup_time;
    std::optional<double> blowup_time_latest;

    // Convergence only: upper bound on max_i x_i(t) / delta_i.
    double envelope(double t) const;

    double y0 = 0.0;      // max_i x0_i / delta_i
    double coeff = 0.0;   // |lambda| * min_i delta_i^{k-2}
};

// Errors: OrderTooLow for k = 2, InvalidArgument when lambda is zero or x0 is
// not a nonzero nonnegative vector.
RateEstimate rate_estimate(const CubicalTensor& a, std::span<const double> x0);

}  // namespace hyperpos
