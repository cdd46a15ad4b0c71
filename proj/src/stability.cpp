#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hyperpos/error.hpp"
#include "hyperpos/multilinear_solve.hpp"
#include "hyperpos/stability.hpp"

namespace hyperpos {

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::GloballyStable: return "GloballyStable";
        case Verdict::Unstable: return "Unstable";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

const char* to_string(Method m) noexcept {
    switch (m) {
        case Method::PerronSign: return "PerronSign";
        case Method::SharedEigenvector: return "SharedEigenvector";
        case Method::CommonPositiveVector: return "CommonPositiveVector";
        case Method::DiagDominance: return "DiagDominance";
        case Method::OnesVector: return "OnesVector";
        case Method::SisUniform: return "SisUniform";
        case Method::SisSumCondition: return "SisSumCondition";
    }
    return "Unknown";
}

namespace {

void require_same_dim(std::span<const CubicalTensor> layers) {
    if (layers.empty()) throw Error(ErrorCode::InvalidArgument, "no layers given");
    for (const auto& l : layers) {
        if (l.dim() != layers.front().dim()) {
            throw Error(ErrorCode::DimensionMismatch, "layers have different dimensions");
        }
    }
}

StabilityCertificate inconclusive(Method m, std::string note) {
    StabilityCertificate c;
    c.verdict = Verdict::Inconclusive;
    c.method = m;
    c.note = std::move(note);
    return c;
}

}  // namespace

StabilityCertificate certify_uniform(const CubicalTensor& a, double tol) {
    StabilityCertificate c;
    c.method = Method::PerronSign;
    c.eigen = perron_metzler(a);
    const double lambda = c.eigen->value;
    c.margin = std::abs(lambda);
    if (lambda < -tol) {
        c.verdict = Verdict::GloballyStable;
    } else if (lambda > tol) {
        c.verdict = Verdict::Unstable;
    } else {
        c.verdict = Verdict::Inconclusive;
        c.note = "Perron value within the +-tol band around zero";
    }
    return c;
}

StabilityCertificate quick_check_diag_dominant(const CubicalTensor& a) {
    if (!is_metzler(a)) return inconclusive(Method::DiagDominance, "not Metzler");
    if (!is_supersymmetric(a)) return inconclusive(Method::DiagDominance, "not supersymmetric");
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.dim(); ++i) {
        double diag = 0.0;
        double off = 0.0;
        for (std::size_t e = a.row_begin(i); e < a.row_end(i); ++e) {
            const auto idx = a.index(e);
            const bool on_diag = std::all_of(idx.begin(), idx.end(), [&](int c) { return c == i; });
            if (on_diag) {
                diag = a.value(e);
            } else {
                off += std::abs(a.value(e));
            }
        }
        if (!(diag < 0.0)) return inconclusive(Method::DiagDominance, "diagonal not negative");
        if (!(-diag > off)) {
            return inconclusive(Method::DiagDominance, "not strictly diagonally dominant");
        }
        margin = std::min(margin, -diag - off);
    }
    StabilityCertificate c;
    c.verdict = Verdict::GloballyStable;
    c.method = Method::DiagDominance;
    c.margin = margin;
    return c;
}

double positive_vector_margin(std::span<const CubicalTensor> layers, std::span<const double> y) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& layer : layers) {
        const Vector img = tv_product(layer, y);
        for (double v : img) margin = std::min(margin, -v);
    }
    return margin;
}

std::optional<Vector> check_ones_vector(std::span<const CubicalTensor> layers) {
    require_same_dim(layers);
    Vector ones(static_cast<std::size_t>(layers.front().dim()), 1.0);
    if (positive_vector_margin(layers, ones) > 0.0) return ones;
    return std::nullopt;
}

StabilityCertificate certify_ones_vector(std::span<const CubicalTensor> layers) {
    require_same_dim(layers);
    for (const auto& l : layers) {
        if (!is_metzler(l)) return inconclusive(Method::OnesVector, "layer is not Metzler");
    }
    auto ones = check_ones_vector(layers);
    if (!ones) return inconclusive(Method::OnesVector, "(-A_i) 1 is not positive for all layers");
    StabilityCertificate c;
    c.verdict = Verdict::GloballyStable;
    c.method = Method::OnesVector;
    c.margin = positive_vector_margin(layers, *ones);
    c.vector = std::move(ones);
    return c;
}

StabilityCertificate certify_nonuniform_shared_eigvec(std::span<const CubicalTensor> layers,
                                                      double tol) {
    require_same_dim(layers);
    if (layers.size() == 1) return certify_uniform(layers.front(), tol);

    std::vector<EigenPair> pairs;
    for (const auto& l : layers) pairs.push_back(perron_metzler(l));

    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!(pairs[i].value < -tol)) {
            auto c = inconclusive(Method::SharedEigenvector,
                                  "layer " + std::to_string(i) + " has Perron value " +
                                      std::to_string(pairs[i].value));
            c.eigen = pairs[i];
            return c;
        }
        margin = std::min(margin, -pairs[i].value);
    }
    constexpr double kVectorTol = 1e-6;
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        for (std::size_t j = 0; j < pairs[0].vector.size(); ++j) {
            if (std::abs(pairs[i].vector[j] - pairs[0].vector[j]) > kVectorTol) {
                return inconclusive(Method::SharedEigenvector,
                                    "Perron vectors of layers 0 and " + std::to_string(i) +
                                        " differ");
            }
        }
    }
    StabilityCertificate c;
    c.verdict = Verdict::GloballyStable;
    c.method = Method::SharedEigenvector;
    c.margin = margin;
    c.eigen = pairs.front();
    c.vector = pairs.front().vector;
    return c;
}

StabilityCertificate certify_common_positive_vector(std::span<const CubicalTensor> layers,
                                                    std::span<const Vector> candidates) {
    require_same_dim(layers);
    const auto n = static_cast<std::size_t>(layers.front().dim());

    // every -A_i must be a nonsingular M-tensor
    for (std::size_t i = 0; i < layers.size(); ++i) {
        try {
            require_nonsingular_mtensor(tensor_scale(layers[i], -1.0));
        } catch (const Error& e) {
            return inconclusive(Method::CommonPositiveVector,
                                "layer " + std::to_string(i) + ": " + e.what());
        }
    }

    std::vector<std::pair<std::string, Vector>> tries;
    tries.emplace_back("ones", Vector(n, 1.0));
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (!is_strongly_connected(metzler_split(layers[i]).nonneg)) continue;
        try {
            tries.emplace_back("perron[" + std::to_string(i) + "]",
                               perron_metzler(layers[i]).vector);
        } catch (const Error&) {
        }
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        try {
            tries.emplace_back("solve[" + std::to_string(i) + "]",
                               find_positive_vector(layers[i]));
        } catch (const Error&) {
        }
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].size() != n) {
            throw Error(ErrorCode::DimensionMismatch,
                        "candidate " + std::to_string(i) + " has the wrong length");
        }
        tries.emplace_back("user[" + std::to_string(i) + "]", candidates[i]);
    }

    for (auto& [label, y] : tries) {
        if (std::any_of(y.begin(), y.end(), [](double v) { return !(v > 0.0); })) continue;
        const double margin = positive_vector_margin(layers, y);
        if (margin > 0.0) {
            StabilityCertificate c;
            c.verdict = Verdict::GloballyStable;
            c.method = Method::CommonPositiveVector;
            c.margin = margin;
            c.vector = std::move(y);
            c.note = "witness: " + label;
            return c;
        }
    }
    return inconclusive(Method::CommonPositiveVector,
                        "no candidate is a common positive vector (" +
                            std::to_string(tries.size()) + " tried)");
}

StabilityCertificate certify_sis(const SisModel& model, double tol) {
    validate(model);
    const int n = model.dim();
    if (model.beta1 == 0.0) {
        if (!(model.beta2 > 0.0)) {
            throw Error(ErrorCode::InvalidModel, "beta1 = 0 requires beta2 > 0");
        }
        TensorBuilder diag(3, n);
        for (int i = 0; i < n; ++i) diag.add({i, i, i}, -model.gamma[static_cast<std::size_t>(i)]);
        const CubicalTensor t = tensor_add(tensor_scale(model.triplet, model.beta2), diag.build());
        StabilityCertificate c;
        try {
            c = certify_uniform(t, tol);
        } catch (const Error& e) {
            return inconclusive(Method::SisUniform, e.what());
        }
        c.method = Method::SisUniform;
        if (c.verdict != Verdict::GloballyStable) {
            c.verdict = Verdict::Inconclusive;
            c.note = "Perron value of beta2 C - D is not negative";
        }
        return c;
    }

    const Vector ones(static_cast<std::size_t>(n), 1.0);
    const Vector a_sums = tv_product(model.pairwise, ones);
    const Vector c_sums = tv_product(model.triplet, ones);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ones.size(); ++i) {
        const double bound = model.beta1 * a_sums[i] + model.beta2 * c_sums[i];
        margin = std::min(margin, model.gamma[i] - bound);
    }
    StabilityCertificate c;
    c.method = Method::SisSumCondition;
    c.margin = margin;
    if (margin > 0.0) {
        c.verdict = Verdict::GloballyStable;
        c.vector = ones;
    } else {
        c.verdict = Verdict::Inconclusive;
        c.note = "recovery rate does not exceed the infection row sum for every node";
    }
    return c;
}

double RateEstimate::envelope(double t) const {
    const double p = static_cast<double>(order - 2);
    return std::pow(std::pow(y0, -p) + p * coeff * t, -1.0 / p);
}

RateEstimate rate_estimate(const CubicalTensor& a, std::span<const double> x0) {
    const int k = a.order();
    if (k <= 2) {
        throw Error(ErrorCode::OrderTooLow, "rate estimates need order k > 2, got " +
                                                std::to_string(k));
    }
    if (x0.size() != static_cast<std::size_t>(a.dim())) {
        throw Error(ErrorCode::DimensionMismatch, "initial state has the wrong length");
    }
    if (std::any_of(x0.begin(), x0.end(), [](double v) { return !(v >= 0.0); }) ||
        std::all_of(x0.begin(), x0.end(), [](double v) { return v == 0.0; })) {
        throw Error(ErrorCode::InvalidArgument, "initial state must be nonnegative and nonzero");
    }
    const EigenPair pair = perron_metzler(a);
    if (pair.value == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "Perron value is zero; no rate to report");
    }

    RateEstimate r;
    r.lambda = pair.value;
    r.rate = std::abs(pair.value);
    r.order = k;
    r.delta = pair.vector;

    const double p = static_cast<double>(k - 2);
    const auto [dmin_it, dmax_it] = std::minmax_element(r.delta.begin(), r.delta.end());
    double ymax = 0.0;
    double ymin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x0.size(); ++i) {
        ymax = std::max(ymax, x0[i] / r.delta[i]);
        ymin = std::min(ymin, x0[i] / r.delta[i]);
    }
    r.y0 = ymax;
    r.coeff = r.rate * std::pow(*dmin_it, p);

    if (pair.value < 0.0) {
        r.kind = RateKind::Convergence;
        return r;
    }
    r.kind = RateKind::FiniteTimeBlowup;
    r.blowup_time = 1.0 / (p * pair.value * std::pow(ymax, p) * std::pow(*dmax_it, p));
    if (ymin > 0.0) {
        r.blowup_time_latest = 1.0 / (p * pair.value * std::pow(ymin, p) * std::pow(*dmin_it, p));
    }
    return r;
}

}  // namespace hyperpos
