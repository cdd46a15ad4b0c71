#include <algorithm>
#include <cmath>
#include <string>

#include "hyperpos/control.hpp"
#include "hyperpos/error.hpp"

namespace hyperpos {

const char* to_string(GainKind kind) noexcept {
    return kind == GainKind::ScalarDiag ? "ScalarDiag" : "TensorGain";
}

double perron_upper_value(const CubicalTensor& a, const PowerOptions& opts) {
    const MetzlerSplit split = metzler_split(a);
    if (is_strongly_connected(split.nonneg)) {
        try {
            return perron_metzler(a, opts).value;
        } catch (const MaxIterError& e) {
            if (e.bracket()) return e.bracket()->second;
            throw;
        }
    }
    PowerOptions relaxed = opts;
    relaxed.assume_irreducible = true;
    try {
        return perron_metzler(a, relaxed).upper;
    } catch (const MaxIterError& e) {
        if (e.bracket()) return e.bracket()->second;
        throw;
    }
}

GainDesign design_scalar_gain(const CubicalTensor& a, double margin, const PowerOptions& opts) {
    if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "margin must be >= 0");
    const EigenPair open = perron_metzler(a, opts);
    GainDesign g;
    g.kind = GainKind::ScalarDiag;
    g.open_loop_value = open.value;
    g.margin = margin;
    g.q = -(open.value + margin);
    g.unnecessary = open.value <= -margin;
    g.closed_loop_value = perron_metzler(closed_loop(a, g), opts).value;
    g.cost = std::abs(g.q);
    return g;
}

namespace {

CubicalTensor masked_gain(const CubicalTensor& b, const Mask& mask, double alpha) {
    TensorBuilder d(b.order(), b.dim());
    for (const auto& idx : mask) {
        const double v = b.at(idx);
        if (v != 0.0) d.add(idx, -alpha * v);
    }
    return d.build();
}

}  // namespace

GainDesign design_tensor_gain(const CubicalTensor& a, const Mask& mask, double margin, double tol,
                              std::string mask_description, const PowerOptions& opts) {
    if (!(margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "margin must be >= 0");
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "bisection tolerance must be positive");
    for (const auto& idx : mask) {
        if (idx.size() != static_cast<std::size_t>(a.order())) {
            throw Error(ErrorCode::DimensionMismatch, "mask tuple has the wrong length");
        }
        for (int c : idx.components()) {
            if (c < 0 || c >= a.dim()) {
                throw Error(ErrorCode::DimensionMismatch, "mask tuple index out of range");
            }
        }
        if (idx.is_diagonal()) {
            throw Error(ErrorCode::InvalidArgument, "mask may only contain off-diagonal tuples");
        }
    }
    const EigenPair open = perron_metzler(a, opts);
    const MetzlerSplit split = metzler_split(a);

    GainDesign g;
    g.kind = GainKind::TensorGain;
    g.open_loop_value = open.value;
    g.margin = margin;
    g.mask_description = std::move(mask_description);

    auto value_at = [&](double alpha) {
        return perron_upper_value(tensor_add(a, masked_gain(split.nonneg, mask, alpha)), opts);
    };

    if (open.value <= -margin) {
        g.unnecessary = true;
        g.alpha = 0.0;
        g.d = CubicalTensor(a.order(), a.dim());
        g.closed_loop_value = open.value;
        return g;
    }
    const double full = value_at(1.0);
    if (!(full <= -margin)) {
        throw Error(ErrorCode::InfeasibleMask,
                    "closed-loop Perron value at alpha = 1 is " + std::to_string(full) +
                        ", above the target " + std::to_string(-margin));
    }
    double lo = 0.0, hi = 1.0, hi_value = full;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double v = value_at(mid);
        ++g.bisection_steps;
        if (v <= -margin) {
            hi = mid;
            hi_value = v;
        } else {
            lo = mid;
        }
    }
    g.alpha = hi;
    g.d = masked_gain(split.nonneg, mask, hi);
    g.closed_loop_value = hi_value;
    for (double v : g.d->values()) g.cost += std::abs(v);
    return g;
}

CubicalTensor closed_loop(const CubicalTensor& a, const GainDesign& design) {
    if (design.kind == GainKind::ScalarDiag) return shift_diagonal(a, design.q);
    if (!design.d) return a;
    if (design.d->order() != a.order() || design.d->dim() != a.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "gain tensor shape does not match the plant");
    }
    return tensor_add(a, *design.d);
}

Mask mask_all_off_diagonal(const CubicalTensor& a) {
    Mask m;
    for (std::size_t e = 0; e < a.nnz(); ++e) {
        IndexTuple t = a.tuple(e);
        if (!t.is_diagonal() && a.value(e) > 0.0) m.insert(std::move(t));
    }
    return m;
}

Mask mask_hyperedge(const CubicalTensor& a, const IndexTuple& edge) {
    if (edge.size() != static_cast<std::size_t>(a.order())) {
        throw Error(ErrorCode::DimensionMismatch, "hyperedge has the wrong number of nodes");
    }
    std::vector<int> key = edge.components();
    std::sort(key.begin(), key.end());
    Mask m;
    for (std::size_t e = 0; e < a.nnz(); ++e) {
        auto idx = a.index(e);
        std::vector<int> sorted(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        if (sorted == key && !a.tuple(e).is_diagonal()) m.insert(a.tuple(e));
    }
    return m;
}

}  // namespace hyperpos
