#include <algorithm>
#include <cmath>
#include <string>

#include "hyperpos/error.hpp"
#include "hyperpos/spectral.hpp"

namespace hyperpos {
namespace {

// Power iteration on B + I. `shift` is only used for reporting: the returned
// value is rho(B) - shift, and the residual target refers to that value.
EigenPair power_iterate(const CubicalTensor& b, double shift, const PowerOptions& opts) {
    const auto n = static_cast<std::size_t>(b.dim());
    const int k = b.order();
    const auto& kern = simd::active();
    const auto rows = b.rows();

    if (n == 1) {
        const double rho = b.diagonal(0);
        return EigenPair{rho - shift, Vector{1.0}, 0.0, 0, rho - shift, rho - shift};
    }

    Vector x(n, 1.0 / static_cast<double>(n));
    Vector y(n), xp(n);
    double lo = 0.0, hi = 0.0;
    for (int it = 0; it <= opts.max_iter; ++it) {
        kern.tv_rows(rows, x.data(), y.data());
        kern.ipow(n, x.data(), k - 1, xp.data());
        kern.ratio_bounds(n, y.data(), xp.data(), &lo, &hi);

        const double mid = 0.5 * (lo + hi);
        const double width = (hi - lo) / std::max(1.0, std::abs(hi));
        if (width < opts.tol) {
            double residual = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                residual = std::max(residual, std::abs(y[i] - mid * xp[i]));
            }
            const double value = mid - shift;
            if (residual <= 10.0 * opts.tol * std::abs(value) + 1e-12) {
                return EigenPair{value, x, residual, it, lo - shift, hi - shift};
            }
        }
        if (it == opts.max_iter) break;

        // x <- ((B + I) x^{k-1})^{[1/(k-1)]}, normalized
        kern.axpy(n, 1.0, xp.data(), y.data());
        double norm = 0.0;
        const double inv = 1.0 / static_cast<double>(k - 1);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::pow(y[i], inv);
            norm += x[i];
        }
        for (double& v : x) v /= norm;
    }
    throw MaxIterError("power iteration did not converge in " + std::to_string(opts.max_iter) +
                           " iterations; bracket [" + std::to_string(lo - shift) + ", " +
                           std::to_string(hi - shift) + "]",
                       x, std::make_pair(lo - shift, hi - shift));
}

}  // namespace

EigenPair perron_nonnegative(const CubicalTensor& b, const PowerOptions& opts) {
    if (!is_nonnegative(b)) {
        throw Error(ErrorCode::NotNonnegative, "Perron iteration needs a nonnegative tensor");
    }
    if (!opts.assume_irreducible && !is_strongly_connected(b)) {
        throw Error(ErrorCode::NotIrreducible,
                    "tensor is not strongly connected (mode-sum pattern)");
    }
    return power_iterate(b, 0.0, opts);
}

EigenPair perron_metzler(const CubicalTensor& a, const PowerOptions& opts) {
    const MetzlerSplit split = metzler_split(a);
    if (!opts.assume_irreducible && !is_strongly_connected(split.nonneg)) {
        throw Error(ErrorCode::NotIrreducible,
                    "tensor is not strongly connected (mode-sum pattern)");
    }
    EigenPair pair = power_iterate(split.nonneg, split.shift, opts);
    if (split.shift != 0.0) pair.residual = eigen_residual(a, pair.value, pair.vector);
    return pair;
}

double eigen_residual(const CubicalTensor& a, double lambda, std::span<const double> x) {
    const Vector ax = tv_product(a, x);
    const Vector xp = vec_power(x, a.order() - 1);
    double r = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) r = std::max(r, std::abs(ax[i] - lambda * xp[i]));
    return r;
}

CentralityResult hec_centrality(const CubicalTensor& b, const PowerOptions& opts) {
    const EigenPair pair = perron_metzler(b, opts);
    return CentralityResult{pair.vector, pair.value, b.order(), pair.residual};
}

}  // namespace hyperpos
