#include <algorithm>
#include <cmath>
#include <string>

#include "hyperpos/error.hpp"
#include "hyperpos/multilinear_solve.hpp"
#include "hyperpos/spectral.hpp"

namespace hyperpos {

MetzlerSplit require_nonsingular_mtensor(const CubicalTensor& aneg) {
    const CubicalTensor metzler = tensor_scale(aneg, -1.0);
    MetzlerSplit split{CubicalTensor(aneg.order(), aneg.dim()), 0.0};
    try {
        split = metzler_split(metzler);
    } catch (const NotMetzlerError& e) {
        throw Error(ErrorCode::NotMTensor,
                    std::string("negation is not Metzler (") + e.what() + ")");
    }
    if (split.shift <= 0.0) {
        throw Error(ErrorCode::NotMTensor, "diagonal of the M-tensor must be positive");
    }
    if (is_strongly_connected(split.nonneg)) {
        const EigenPair pair = perron_metzler(metzler);
        if (!(pair.value < 0.0)) {
            throw Error(ErrorCode::NotMTensor,
                        "Perron value of the negation is " + std::to_string(pair.value) +
                            ", needs to be negative");
        }
        return split;
    }
    bool positive_diag = true;
    for (int i = 0; i < aneg.dim(); ++i) positive_diag = positive_diag && aneg.diagonal(i) > 0.0;
    if (positive_diag && is_diagonally_dominant(aneg, true)) return split;
    throw Error(ErrorCode::NotMTensor,
                "pattern is not strongly connected and the tensor is not strictly diagonally "
                "dominant; nonsingularity cannot be established");
}

SolveReport solve_mtensor(const CubicalTensor& aneg, std::span<const double> b,
                          const SolveOptions& opts) {
    const auto n = static_cast<std::size_t>(aneg.dim());
    if (b.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "right-hand side has length " +
                                                      std::to_string(b.size()) + ", expected " +
                                                      std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(b[i] > 0.0) || !std::isfinite(b[i])) {
            throw Error(ErrorCode::NotPositiveRhs,
                        "b[" + std::to_string(i) + "] = " + std::to_string(b[i]));
        }
    }
    const MetzlerSplit split = require_nonsingular_mtensor(aneg);
    const double eta = split.shift;
    const int k = aneg.order();
    const double root = 1.0 / static_cast<double>(k - 1);
    const auto& kern = simd::active();
    const auto rows = split.nonneg.rows();

    Vector x(n);
    if (opts.start) {
        if (opts.start->size() != n) {
            throw Error(ErrorCode::DimensionMismatch, "start vector has the wrong length");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!((*opts.start)[i] > 0.0)) {
                throw Error(ErrorCode::InvalidArgument, "start vector must be positive");
            }
        }
        x = *opts.start;
    } else {
        for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(b[i] / eta, root);
    }

    SolveReport report;
    report.method = "fixed-point";
    Vector bx(n), xp(n);
    double last = 0.0;
    for (int it = 0; it <= opts.max_iter; ++it) {
        kern.tv_rows(rows, x.data(), bx.data());
        kern.ipow(n, x.data(), k - 1, xp.data());
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            residual = std::max(residual, std::abs(eta * xp[i] - bx[i] - b[i]));
        }
        if (report.residual_history.empty() || residual <= report.residual_history.back()) {
            report.residual_history.push_back(residual);
        }
        last = residual;
        if (residual <= opts.tol) {
            report.solution = x;
            report.residual = residual;
            report.iterations = it;
            return report;
        }
        if (it == opts.max_iter) break;
        for (std::size_t i = 0; i < n; ++i) x[i] = std::pow((bx[i] + b[i]) / eta, root);
    }
    throw MaxIterError("M-tensor fixed point did not reach tolerance in " +
                           std::to_string(opts.max_iter) + " iterations (residual " +
                           std::to_string(last) + ")",
                       x);
}

SolveReport equilibrium_affine(const CubicalTensor& a, std::span<const double> b,
                               const SolveOptions& opts) {
    return solve_mtensor(tensor_scale(a, -1.0), b, opts);
}

LvEquilibria equilibrium_lv(const CubicalTensor& a, std::span<const double> b,
                            const SolveOptions& opts) {
    LvEquilibria out{equilibrium_affine(a, b, opts), Vector(static_cast<std::size_t>(a.dim()), 0.0)};
    return out;
}

Vector find_positive_vector(const CubicalTensor& a, const SolveOptions& opts) {
    const Vector ones(static_cast<std::size_t>(a.dim()), 1.0);
    return solve_mtensor(tensor_scale(a, -1.0), ones, opts).solution;
}

}  // namespace hyperpos
