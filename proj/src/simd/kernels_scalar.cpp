#include "hyperpos/simd/kernels.hpp"

namespace hyperpos::simd {
namespace {

void tv_rows_scalar(const SparseRows& t, const double* x, double* out) {
    const int heads = t.order - 1;
    for (int i = 0; i < t.dim; ++i) {
        double acc = 0.0;
        for (std::size_t e = t.row_ptr[i]; e < t.row_ptr[i + 1]; ++e) {
            double p = t.values[e];
            for (int m = 0; m < heads; ++m) p *= x[t.heads[m * t.nnz + e]];
            acc += p;
        }
        out[i] = acc;
    }
}

void ipow_scalar(std::size_t n, const double* x, int p, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        double r = x[i];
        for (int j = 1; j < p; ++j) r *= x[i];
        out[i] = r;
    }
}

void ratio_bounds_scalar(std::size_t n, const double* num, const double* den, double* lo,
                         double* hi) {
    double mn = num[0] / den[0];
    double mx = mn;
    for (std::size_t i = 1; i < n; ++i) {
        const double r = num[i] / den[i];
        mn = r < mn ? r : mn;
        mx = r > mx ? r : mx;
    }
    *lo = mn;
    *hi = mx;
}

void axpy_scalar(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void rk4_combine_scalar(std::size_t n, const double* x, double h, const double* k1,
                        const double* k2, const double* k3, const double* k4, double* out) {
    const double w = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i];
        out[i] = x[i] + w * s;
    }
}

constexpr KernelTable kScalar{
    Backend::Scalar, "scalar", tv_rows_scalar, ipow_scalar,
    ratio_bounds_scalar, axpy_scalar, rk4_combine_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace hyperpos::simd
