// NEON has no gather, so the tensor kernel loads the two head operands per
// lane pair by hand; the element-wise kernels map directly onto float64x2_t.

#include "hyperpos/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

namespace hyperpos::simd {
namespace {

void tv_rows_neon(const SparseRows& t, const double* x, double* out) {
    const int heads = t.order - 1;
    double lane[2];
    for (int i = 0; i < t.dim; ++i) {
        const std::size_t begin = t.row_ptr[i];
        const std::size_t end = t.row_ptr[i + 1];
        double acc = 0.0;
        std::size_t e = begin;
        for (; e + 2 <= end; e += 2) {
            float64x2_t p = vld1q_f64(t.values + e);
            for (int m = 0; m < heads; ++m) {
                const std::int32_t* h = t.heads + m * t.nnz + e;
                const double g[2] = {x[h[0]], x[h[1]]};
                p = vmulq_f64(p, vld1q_f64(g));
            }
            vst1q_f64(lane, p);
            acc += lane[0];
            acc += lane[1];
        }
        for (; e < end; ++e) {
            double p = t.values[e];
            for (int m = 0; m < heads; ++m) p *= x[t.heads[m * t.nnz + e]];
            acc += p;
        }
        out[i] = acc;
    }
}

void ipow_neon(std::size_t n, const double* x, int p, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t b = vld1q_f64(x + i);
        float64x2_t r = b;
        for (int j = 1; j < p; ++j) r = vmulq_f64(r, b);
        vst1q_f64(out + i, r);
    }
    for (; i < n; ++i) {
        double r = x[i];
        for (int j = 1; j < p; ++j) r *= x[i];
        out[i] = r;
    }
}

void ratio_bounds_neon(std::size_t n, const double* num, const double* den, double* lo,
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

void axpy_neon(std::size_t n, double a, const double* x, double* y) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void rk4_combine_neon(std::size_t n, const double* x, double h, const double* k1,
                      const double* k2, const double* k3, const double* k4, double* out) {
    const double w = h / 6.0;
    const float64x2_t vw = vdupq_n_f64(w);
    const float64x2_t two = vdupq_n_f64(2.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t s = vaddq_f64(vld1q_f64(k1 + i), vmulq_f64(two, vld1q_f64(k2 + i)));
        s = vaddq_f64(s, vmulq_f64(two, vld1q_f64(k3 + i)));
        s = vaddq_f64(s, vld1q_f64(k4 + i));
        vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), vmulq_f64(vw, s)));
    }
    for (; i < n; ++i) {
        const double s = k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i];
        out[i] = x[i] + w * s;
    }
}

constexpr KernelTable kNeon{
    Backend::Neon, "neon", tv_rows_neon, ipow_neon,
    ratio_bounds_neon, axpy_neon, rk4_combine_neon,
};

}  // namespace

const KernelTable* detail::neon_table() noexcept { return &kNeon; }

}  // namespace hyperpos::simd

#else

namespace hyperpos::simd {
const KernelTable* detail::neon_table() noexcept { return nullptr; }
}  // namespace hyperpos::simd

#endif
