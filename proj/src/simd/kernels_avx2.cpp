// Compiled with -mavx2 (and without FMA contraction); only reached after a
// runtime CPU check in dispatch.cpp.

#include "hyperpos/simd/kernels.hpp"

#if defined(HYPERPOS_HAVE_AVX2)

#include <immintrin.h>

namespace hyperpos::simd {
namespace {

void tv_rows_avx2(const SparseRows& t, const double* x, double* out) {
    const int heads = t.order - 1;
    alignas(32) double lane[4];
    for (int i = 0; i < t.dim; ++i) {
        const std::size_t begin = t.row_ptr[i];
        const std::size_t end = t.row_ptr[i + 1];
        double acc = 0.0;
        std::size_t e = begin;
        for (; e + 4 <= end; e += 4) {
            __m256d p = _mm256_loadu_pd(t.values + e);
            for (int m = 0; m < heads; ++m) {
                const __m128i idx = _mm_loadu_si128(
                    reinterpret_cast<const __m128i*>(t.heads + m * t.nnz + e));
                p = _mm256_mul_pd(p, _mm256_i32gather_pd(x, idx, 8));
            }
            _mm256_store_pd(lane, p);
            // entry order is kept so the sum matches the scalar kernel bit for bit
            acc += lane[0];
            acc += lane[1];
            acc += lane[2];
            acc += lane[3];
        }
        for (; e < end; ++e) {
            double p = t.values[e];
            for (int m = 0; m < heads; ++m) p *= x[t.heads[m * t.nnz + e]];
            acc += p;
        }
        out[i] = acc;
    }
}

void ipow_avx2(std::size_t n, const double* x, int p, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d b = _mm256_loadu_pd(x + i);
        __m256d r = b;
        for (int j = 1; j < p; ++j) r = _mm256_mul_pd(r, b);
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
        double r = x[i];
        for (int j = 1; j < p; ++j) r *= x[i];
        out[i] = r;
    }
}

void ratio_bounds_avx2(std::size_t n, const double* num, const double* den, double* lo,
                       double* hi) {
    double mn = num[0] / den[0];
    double mx = mn;
    std::size_t i = 1;
    if (n >= 5) {
        __m256d vmin = _mm256_set1_pd(mn);
        __m256d vmax = vmin;
        for (; i + 4 <= n; i += 4) {
            const __m256d r = _mm256_div_pd(_mm256_loadu_pd(num + i), _mm256_loadu_pd(den + i));
            vmin = _mm256_min_pd(vmin, r);
            vmax = _mm256_max_pd(vmax, r);
        }
        alignas(32) double a[4];
        alignas(32) double b[4];
        _mm256_store_pd(a, vmin);
        _mm256_store_pd(b, vmax);
        for (int j = 0; j < 4; ++j) {
            mn = a[j] < mn ? a[j] : mn;
            mx = b[j] > mx ? b[j] : mx;
        }
    }
    for (; i < n; ++i) {
        const double r = num[i] / den[i];
        mn = r < mn ? r : mn;
        mx = r > mx ? r : mx;
    }
    *lo = mn;
    *hi = mx;
}

void axpy_avx2(std::size_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void rk4_combine_avx2(std::size_t n, const double* x, double h, const double* k1,
                      const double* k2, const double* k3, const double* k4, double* out) {
    const double w = h / 6.0;
    const __m256d vw = _mm256_set1_pd(w);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_add_pd(_mm256_loadu_pd(k1 + i),
                                  _mm256_mul_pd(two, _mm256_loadu_pd(k2 + i)));
        s = _mm256_add_pd(s, _mm256_mul_pd(two, _mm256_loadu_pd(k3 + i)));
        s = _mm256_add_pd(s, _mm256_loadu_pd(k4 + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vw, s)));
    }
    for (; i < n; ++i) {
        const double s = k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i];
        out[i] = x[i] + w * s;
    }
}

constexpr KernelTable kAvx2{
    Backend::Avx2, "avx2", tv_rows_avx2, ipow_avx2,
    ratio_bounds_avx2, axpy_avx2, rk4_combine_avx2,
};

}  // namespace

const KernelTable* detail::avx2_table() noexcept { return &kAvx2; }

}  // namespace hyperpos::simd

#else

namespace hyperpos::simd {
const KernelTable* detail::avx2_table() noexcept { return nullptr; }
}  // namespace hyperpos::simd

#endif
