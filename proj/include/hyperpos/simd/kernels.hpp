#pragma once

// Data-parallel inner loops used by the tensor, spectral and dynamics code.
//
// Every kernel has a scalar reference implementation and may have vector
// variants (AVX2 on x86-64, NEON on aarch64). Variants perform the same
// floating-point operations in the same order per output element, so results
// are bit-identical to the scalar reference; tests/test_kernels.cpp checks
// this. The active backend is chosen once at runtime from the CPU features
// and can be forced with the HYPERPOS_SIMD environment variable
// ("scalar", "avx2", "neon").

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace hyperpos::simd {

// Read-only view of a sparse cubical tensor in row-grouped layout.
// Entries are sorted lexicographically, so entries whose first index is i
// occupy [row_ptr[i], row_ptr[i+1]). Head index m (1-based mode m+1) of
// entry e is heads[m * nnz + e].
struct SparseRows {
    int order = 0;
    int dim = 0;
    std::size_t nnz = 0;
    const std::size_t* row_ptr = nullptr;
    const double* values = nullptr;
    const std::int32_t* heads = nullptr;
};

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
    Backend backend;
    const char* name;

    // out[i] = sum_e values[e] * x[h_1(e)] * ... * x[h_{k-1}(e)] over row i.
    // Products are formed left to right and accumulated in entry order.
    void (*tv_rows)(const SparseRows& t, const double* x, double* out);

    // out[i] = x[i]^p by repeated multiplication, p >= 1.
    void (*ipow)(std::size_t n, const double* x, int p, double* out);

    // Min and max of num[i] / den[i]. Requires n >= 1 and den > 0.
    void (*ratio_bounds)(std::size_t n, const double* num, const double* den, double* lo,
                         double* hi);

    // y[i] += a * x[i]
    void (*axpy)(std::size_t n, double a, const double* x, double* y);

    // out = x + (h/6) * (k1 + 2 k2 + 2 k3 + k4)
    void (*rk4_combine)(std::size_t n, const double* x, double h, const double* k1,
                        const double* k2, const double* k3, const double* k4, double* out);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the backend was not compiled in or the CPU lacks support.
const KernelTable* kernels_for(Backend backend) noexcept;

// The dispatched table; resolved on first use.
const KernelTable& active() noexcept;

// Override the dispatched table (tests and benchmarking). Returns false if the
// backend is unavailable, leaving the current selection unchanged.
bool select(Backend backend) noexcept;

std::string_view backend_name(Backend backend) noexcept;

namespace detail {
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace hyperpos::simd
