#include <atomic>
#include <cstdlib>
#include <string_view>

#include "hyperpos/simd/kernels.hpp"

namespace hyperpos::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(HYPERPOS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* resolve() noexcept {
    if (const char* env = std::getenv("HYPERPOS_SIMD")) {
        const std::string_view want(env);
        if (want == "scalar") return &scalar_kernels();
        if (want == "avx2") {
            if (auto* t = kernels_for(Backend::Avx2)) return t;
        }
        if (want == "neon") {
            if (auto* t = kernels_for(Backend::Neon)) return t;
        }
    }
    if (auto* t = kernels_for(Backend::Avx2)) return t;
    if (auto* t = kernels_for(Backend::Neon)) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable* kernels_for(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar:
            return &scalar_kernels();
        case Backend::Avx2:
            return cpu_has_avx2() ? detail::avx2_table() : nullptr;
        case Backend::Neon:
            return detail::neon_table();
    }
    return nullptr;
}

const KernelTable& active() noexcept {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        const KernelTable* fresh = resolve();
        // first resolver wins; all candidates are equivalent anyway
        g_active.compare_exchange_strong(t, fresh, std::memory_order_acq_rel);
        t = g_active.load(std::memory_order_acquire);
    }
    return *t;
}

bool select(Backend backend) noexcept {
    const KernelTable* t = kernels_for(backend);
    if (t == nullptr) return false;
    g_active.store(t, std::memory_order_release);
    return true;
}

std::string_view backend_name(Backend backend) noexcept {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

}  // namespace hyperpos::simd
