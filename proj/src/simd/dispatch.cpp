#include "nrdr/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "nrdr/errors.hpp"

namespace nrdr::simd {

const KernelSet* avx2_kernels_impl(); // defined in kernels_avx2.cpp

namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelSet* resolve(const char* name) {
    if (std::strcmp(name, "scalar") == 0) return &scalar_kernels();
    if (std::strcmp(name, "avx2") == 0) return avx2_kernels();
    return nullptr;
}

std::atomic<const KernelSet*> g_active{nullptr};

const KernelSet* pick_default() {
    if (const char* env = std::getenv("NRDR_SIMD")) {
        if (const KernelSet* set = resolve(env)) return set;
        throw ParameterError(std::string("NRDR_SIMD requests unavailable kernel set '") +
                             env + "'");
    }
    if (const KernelSet* avx2 = avx2_kernels()) return avx2;
    return &scalar_kernels();
}

} // namespace

const KernelSet* avx2_kernels() {
    static const KernelSet* set = cpu_has_avx2() ? avx2_kernels_impl() : nullptr;
    return set;
}

const KernelSet& kernels() {
    const KernelSet* set = g_active.load(std::memory_order_acquire);
    if (!set) {
        set = pick_default();
        g_active.store(set, std::memory_order_release);
    }
    return *set;
}

void force_kernels(const char* name) {
    const KernelSet* set = resolve(name);
    if (!set) {
        throw ParameterError(std::string("unknown or unavailable kernel set '") + name + "'");
    }
    g_active.store(set, std::memory_order_release);
}

} // namespace nrdr::simd
