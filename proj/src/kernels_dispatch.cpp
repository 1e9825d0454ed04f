#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kljn/kernels.hpp"

namespace kljn::kernels {

namespace {

constexpr KernelSet kScalar{"scalar", &normal_scalar, &accumulate_scalar};

#if defined(KLJN_HAVE_AVX2)
constexpr KernelSet kAvx2{"avx2", &normal_avx2, &accumulate_avx2};

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelSet* resolve(std::string_view name) {
    if (name == "scalar") return &kScalar;
    if (name == "avx2") {
        const KernelSet* k = avx2_kernels();
        if (k == nullptr) throw std::invalid_argument("avx2 kernels are not available on this host");
        return k;
    }
    if (name == "auto" || name.empty()) {
        const KernelSet* k = avx2_kernels();
        return k != nullptr ? k : &kScalar;
    }
    throw std::invalid_argument("unknown kernel set '" + std::string(name) + "'");
}

const KernelSet* from_environment() {
    const char* env = std::getenv("KLJN_KERNEL");
    try {
        return resolve(env != nullptr ? std::string_view(env) : std::string_view("auto"));
    } catch (const std::invalid_argument&) {
        return resolve("auto");
    }
}

std::atomic<const KernelSet*> g_active{nullptr};

}  // namespace

const KernelSet& scalar_kernels() noexcept { return kScalar; }

const KernelSet* avx2_kernels() noexcept {
#if defined(KLJN_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelSet& active() noexcept {
    const KernelSet* k = g_active.load(std::memory_order_acquire);
    if (k == nullptr) {
        const KernelSet* chosen = from_environment();
        g_active.compare_exchange_strong(k, chosen, std::memory_order_acq_rel);
        k = g_active.load(std::memory_order_acquire);
    }
    return *k;
}

void select(std::string_view name) { g_active.store(resolve(name), std::memory_order_release); }

}  // namespace kljn::kernels
