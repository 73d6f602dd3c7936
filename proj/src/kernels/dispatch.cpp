#include "gklo/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace gklo {
namespace {

const MonomialKernels* by_name(std::string_view name) {
    if (name == "scalar") return &scalar_kernels();
    if (name == "avx2") return avx2_kernels();
    if (name == "neon") return neon_kernels();
    return nullptr;
}

const MonomialKernels* detect() {
    if (const char* env = std::getenv("GKLO_KERNELS")) {
        if (auto* k = by_name(env)) return k;
    }
    if (auto* k = avx2_kernels()) return k;
    if (auto* k = neon_kernels()) return k;
    return &scalar_kernels();
}

std::atomic<const MonomialKernels*>& active() {
    static std::atomic<const MonomialKernels*> k{detect()};
    return k;
}

}  // namespace

const MonomialKernels& kernels() { return *active().load(std::memory_order_relaxed); }

bool select_kernels(std::string_view name) {
    auto* k = by_name(name);
    if (!k) return false;
    active().store(k, std::memory_order_relaxed);
    return true;
}

}  // namespace gklo
