#include "gklo/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace gklo {
namespace {

inline uint8x16_t ld(const Monomial& m, int q) { return vld1q_u8(m.exp.data() + 16 * q); }

bool mul_batch(const Monomial* a, std::size_t n, const Monomial& m, Monomial* out) {
    uint8x16_t bad = vdupq_n_u8(0);
    for (std::size_t k = 0; k < n; ++k) {
        for (int q = 0; q < 4; ++q) {
            uint8x16_t x = ld(a[k], q), y = ld(m, q);
            uint8x16_t s = vaddq_u8(x, y);
            bad = vorrq_u8(bad, veorq_u8(s, vqaddq_u8(x, y)));
            vst1q_u8(out[k].exp.data() + 16 * q, s);
        }
    }
    return vmaxvq_u8(bad) == 0;
}

bool divides(const Monomial& a, const Monomial& b) {
    for (int q = 0; q < 4; ++q)
        if (vmaxvq_u8(vcgtq_u8(ld(a, q), ld(b, q))) != 0) return false;
    return true;
}

void quotient(const Monomial& b, const Monomial& a, Monomial& out) {
    for (int q = 0; q < 4; ++q) vst1q_u8(out.exp.data() + 16 * q, vsubq_u8(ld(b, q), ld(a, q)));
}

std::uint32_t degree(const Monomial& a) {
    std::uint32_t d = 0;
    for (int q = 0; q < 4; ++q) d += vaddlvq_u8(ld(a, q));
    return d;
}

int compare(const Monomial& a, const Monomial& b) {
    std::uint32_t da = degree(a), db = degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (int q = 0; q < 4; ++q) {
        if (vminvq_u8(vceqq_u8(ld(a, q), ld(b, q))) == 0xff) continue;
        for (int v = 16 * q; v < 16 * q + 16; ++v)
            if (a.exp[v] != b.exp[v]) return a.exp[v] < b.exp[v] ? -1 : 1;
    }
    return 0;
}

std::uint64_t support(const Monomial& a) {
    std::uint64_t s = 0;
    for (int q = 0; q < 4; ++q) {
        alignas(16) std::uint8_t nz[16];
        vst1q_u8(nz, vtstq_u8(ld(a, q), ld(a, q)));
        for (int v = 0; v < 16; ++v)
            if (nz[v]) s |= std::uint64_t{1} << (16 * q + v);
    }
    return s;
}

constexpr MonomialKernels kNeon{"neon", mul_batch, divides, quotient, degree, compare, support};

}  // namespace

const MonomialKernels* neon_kernels() { return &kNeon; }

}  // namespace gklo

#else

namespace gklo {
const MonomialKernels* neon_kernels() { return nullptr; }
}  // namespace gklo

#endif
