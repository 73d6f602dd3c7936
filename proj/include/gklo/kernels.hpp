#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gklo {

inline constexpr std::size_t kMaxVars = 64;

/// Exponent vector over the session variable table, one byte per variable.
struct alignas(32) Monomial {
    std::array<std::uint8_t, kMaxVars> exp{};

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Data-parallel inner loops on exponent vectors. Every backend must agree
/// bit-for-bit with the scalar reference.
struct MonomialKernels {
    const char* name;
    // out[k] = a[k] * m for k < n; false if some exponent overflows 255.
    bool (*mul_batch)(const Monomial* a, std::size_t n, const Monomial& m, Monomial* out);
    // a | b
    bool (*divides)(const Monomial& a, const Monomial& b);
    // out = b / a, assuming a | b
    void (*quotient)(const Monomial& b, const Monomial& a, Monomial& out);
    std::uint32_t (*degree)(const Monomial& a);
    // graded lexicographic, variable 0 most significant; returns -1, 0, 1
    int (*compare)(const Monomial& a, const Monomial& b);
    // bit k set iff exp[k] != 0
    std::uint64_t (*support)(const Monomial& a);
};

const MonomialKernels& scalar_kernels();
/// Null when the backend was not compiled in or the CPU lacks it.
const MonomialKernels* avx2_kernels();
const MonomialKernels* neon_kernels();

/// Backend picked at first use: GKLO_KERNELS=scalar|avx2|neon overrides
/// CPU detection.
const MonomialKernels& kernels();
/// Force a backend by name; returns false if unavailable.
bool select_kernels(std::string_view name);

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept;
};

inline bool operator<(const Monomial& a, const Monomial& b) { return kernels().compare(a, b) < 0; }

}  // namespace gklo
