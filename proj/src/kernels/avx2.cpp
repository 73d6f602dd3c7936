#include "gklo/kernels.hpp"

#if defined(GKLO_HAVE_AVX2)
#include <immintrin.h>

namespace gklo {
namespace {

inline __m256i lo(const Monomial& m) { return _mm256_load_si256(reinterpret_cast<const __m256i*>(m.exp.data())); }
inline __m256i hi(const Monomial& m) { return _mm256_load_si256(reinterpret_cast<const __m256i*>(m.exp.data() + 32)); }

inline std::uint64_t eq_mask(__m256i a0, __m256i a1, __m256i b0, __m256i b1) {
    auto m0 = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(a0, b0)));
    auto m1 = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(a1, b1)));
    return std::uint64_t{m0} | (std::uint64_t{m1} << 32);
}

bool mul_batch(const Monomial* a, std::size_t n, const Monomial& m, Monomial* out) {
    const __m256i m0 = lo(m), m1 = hi(m);
    __m256i bad = _mm256_setzero_si256();
    for (std::size_t k = 0; k < n; ++k) {
        __m256i a0 = lo(a[k]), a1 = hi(a[k]);
        __m256i s0 = _mm256_add_epi8(a0, m0), s1 = _mm256_add_epi8(a1, m1);
        // wrapping and saturating sums differ exactly on overflow
        bad = _mm256_or_si256(bad, _mm256_xor_si256(s0, _mm256_adds_epu8(a0, m0)));
        bad = _mm256_or_si256(bad, _mm256_xor_si256(s1, _mm256_adds_epu8(a1, m1)));
        _mm256_store_si256(reinterpret_cast<__m256i*>(out[k].exp.data()), s0);
        _mm256_store_si256(reinterpret_cast<__m256i*>(out[k].exp.data() + 32), s1);
    }
    return _mm256_testz_si256(bad, bad);
}

bool divides(const Monomial& a, const Monomial& b) {
    __m256i b0 = lo(b), b1 = hi(b);
    __m256i x0 = _mm256_max_epu8(lo(a), b0), x1 = _mm256_max_epu8(hi(a), b1);
    return eq_mask(x0, x1, b0, b1) == ~std::uint64_t{0};
}

void quotient(const Monomial& b, const Monomial& a, Monomial& out) {
    _mm256_store_si256(reinterpret_cast<__m256i*>(out.exp.data()), _mm256_sub_epi8(lo(b), lo(a)));
    _mm256_store_si256(reinterpret_cast<__m256i*>(out.exp.data() + 32), _mm256_sub_epi8(hi(b), hi(a)));
}

inline std::uint32_t hsum(__m256i a0, __m256i a1) {
    __m256i z = _mm256_setzero_si256();
    __m256i s = _mm256_add_epi64(_mm256_sad_epu8(a0, z), _mm256_sad_epu8(a1, z));
    __m128i t = _mm_add_epi64(_mm256_castsi256_si128(s), _mm256_extracti128_si256(s, 1));
    return static_cast<std::uint32_t>(_mm_cvtsi128_si64(t) + _mm_extract_epi64(t, 1));
}

std::uint32_t degree(const Monomial& a) { return hsum(lo(a), hi(a)); }

int compare(const Monomial& a, const Monomial& b) {
    __m256i a0 = lo(a), a1 = hi(a), b0 = lo(b), b1 = hi(b);
    std::uint32_t da = hsum(a0, a1), db = hsum(b0, b1);
    if (da != db) return da < db ? -1 : 1;
    std::uint64_t diff = ~eq_mask(a0, a1, b0, b1);
    if (diff == 0) return 0;
    auto v = static_cast<std::size_t>(__builtin_ctzll(diff));
    return a.exp[v] < b.exp[v] ? -1 : 1;
}

std::uint64_t support(const Monomial& a) {
    __m256i z = _mm256_setzero_si256();
    return ~eq_mask(lo(a), hi(a), z, z);
}

constexpr MonomialKernels kAvx2{"avx2", mul_batch, divides, quotient, degree, compare, support};

}  // namespace

const MonomialKernels* avx2_kernels() {
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok ? &kAvx2 : nullptr;
}

}  // namespace gklo

#else

namespace gklo {
const MonomialKernels* avx2_kernels() { return nullptr; }
}  // namespace gklo

#endif
