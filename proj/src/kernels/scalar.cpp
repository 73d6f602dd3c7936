#include "gklo/kernels.hpp"

#include <cstring>

namespace gklo {
namespace {

bool mul_batch(const Monomial* a, std::size_t n, const Monomial& m, Monomial* out) {
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t v = 0; v < kMaxVars; ++v) {
            unsigned s = unsigned(a[k].exp[v]) + unsigned(m.exp[v]);
            ok &= s <= 255u;
            out[k].exp[v] = static_cast<std::uint8_t>(s);
        }
    }
    return ok;
}

bool divides(const Monomial& a, const Monomial& b) {
    for (std::size_t v = 0; v < kMaxVars; ++v)
        if (a.exp[v] > b.exp[v]) return false;
    return true;
}

void quotient(const Monomial& b, const Monomial& a, Monomial& out) {
    for (std::size_t v = 0; v < kMaxVars; ++v) out.exp[v] = static_cast<std::uint8_t>(b.exp[v] - a.exp[v]);
}

std::uint32_t degree(const Monomial& a) {
    std::uint32_t d = 0;
    for (auto e : a.exp) d += e;
    return d;
}

int compare(const Monomial& a, const Monomial& b) {
    std::uint32_t da = degree(a), db = degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t v = 0; v < kMaxVars; ++v)
        if (a.exp[v] != b.exp[v]) return a.exp[v] < b.exp[v] ? -1 : 1;
    return 0;
}

std::uint64_t support(const Monomial& a) {
    std::uint64_t s = 0;
    for (std::size_t v = 0; v < kMaxVars; ++v)
        if (a.exp[v]) s |= std::uint64_t{1} << v;
    return s;
}

constexpr MonomialKernels kScalar{"scalar", mul_batch, divides, quotient, degree, compare, support};

}  // namespace

const MonomialKernels& scalar_kernels() { return kScalar; }

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::size_t w = 0; w < kMaxVars / 8; ++w) {
        std::uint64_t x;
        std::memcpy(&x, m.exp.data() + 8 * w, 8);
        h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h *= 0xbf58476d1ce4e5b9ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
}

}  // namespace gklo
