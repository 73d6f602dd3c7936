#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gklo/poly.hpp"

namespace gklo {

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

bool is_prime_u64(std::uint64_t n);

/// Prime used by randomized mode: GKLO_PRIME if set (must be a prime above
/// 2^32), otherwise 2^61 - 1.
std::uint64_t default_prime();

class PrimeField {
public:
    explicit PrimeField(std::uint64_t p);

    std::uint64_t modulus() const { return p_; }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint64_t neg(std::uint64_t a) const { return a ? p_ - a : 0; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p_);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    /// Throws PoleHit on zero.
    std::uint64_t inv(std::uint64_t a) const;
    /// Throws PoleHit if the denominator vanishes mod p.
    std::uint64_t from_rational(const Rational& q) const;
    std::uint64_t from_int(long v) const;

private:
    std::uint64_t p_;
};

/// Values for every session variable; unused slots are ignored.
using FpPoint = std::array<std::uint64_t, kMaxVars>;

/// Polynomial with coefficients reduced mod p, for repeated evaluation.
class FpPoly {
public:
    FpPoly() = default;
    FpPoly(const Poly& p, const PrimeField& F);
    std::uint64_t eval(const PrimeField& F, const FpPoint& pt) const;

private:
    std::vector<std::uint64_t> coef_;
    std::vector<std::uint32_t> start_;  // term k uses vars_[start_[k] .. start_[k+1])
    std::vector<std::uint8_t> var_, exp_;
};

std::uint64_t evaluate(const Poly& p, const PrimeField& F, const FpPoint& pt);

}  // namespace gklo
