#include "gklo/prime_field.hpp"

#include <cstdlib>
#include <string>

#include "gklo/error.hpp"

namespace gklo {
namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1u) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t default_prime() {
    if (const char* env = std::getenv("GKLO_PRIME")) {
        std::uint64_t p = std::strtoull(env, nullptr, 10);
        if (p <= (std::uint64_t{1} << 32) || p >= (std::uint64_t{1} << 63) || !is_prime_u64(p))
            throw Error(ErrorCode::InvalidArgument, "GKLO_PRIME must be a prime in (2^32, 2^63): " + std::string(env));
        return p;
    }
    return kMersenne61;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
    if (!is_prime_u64(p)) throw Error(ErrorCode::InvalidArgument, "modulus is not prime: " + std::to_string(p));
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const { return powmod(a, e, p_); }

std::uint64_t PrimeField::inv(std::uint64_t a) const {
    if (a % p_ == 0) throw Error(ErrorCode::PoleHit, "inverse of zero in prime field");
    return powmod(a, p_ - 2, p_);
}

std::uint64_t PrimeField::from_int(long v) const {
    if (v >= 0) return static_cast<std::uint64_t>(v) % p_;
    std::uint64_t m = static_cast<std::uint64_t>(-(v + 1)) + 1;
    return neg(m % p_);
}

std::uint64_t PrimeField::from_rational(const Rational& q) const {
    std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), p_);
    std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), p_);
    return mul(num, inv(den));
}

FpPoly::FpPoly(const Poly& p, const PrimeField& F) {
    coef_.reserve(p.size());
    start_.reserve(p.size() + 1);
    for (const auto& t : p.terms()) {
        coef_.push_back(F.from_rational(t.c));
        start_.push_back(static_cast<std::uint32_t>(var_.size()));
        std::uint64_t s = kernels().support(t.m);
        for (; s; s &= s - 1) {
            auto v = static_cast<std::uint8_t>(__builtin_ctzll(s));
            var_.push_back(v);
            exp_.push_back(t.m.exp[v]);
        }
    }
    start_.push_back(static_cast<std::uint32_t>(var_.size()));
}

std::uint64_t FpPoly::eval(const PrimeField& F, const FpPoint& pt) const {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < coef_.size(); ++k) {
        std::uint64_t t = coef_[k];
        for (std::uint32_t j = start_[k]; j < start_[k + 1]; ++j) {
            std::uint64_t x = pt[var_[j]];
            t = F.mul(t, exp_[j] == 1 ? x : F.pow(x, exp_[j]));
        }
        acc = F.add(acc, t);
    }
    return acc;
}

std::uint64_t evaluate(const Poly& p, const PrimeField& F, const FpPoint& pt) { return FpPoly(p, F).eval(F, pt); }

}  // namespace gklo
