#pragma once

#include <deque>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gklo/poly.hpp"
#include "gklo/prime_field.hpp"

namespace gklo {

/// A monic nonconstant polynomial used as a factor. Linear factors are
/// interned, so two equal linear factors share one object.
struct Factor {
    Poly poly;
    std::size_t hash = 0;
    bool linear = false;
    std::uint64_t support = 0;

    /// Copy reduced mod p, built once per prime.
    const FpPoly& compiled(const PrimeField& F) const;

private:
    mutable std::mutex mu_;
    mutable std::deque<std::pair<std::uint64_t, FpPoly>> compiled_;
};

using FactorPtr = std::shared_ptr<const Factor>;

/// Monic representative and the scalar removed; poly must be nonconstant.
std::pair<FactorPtr, Rational> make_factor(Poly poly);

/// A shift x_v -> x_v + k*hbar for a node variable v.
using Shift = std::vector<std::pair<VarIndex, int>>;

/// Exact rational function over Q kept as c * prod f_k^{e_k} with monic
/// factors f_k and nonzero integer exponents. Numerator and denominator are
/// coprime and the denominator is monic, so the numerator/denominator pair is
/// the unique normal form; zero is c = 0 with no factors.
class RatFunc {
public:
    RatFunc() = default;
    RatFunc(const Rational& c);  // NOLINT(google-explicit-constructor)
    RatFunc(long c) : RatFunc(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    RatFunc(int c) : RatFunc(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    explicit RatFunc(const Poly& p);

    static RatFunc variable(VarIndex v);
    static RatFunc variable(std::string_view name);
    static RatFunc fraction(const Poly& num, const Poly& den);

    bool is_zero() const { return sgn(c_) == 0; }
    bool is_constant() const { return factors_.empty(); }
    const Rational& constant() const { return c_; }
    const std::vector<std::pair<FactorPtr, int>>& factors() const { return factors_; }
    std::uint64_t support() const;
    bool contains(VarIndex v) const { return (support() >> v) & 1u; }

    Poly numerator() const;
    Poly denominator() const;

    RatFunc operator-() const;
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    RatFunc& operator+=(const RatFunc& b) { return *this = *this + b; }
    RatFunc& operator-=(const RatFunc& b) { return *this = *this - b; }
    RatFunc& operator*=(const RatFunc& b) { return *this = *this * b; }
    RatFunc& operator/=(const RatFunc& b) { return *this = *this / b; }
    friend bool operator==(const RatFunc& a, const RatFunc& b);

    RatFunc inverse() const;
    RatFunc pow(int e) const;

    /// Sum of many terms with one common-denominator pass.
    static RatFunc sum(std::span<const RatFunc> terms);

    /// x_v -> x_v + k*hbar for each (v, k); v must be a node variable.
    RatFunc shift(const Shift& s) const;
    RatFunc substitute(VarIndex v, const Poly& value) const;
    RatFunc substitute(VarIndex v, const RatFunc& value) const;

    /// Throws PoleHit when the denominator vanishes.
    std::uint64_t evaluate(const PrimeField& F, const FpPoint& pt) const;
    /// Exact evaluation at rational values for the variables in `vars`.
    Rational evaluate(const std::vector<std::pair<VarIndex, Rational>>& point) const;

    /// Canonical, re-parseable text.
    std::string to_string() const;

private:
    void reduce(bool full);

    Rational c_;
    std::vector<std::pair<FactorPtr, int>> factors_;
};

std::ostream& operator<<(std::ostream& os, const RatFunc& f);

/// Coefficients of var^k for k = hi, hi-1, ..., lo of the expansion at
/// var = infinity. Returned in the order of `ks`.
std::vector<RatFunc> laurent_coefficients(const RatFunc& f, VarIndex var, std::span<const int> ks);
RatFunc laurent_coefficient(const RatFunc& f, VarIndex var, int k);

/// Strictly proper part in var via partial fractions over simple linear
/// poles. Throws RepeatedPole or NonLinearFactor.
RatFunc truncate_proper(const RatFunc& f, VarIndex var);
/// Principal parts of f at its poles in `var`; they sum to truncate_proper.
std::vector<RatFunc> proper_parts(const RatFunc& f, VarIndex var);

/// Ber_n(x) as a polynomial in the given variable.
Poly bernoulli_polynomial(unsigned n, VarIndex x);
/// Coefficients of Ber_n, constant term first.
std::vector<Rational> bernoulli_coefficients(unsigned n);

/// Parses the text produced by to_string (and ordinary infix arithmetic with
/// + - * / ^, parentheses, rationals and variable names).
RatFunc parse_ratfunc(std::string_view text);

}  // namespace gklo
