#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gklo/ratfunc.hpp"

namespace gklo {

/// d_mu = prod d_{i,r}^{e}, keyed by the node variable x_{i,r} it shifts.
/// Exponents are nonzero and sorted by variable index.
class ShiftMonomial {
public:
    ShiftMonomial() = default;
    static ShiftMonomial unit(VarIndex v, int k = 1);
    static ShiftMonomial from_exponents(Shift e);

    const Shift& exponents() const { return e_; }
    bool is_identity() const { return e_.empty(); }
    int exponent(VarIndex v) const;
    ShiftMonomial inverse() const;
    friend ShiftMonomial operator*(const ShiftMonomial& a, const ShiftMonomial& b);
    friend bool operator==(const ShiftMonomial& a, const ShiftMonomial& b) = default;
    /// Lexicographic on dense exponent vectors in variable order.
    friend std::strong_ordering operator<=>(const ShiftMonomial& a, const ShiftMonomial& b);

    /// "1" or "d_{1,1}^-1*d_{1,2}".
    std::string to_string() const;

private:
    Shift e_;
};

/// Finite sum of f_mu * d_mu with f_mu nonzero, coefficients on the left.
/// Context 0 is compatible with every context.
class DiffOp {
public:
    using TermMap = std::map<ShiftMonomial, RatFunc>;

    DiffOp() = default;
    DiffOp(const RatFunc& f);  // NOLINT(google-explicit-constructor)
    DiffOp(const RatFunc& f, const ShiftMonomial& m);
    static DiffOp shift(VarIndex v, int k = 1);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    std::uint64_t context() const { return context_; }
    DiffOp& set_context(std::uint64_t id) {
        context_ = id;
        return *this;
    }
    /// Coefficient of d_mu (zero when absent).
    RatFunc coefficient(const ShiftMonomial& m) const;
    /// True when only d_0 carries a coefficient.
    bool is_shift_free() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_identity()); }

    DiffOp operator-() const;
    friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
    /// Product rule (f d_l)(g d_m) = f g(t + l hbar) d_{l+m}.
    friend DiffOp operator*(const DiffOp& a, const DiffOp& b);
    /// Left multiplication by a function.
    friend DiffOp operator*(const RatFunc& f, const DiffOp& a);
    DiffOp& operator+=(const DiffOp& b) { return *this = *this + b; }
    DiffOp& operator-=(const DiffOp& b) { return *this = *this - b; }
    DiffOp& operator*=(const DiffOp& b) { return *this = *this * b; }
    friend bool operator==(const DiffOp& a, const DiffOp& b);

    /// Sum with one RatFunc::sum per shift monomial.
    static DiffOp sum(const std::vector<DiffOp>& parts);

    /// Apply fn to every coefficient (e.g. a spectral substitution).
    template <class F>
    DiffOp map_coefficients(F&& fn) const {
        DiffOp r;
        r.context_ = context_;
        for (const auto& [m, c] : terms_) {
            RatFunc x = fn(c);
            if (!x.is_zero()) r.terms_.emplace(m, std::move(x));
        }
        return r;
    }

    /// Terms joined by " + ", each "(coef)" optionally followed by "*d_{i,r}^e".
    std::string to_string() const;

private:
    static std::uint64_t join_context(const DiffOp& a, const DiffOp& b);
    TermMap terms_;
    std::uint64_t context_ = 0;
};

std::ostream& operator<<(std::ostream& os, const DiffOp& a);

DiffOp commutator(const DiffOp& a, const DiffOp& b);
DiffOp anticommutator(const DiffOp& a, const DiffOp& b);

/// Inverse of DiffOp::to_string.
DiffOp parse_diffop(std::string_view text);

enum class PitStatus { Zero, NonzeroWitness, Inconclusive };

struct PitWitness {
    std::vector<std::pair<std::string, std::uint64_t>> point;
    ShiftMonomial monomial;
    std::uint64_t value = 0;
};

struct PitResult {
    PitStatus status = PitStatus::Zero;
    std::optional<PitWitness> witness;
};

/// Random point over F_p for the variables in `support`.
FpPoint random_point(const PrimeField& F, std::uint64_t support, std::mt19937_64& rng);

/// Schwartz-Zippel zero test of every coefficient; pole hits redraw the point
/// up to 32 times before reporting Inconclusive.
PitResult randomized_is_zero(const DiffOp& a, int trials, std::uint64_t seed, const PrimeField& F);

}  // namespace gklo
