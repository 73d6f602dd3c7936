#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gklo/kernels.hpp"
#include "gklo/vars.hpp"

namespace gklo {

using Rational = mpq_class;

struct Term {
    Monomial m;
    Rational c;
};

/// Sparse multivariate polynomial over Q. Terms are kept strictly descending
/// in grlex order with nonzero coefficients, so equal polynomials have equal
/// term vectors.
class Poly {
public:
    Poly() = default;
    explicit Poly(const Rational& c);
    explicit Poly(long c) : Poly(Rational(c)) {}

    static Poly variable(VarIndex v);
    static Poly monomial(const Monomial& m, const Rational& c);
    /// Sorts and combines arbitrary terms.
    static Poly from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_one() const;
    /// Value of a constant polynomial (0 for the zero polynomial).
    Rational constant_value() const;
    const Term& leading() const { return terms_.front(); }

    std::uint32_t total_degree() const;
    unsigned degree_in(VarIndex v) const;
    std::uint64_t support() const;
    bool contains(VarIndex v) const { return (support() >> v) & 1u; }
    /// True when every term has total degree <= 1.
    bool is_affine() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b);

    Poly pow(unsigned e) const;
    Poly mul_monomial(const Monomial& m, const Rational& c) const;

    /// Quotient if d divides *this exactly.
    std::optional<Poly> divide_exact(const Poly& d) const;

    /// Coefficients c_k with *this = sum_k c_k v^k.
    std::vector<Poly> coefficients_in(VarIndex v) const;
    static Poly from_coefficients(VarIndex v, const std::vector<Poly>& coeffs);

    /// Replace v by value.
    Poly substitute(VarIndex v, const Poly& value) const;

    /// Scale so the leading coefficient is 1; returns the factor removed.
    Rational make_monic();

    /// Total order used for canonical printing: by term list.
    static int compare(const Poly& a, const Poly& b);
    std::size_t hash() const;

    /// Terms in printing order: graded, then lexicographic in
    /// var_print_less order. Independent of the variable table.
    std::vector<Term> printed_terms() const;
    /// Total order on printed term lists.
    static int print_compare(const Poly& a, const Poly& b);

    std::string to_string() const;

private:
    std::vector<Term> terms_;
};

/// Monic greatest common divisor (1 if coprime, 0 only for gcd(0,0)).
Poly gcd(const Poly& a, const Poly& b);

std::string monomial_to_string(const Monomial& m);
/// Graded, then lexicographic with variables in var_print_less order.
int monomial_print_compare(const Monomial& a, const Monomial& b);

}  // namespace gklo
