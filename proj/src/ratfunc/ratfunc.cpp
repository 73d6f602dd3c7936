#include "gklo/ratfunc.hpp"

#include <algorithm>
#include <ostream>
#include <map>
#include <shared_mutex>
#include <tuple>
#include <unordered_map>

#include "gklo/error.hpp"

namespace gklo {
namespace {

// ---------- factor table ----------

struct LinearTable {
    std::shared_mutex mu;
    std::unordered_map<std::size_t, std::vector<FactorPtr>> buckets;
};

LinearTable& linear_table() {
    static LinearTable t;
    return t;
}

FactorPtr new_factor(Poly monic) {
    auto f = std::make_shared<Factor>();
    f->hash = monic.hash();
    f->support = monic.support();
    f->linear = monic.total_degree() == 1;
    f->poly = std::move(monic);
    return f;
}

FactorPtr intern_linear(Poly monic) {
    auto& t = linear_table();
    std::size_t h = monic.hash();
    {
        std::shared_lock lock(t.mu);
        if (auto it = t.buckets.find(h); it != t.buckets.end())
            for (const auto& f : it->second)
                if (f->poly == monic) return f;
    }
    std::unique_lock lock(t.mu);
    auto& bucket = t.buckets[h];
    for (const auto& f : bucket)
        if (f->poly == monic) return f;
    bucket.push_back(new_factor(std::move(monic)));
    return bucket.back();
}

bool same_factor(const FactorPtr& a, const FactorPtr& b) {
    if (a == b) return true;
    if (a->linear || b->linear || a->hash != b->hash) return false;
    return a->poly == b->poly;
}

bool factor_less(const FactorPtr& a, const FactorPtr& b) {
    if (a->hash != b->hash) return a->hash < b->hash;
    return Poly::compare(a->poly, b->poly) < 0;
}

using FactorList = std::vector<std::pair<FactorPtr, int>>;

// Sorted merge adding exponents; `sign` multiplies the exponents of b.
FactorList merge_factors(const FactorList& a, const FactorList& b, int sign = 1) {
    FactorList out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && factor_less(a[i].first, b[j].first))) {
            out.push_back(a[i++]);
        } else if (i == a.size() || factor_less(b[j].first, a[i].first)) {
            out.push_back({b[j].first, sign * b[j].second});
            ++j;
        } else {
            int e = a[i].second + sign * b[j].second;
            if (e != 0) out.push_back({a[i].first, e});
            ++i;
            ++j;
        }
    }
    return out;
}

FactorList normalize_list(FactorList l) {
    std::sort(l.begin(), l.end(), [](const auto& x, const auto& y) { return factor_less(x.first, y.first); });
    FactorList out;
    for (auto& [f, e] : l) {
        if (!out.empty() && same_factor(out.back().first, f))
            out.back().second += e;
        else
            out.push_back({f, e});
        if (out.back().second == 0) out.pop_back();
    }
    return out;
}

// ---------- divisibility filter ----------

const PrimeField& filter_field() {
    static const PrimeField F(kMersenne61);
    return F;
}

const FpPoint& filter_point() {
    static const FpPoint pt = [] {
        FpPoint p{};
        std::uint64_t s = 0x243f6a8885a308d3ull;
        for (auto& x : p) {
            s += 0x9e3779b97f4a7c15ull;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
            x = (z ^ (z >> 31)) % kMersenne61;
        }
        return p;
    }();
    return pt;
}

// Point on the zero set of the monic linear factor a.
FpPoint root_point(const Factor& a) {
    const auto& F = filter_field();
    FpPoint pt = filter_point();
    auto lead = static_cast<VarIndex>(__builtin_ctzll(a.support));
    pt[lead] = 0;
    std::uint64_t rest = a.compiled(F).eval(F, pt);
    pt[lead] = F.neg(rest);
    return pt;
}

// Quotient p / a for a linear factor a, if exact.
std::optional<Poly> divide_by_linear(const Factor& a, const Poly& p, const FpPoly* compiled_p) {
    if (p.is_constant()) return std::nullopt;
    if ((a.support & ~p.support()) != 0) return std::nullopt;
    const auto& F = filter_field();
    FpPoint pt = root_point(a);
    std::uint64_t v = compiled_p ? compiled_p->eval(F, pt) : FpPoly(p, F).eval(F, pt);
    if (v != 0) return std::nullopt;
    return p.divide_exact(a.poly);
}

// Common nonconstant factor of a and b, if any.
std::optional<Poly> common_factor(const Factor& a, const Factor& b) {
    if (a.linear && b.linear) return std::nullopt;
    if (a.linear) {
        if (divide_by_linear(a, b.poly, &b.compiled(filter_field()))) return a.poly;
        return std::nullopt;
    }
    if (b.linear) {
        if (divide_by_linear(b, a.poly, &a.compiled(filter_field()))) return b.poly;
        return std::nullopt;
    }
    Poly g = gcd(a.poly, b.poly);
    if (g.is_constant()) return std::nullopt;
    return g;
}

// ---------- shift cache ----------

struct ShiftKey {
    const Factor* f;
    VarIndex v;
    int k;
    bool operator==(const ShiftKey&) const = default;
};

struct ShiftKeyHash {
    std::size_t operator()(const ShiftKey& s) const noexcept {
        return std::hash<const void*>()(s.f) ^ (std::size_t(s.v) << 40) ^ (std::size_t(std::uint32_t(s.k)) * 0x9e3779b97f4a7c15ull);
    }
};

struct ShiftCache {
    std::shared_mutex mu;
    std::unordered_map<ShiftKey, std::pair<FactorPtr, Rational>, ShiftKeyHash> map;
};

ShiftCache& shift_cache() {
    static ShiftCache c;
    return c;
}

Poly shift_poly(const Poly& p, VarIndex v, int k) {
    Poly val = Poly::variable(v) + Poly::variable(hbar_var()) * Rational(k);
    return p.substitute(v, val);
}

std::pair<FactorPtr, Rational> shift_linear(const FactorPtr& f, VarIndex v, int k) {
    auto& c = shift_cache();
    ShiftKey key{f.get(), v, k};
    {
        std::shared_lock lock(c.mu);
        if (auto it = c.map.find(key); it != c.map.end()) return it->second;
    }
    auto r = make_factor(shift_poly(f->poly, v, k));
    std::unique_lock lock(c.mu);
    c.map.emplace(key, r);
    return r;
}

Rational qpow(const Rational& b, int e) {
    Rational r = 1;
    for (int t = 0; t < std::abs(e); ++t) r *= b;
    return e >= 0 ? r : Rational(1 / r);
}

Poly expand(const FactorList& l, bool negative_part) {
    Poly r(1);
    for (const auto& [f, e] : l) {
        if ((e < 0) != negative_part) continue;
        r *= f->poly.pow(static_cast<unsigned>(std::abs(e)));
    }
    return r;
}

}  // namespace

// ---------- Factor ----------

const FpPoly& Factor::compiled(const PrimeField& F) const {
    std::lock_guard lock(mu_);
    for (const auto& [p, c] : compiled_)
        if (p == F.modulus()) return c;
    compiled_.emplace_back(F.modulus(), FpPoly(poly, F));
    return compiled_.back().second;
}

std::pair<FactorPtr, Rational> make_factor(Poly poly) {
    if (poly.is_constant()) throw Error(ErrorCode::InvalidArgument, "constant polynomial is not a factor");
    Rational lc = poly.make_monic();
    if (poly.total_degree() == 1) return {intern_linear(std::move(poly)), lc};
    return {new_factor(std::move(poly)), lc};
}

// ---------- RatFunc ----------

RatFunc::RatFunc(const Rational& c) : c_(c) {}

RatFunc::RatFunc(const Poly& p) {
    if (p.is_constant()) {
        c_ = p.constant_value();
        return;
    }
    auto [f, lc] = make_factor(p);
    c_ = lc;
    factors_.push_back({std::move(f), 1});
}

RatFunc RatFunc::variable(VarIndex v) { return RatFunc(Poly::variable(v)); }

RatFunc RatFunc::variable(std::string_view name) { return variable(intern_var(name)); }

RatFunc RatFunc::fraction(const Poly& num, const Poly& den) { return RatFunc(num) / RatFunc(den); }

std::uint64_t RatFunc::support() const {
    std::uint64_t s = 0;
    for (const auto& [f, e] : factors_) s |= f->support;
    return s;
}

Poly RatFunc::numerator() const {
    if (is_zero()) return Poly();
    return expand(factors_, false) * c_;
}

Poly RatFunc::denominator() const { return expand(factors_, true); }

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.c_ = -r.c_;
    return r;
}

void RatFunc::reduce(bool full) {
    if (sgn(c_) == 0) {
        factors_.clear();
        return;
    }
    if (!full) return;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < factors_.size() && !changed; ++i) {
            if (factors_[i].second > 0) continue;
            for (std::size_t j = 0; j < factors_.size() && !changed; ++j) {
                if (factors_[j].second < 0) continue;
                const auto& A = factors_[i].first;
                const auto& P = factors_[j].first;
                auto g = common_factor(*A, *P);
                if (!g) continue;
                FactorList split;
                auto [gf, glc] = make_factor(*g);
                for (std::size_t k : {i, j}) {
                    const auto& [f, e] = factors_[k];
                    Poly cof = *f->poly.divide_exact(gf->poly);
                    split.push_back({gf, e});
                    if (!cof.is_constant()) {
                        auto [cf, clc] = make_factor(cof);
                        c_ *= qpow(clc, e);
                        split.push_back({cf, e});
                    } else {
                        c_ *= qpow(cof.constant_value(), e);
                    }
                }
                FactorList rest;
                for (std::size_t k = 0; k < factors_.size(); ++k)
                    if (k != i && k != j) rest.push_back(factors_[k]);
                for (auto& s : split) rest.push_back(s);
                factors_ = normalize_list(std::move(rest));
                changed = true;
            }
        }
    }
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc();
    RatFunc r;
    r.c_ = a.c_ * b.c_;
    if (b.factors_.empty()) {
        r.factors_ = a.factors_;
        return r;
    }
    if (a.factors_.empty()) {
        r.factors_ = b.factors_;
        return r;
    }
    r.factors_ = merge_factors(a.factors_, b.factors_);
    // Cross pairs involving a nonlinear factor may share a factor that
    // identity merging does not see.
    bool full = false;
    auto cross = [&](const FactorList& x, const FactorList& y) {
        for (const auto& [A, ea] : x) {
            if (ea > 0) continue;
            for (const auto& [P, ep] : y) {
                if (ep < 0 || (A->linear && P->linear) || same_factor(A, P)) continue;
                if (common_factor(*A, *P)) return true;
            }
        }
        return false;
    };
    full = cross(a.factors_, b.factors_) || cross(b.factors_, a.factors_);
    r.reduce(full);
    return r;
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero rational function");
    RatFunc r;
    r.c_ = 1 / c_;
    r.factors_ = factors_;
    for (auto& [f, e] : r.factors_) e = -e;
    return r;
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

RatFunc RatFunc::pow(int e) const {
    if (e == 0) return RatFunc(1);
    if (e < 0) return inverse().pow(-e);
    RatFunc r;
    mpq_class c = 1;
    for (int k = 0; k < e; ++k) c *= c_;
    r.c_ = c;
    r.factors_ = factors_;
    for (auto& [f, x] : r.factors_) x *= e;
    r.reduce(false);
    return r;
}

RatFunc RatFunc::sum(std::span<const RatFunc> terms) {
    std::vector<const RatFunc*> nz;
    for (const auto& t : terms)
        if (!t.is_zero()) nz.push_back(&t);
    if (nz.empty()) return RatFunc();
    if (nz.size() == 1) return *nz[0];

    // common part: min exponent over all terms (absent = 0)
    FactorList all;
    for (const auto* t : nz)
        for (const auto& fe : t->factors_) all.push_back(fe);
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return factor_less(x.first, y.first); });
    FactorList common;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        int mn = all[i].second;
        while (j < all.size() && same_factor(all[j].first, all[i].first)) mn = std::min(mn, all[j++].second);
        if (j - i < nz.size()) mn = std::min(mn, 0);
        if (mn != 0) common.push_back({all[i].first, mn});
        i = j;
    }

    Poly s;
    std::map<std::pair<const Factor*, int>, Poly> powers;
    auto power = [&](const FactorPtr& f, int e) -> const Poly& {
        auto key = std::make_pair(f.get(), e);
        auto it = powers.find(key);
        if (it == powers.end()) it = powers.emplace(key, f->poly.pow(static_cast<unsigned>(e))).first;
        return it->second;
    };
    for (const auto* t : nz) {
        FactorList rel = merge_factors(t->factors_, common, -1);
        std::sort(rel.begin(), rel.end(), [](const auto& x, const auto& y) { return x.first->poly.size() < y.first->poly.size(); });
        Poly p(t->c_);
        for (const auto& [f, e] : rel) p *= power(f, e);
        s += p;
    }
    if (s.is_zero()) return RatFunc();

    RatFunc r;
    r.c_ = s.make_monic();
    if (s.is_constant()) {
        r.factors_ = std::move(common);
        r.reduce(false);
        return r;
    }
    bool nonlinear_den = false;
    for (auto& [f, e] : common) {
        if (e >= 0) continue;
        if (!f->linear) {
            nonlinear_den = true;
            continue;
        }
        while (e < 0 && !s.is_constant()) {
            auto q = divide_by_linear(*f, s, nullptr);
            if (!q) break;
            s = std::move(*q);
            ++e;
        }
    }
    std::erase_if(common, [](const auto& fe) { return fe.second == 0; });
    if (!s.is_constant()) {
        auto [sf, lc] = make_factor(std::move(s));
        r.c_ *= lc;
        common.push_back({std::move(sf), 1});
    } else {
        r.c_ *= s.constant_value();
    }
    r.factors_ = normalize_list(std::move(common));
    r.reduce(nonlinear_den);
    return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const RatFunc t[2] = {a, b};
    return RatFunc::sum(t);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

bool operator==(const RatFunc& a, const RatFunc& b) {
    if (a.c_ == b.c_ && a.factors_.size() == b.factors_.size()) {
        bool same = true;
        for (std::size_t k = 0; k < a.factors_.size() && same; ++k)
            same = same_factor(a.factors_[k].first, b.factors_[k].first) && a.factors_[k].second == b.factors_[k].second;
        if (same) return true;
    }
    return (a - b).is_zero();
}

std::ostream& operator<<(std::ostream& os, const RatFunc& f) { return os << f.to_string(); }

RatFunc RatFunc::shift(const Shift& s) const {
    for (const auto& [v, k] : s)
        if (var_info(v).kind != VarKind::Node)
            throw Error(ErrorCode::ShiftOnNonNodeVar, "shift on non-node variable " + var_info(v).name);
    if (is_zero() || s.empty()) return *this;
    std::uint64_t mask = 0;
    for (const auto& [v, k] : s)
        if (k != 0) mask |= std::uint64_t{1} << v;
    RatFunc r;
    r.c_ = c_;
    FactorList out;
    out.reserve(factors_.size());
    bool moved = false;
    for (const auto& [f, e] : factors_) {
        if ((f->support & mask) == 0) {
            out.push_back({f, e});
            continue;
        }
        moved = true;
        FactorPtr g = f;
        Rational lc = 1;
        if (f->linear) {
            for (const auto& [v, k] : s) {
                if (k == 0 || !((g->support >> v) & 1u)) continue;
                auto [h, c] = shift_linear(g, v, k);
                g = h;
                lc *= c;
            }
        } else {
            Poly p = f->poly;
            for (const auto& [v, k] : s)
                if (k != 0) p = shift_poly(p, v, k);
            auto [h, c] = make_factor(std::move(p));
            g = h;
            lc = c;
        }
        r.c_ *= qpow(lc, e);
        out.push_back({g, e});
    }
    r.factors_ = moved ? normalize_list(std::move(out)) : std::move(out);
    return r;
}

RatFunc RatFunc::substitute(VarIndex v, const Poly& value) const {
    if (!contains(v)) return *this;
    RatFunc r(c_);
    FactorList out;
    for (const auto& [f, e] : factors_) {
        if (!((f->support >> v) & 1u)) {
            out.push_back({f, e});
            continue;
        }
        Poly q = f->poly.substitute(v, value);
        if (q.is_zero()) {
            if (e < 0) throw Error(ErrorCode::DivisionByZero, "substitution makes a denominator vanish");
            return RatFunc();
        }
        Rational base = q.is_constant() ? q.constant_value() : Rational(0);
        if (!q.is_constant()) {
            auto [g, lc] = make_factor(std::move(q));
            base = lc;
            out.push_back({g, e});
        }
        r.c_ *= qpow(base, e);
    }
    r.factors_ = normalize_list(std::move(out));
    r.reduce(true);
    return r;
}

RatFunc RatFunc::substitute(VarIndex v, const RatFunc& value) const {
    if (!contains(v)) return *this;
    bool polynomial = std::all_of(value.factors_.begin(), value.factors_.end(), [](const auto& fe) { return fe.second > 0; });
    if (polynomial) return substitute(v, value.numerator());
    RatFunc r(c_);
    for (const auto& [f, e] : factors_) {
        if (!((f->support >> v) & 1u)) {
            RatFunc g;
            g.c_ = 1;
            g.factors_ = {{f, e}};
            r *= g;
            continue;
        }
        auto cs = f->poly.coefficients_in(v);
        RatFunc acc(cs.back());
        for (std::size_t k = cs.size() - 1; k-- > 0;) acc = acc * value + RatFunc(cs[k]);
        if (acc.is_zero() && e < 0) throw Error(ErrorCode::DivisionByZero, "substitution makes a denominator vanish");
        r *= acc.pow(e);
    }
    return r;
}

std::uint64_t RatFunc::evaluate(const PrimeField& F, const FpPoint& pt) const {
    std::uint64_t acc = F.from_rational(c_);
    for (const auto& [f, e] : factors_) {
        std::uint64_t x = f->compiled(F).eval(F, pt);
        if (e < 0) {
            if (x == 0) throw Error(ErrorCode::PoleHit, "denominator vanishes at evaluation point");
            x = F.inv(x);
        }
        acc = F.mul(acc, F.pow(x, static_cast<std::uint64_t>(std::abs(e))));
    }
    return acc;
}

Rational RatFunc::evaluate(const std::vector<std::pair<VarIndex, Rational>>& point) const {
    Rational acc = c_;
    for (const auto& [f, e] : factors_) {
        Poly p = f->poly;
        for (const auto& [v, q] : point) p = p.substitute(v, Poly(q));
        if (!p.is_constant()) throw Error(ErrorCode::InvalidArgument, "evaluation point does not cover every variable");
        Rational x = p.constant_value();
        if (sgn(x) == 0 && e < 0) throw Error(ErrorCode::PoleHit, "denominator vanishes at evaluation point");
        acc *= qpow(x, e);
    }
    return acc;
}

std::string RatFunc::to_string() const {
    if (is_zero()) return "0";
    // Denominator factors are printed monic in the printing order, so the
    // text does not depend on the variable table; the numerator absorbs the
    // rescaling.
    Rational scale(1);
    std::vector<std::pair<Poly, int>> lin;
    Poly nonlin(1);
    for (const auto& [f, e] : factors_) {
        if (e > 0) continue;
        if (f->linear) {
            Poly g = f->poly;
            Rational lc = g.printed_terms().front().c;
            g *= Rational(1 / lc);
            for (int k = 0; k < -e; ++k) scale /= lc;
            lin.emplace_back(std::move(g), -e);
        } else {
            nonlin *= f->poly.pow(static_cast<unsigned>(-e));
        }
    }
    if (!nonlin.is_one()) {
        Rational lc = nonlin.printed_terms().front().c;
        nonlin *= Rational(1 / lc);
        scale /= lc;
    }
    Poly num = numerator() * scale;
    if (lin.empty() && nonlin.is_one()) return num.to_string();
    std::sort(lin.begin(), lin.end(), [](const auto& x, const auto& y) { return Poly::print_compare(x.first, y.first) < 0; });
    std::string den;
    for (const auto& [g, e] : lin) {
        if (!den.empty()) den += '*';
        den += "(" + g.to_string() + ")";
        if (e > 1) den += "^" + std::to_string(e);
    }
    if (!nonlin.is_one()) {
        if (!den.empty()) den += '*';
        den += "(" + nonlin.to_string() + ")";
    }
    std::string ns = num.size() == 1 ? num.to_string() : "(" + num.to_string() + ")";
    return ns + "/(" + den + ")";
}

// ---------- Laurent expansion and truncation ----------

std::vector<RatFunc> laurent_coefficients(const RatFunc& f, VarIndex var, std::span<const int> ks) {
    std::vector<RatFunc> out(ks.size());
    if (f.is_zero() || ks.empty()) return out;
    FactorList dep;
    RatFunc rest(f.constant());
    {
        FactorList free;
        for (const auto& fe : f.factors())
            ((fe.first->support >> var) & 1u ? dep : free).push_back(fe);
        if (!free.empty()) {
            // rebuild the var-free part through arithmetic to keep it canonical
            for (const auto& [g, e] : free) rest *= RatFunc(g->poly).pow(e);
        }
    }
    Poly N = expand(dep, false), D = expand(dep, true);
    auto nc = N.coefficients_in(var), dc = D.coefficients_in(var);
    int n = static_cast<int>(nc.size()) - 1, m = static_cast<int>(dc.size()) - 1;
    int top = n - m;
    int lo = *std::min_element(ks.begin(), ks.end());
    if (lo > top) return out;
    // a[j] is the coefficient of var^(top - j)
    std::size_t count = static_cast<std::size_t>(top - lo + 1);
    std::vector<RatFunc> a(count);
    if (dc[m].is_constant()) {
        Rational inv = 1 / dc[m].constant_value();
        std::vector<Poly> ap(count);
        for (std::size_t j = 0; j < count; ++j) {
            Poly acc = n - static_cast<int>(j) >= 0 ? nc[n - j] : Poly();
            for (std::size_t i = 1; i <= std::min<std::size_t>(j, m); ++i) acc -= dc[m - i] * ap[j - i];
            ap[j] = acc * inv;
            a[j] = RatFunc(ap[j]);
        }
    } else {
        RatFunc lead(dc[m]);
        for (std::size_t j = 0; j < count; ++j) {
            std::vector<RatFunc> parts;
            if (n - static_cast<int>(j) >= 0) parts.emplace_back(nc[n - j]);
            for (std::size_t i = 1; i <= std::min<std::size_t>(j, m); ++i) parts.push_back(-(RatFunc(dc[m - i]) * a[j - i]));
            a[j] = RatFunc::sum(parts) / lead;
        }
    }
    for (std::size_t q = 0; q < ks.size(); ++q) {
        int k = ks[q];
        if (k > top) continue;
        out[q] = a[static_cast<std::size_t>(top - k)] * rest;
    }
    return out;
}

RatFunc laurent_coefficient(const RatFunc& f, VarIndex var, int k) {
    int ks[1] = {k};
    return laurent_coefficients(f, var, ks)[0];
}

RatFunc truncate_proper(const RatFunc& f, VarIndex var) { return RatFunc::sum(proper_parts(f, var)); }

std::vector<RatFunc> proper_parts(const RatFunc& f, VarIndex var) {
    std::vector<std::size_t> poles;
    const auto& fs = f.factors();
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const auto& [g, e] = fs[k];
        if (e > 0 || !((g->support >> var) & 1u)) continue;
        if (g->poly.degree_in(var) != 1)
            throw Error(ErrorCode::NonLinearFactor, "denominator factor not linear in " + var_info(var).name + ": " + g->poly.to_string());
        if (e < -1) throw Error(ErrorCode::RepeatedPole, "repeated pole in " + var_info(var).name + ": " + g->poly.to_string());
        poles.push_back(k);
    }
    if (poles.empty()) return {};
    std::vector<RatFunc> roots;
    for (std::size_t k : poles) {
        auto cs = fs[k].first->poly.coefficients_in(var);
        roots.push_back(-RatFunc(cs[0]) / RatFunc(cs[1]));
    }
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (roots[i] == roots[j])
                throw Error(ErrorCode::RepeatedPole, "coincident poles in " + var_info(var).name);
    std::vector<RatFunc> parts;
    for (std::size_t q = 0; q < poles.size(); ++q) {
        const auto& A = fs[poles[q]].first;
        RatFunc inv_a;
        {
            RatFunc a(A->poly);
            inv_a = a.inverse();
        }
        RatFunc rest = f * RatFunc(A->poly);
        parts.push_back(rest.substitute(var, roots[q]) * inv_a);
    }
    return parts;
}

// ---------- Bernoulli ----------

std::vector<Rational> bernoulli_coefficients(unsigned n) {
    // Bernoulli numbers with B_1 = -1/2, from sum_{j<=m} C(m+1, j) B_j = 0.
    std::vector<Rational> B(n + 1);
    B[0] = 1;
    for (unsigned m = 1; m <= n; ++m) {
        Rational s = 0;
        mpz_class binom = 1;  // C(m+1, j)
        for (unsigned j = 0; j < m; ++j) {
            s += Rational(binom) * B[j];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        B[m] = -s / Rational(m + 1);
    }
    std::vector<Rational> c(n + 1);
    mpz_class binom = 1;  // C(n, k)
    for (unsigned k = 0; k <= n; ++k) {
        c[n - k] = Rational(binom) * B[k];
        binom = binom * (n - k) / (k + 1);
    }
    return c;
}

Poly bernoulli_polynomial(unsigned n, VarIndex x) {
    auto c = bernoulli_coefficients(n);
    std::vector<Poly> cs;
    for (const auto& q : c) cs.emplace_back(q);
    return Poly::from_coefficients(x, cs);
}

}  // namespace gklo
