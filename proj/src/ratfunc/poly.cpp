#include "gklo/poly.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "gklo/error.hpp"

namespace gklo {
namespace {

struct Desc {
    bool operator()(const Monomial& a, const Monomial& b) const { return kernels().compare(a, b) > 0; }
};

Monomial unit_monomial(VarIndex v, unsigned e) {
    Monomial m;
    if (e > 255) throw Error(ErrorCode::ExponentOverflow, "exponent exceeds 255");
    m.exp[v] = static_cast<std::uint8_t>(e);
    return m;
}

void combine_sorted(std::vector<Term>& t) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < t.size();) {
        std::size_t j = k + 1;
        Rational c = t[k].c;
        while (j < t.size() && t[j].m == t[k].m) c += t[j++].c;
        if (sgn(c) != 0) {
            t[out].m = t[k].m;
            t[out].c = std::move(c);
            ++out;
        }
        k = j;
    }
    t.resize(out);
}

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    const auto& K = kernels();
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c = i == a.size() ? -1 : j == b.size() ? 1 : K.compare(a[i].m, b[j].m);
        if (c > 0) {
            out.push_back(a[i++]);
        } else if (c < 0) {
            out.push_back(b[j++]);
            if (subtract) out.back().c = -out.back().c;
        } else {
            Rational s = subtract ? Rational(a[i].c - b[j].c) : Rational(a[i].c + b[j].c);
            if (sgn(s) != 0) out.push_back({a[i].m, std::move(s)});
            ++i;
            ++j;
        }
    }
    return out;
}

std::vector<Term> mul_sorting(const std::vector<Term>& a, const std::vector<Term>& b) {
    std::vector<Monomial> am(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) am[k] = a[k].m;
    std::vector<Monomial> prod(a.size());
    std::vector<Term> out;
    out.reserve(a.size() * b.size());
    const auto& K = kernels();
    for (const auto& tb : b) {
        if (!K.mul_batch(am.data(), am.size(), tb.m, prod.data()))
            throw Error(ErrorCode::ExponentOverflow, "exponent exceeds 255");
        for (std::size_t k = 0; k < a.size(); ++k) out.push_back({prod[k], a[k].c * tb.c});
    }
    std::sort(out.begin(), out.end(), [&](const Term& x, const Term& y) { return K.compare(x.m, y.m) > 0; });
    combine_sorted(out);
    return out;
}

// Heap merge of the rows b[i] * a, each already descending.
std::vector<Term> mul_heap(const std::vector<Term>& a, const std::vector<Term>& b) {
    const auto& K = kernels();
    struct Entry {
        Monomial m;
        std::uint32_t i, j;
    };
    auto less = [&](const Entry& x, const Entry& y) { return K.compare(x.m, y.m) < 0; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(less)> heap(less);
    auto push = [&](std::uint32_t i, std::uint32_t j) {
        Entry e{{}, i, j};
        if (!K.mul_batch(&a[j].m, 1, b[i].m, &e.m)) throw Error(ErrorCode::ExponentOverflow, "exponent exceeds 255");
        heap.push(e);
    };
    for (std::uint32_t i = 0; i < b.size(); ++i) push(i, 0);
    std::vector<Term> out;
    Rational acc, tmp;
    while (!heap.empty()) {
        Monomial m = heap.top().m;
        acc = 0;
        while (!heap.empty() && heap.top().m == m) {
            Entry e = heap.top();
            heap.pop();
            mpq_mul(tmp.get_mpq_t(), a[e.j].c.get_mpq_t(), b[e.i].c.get_mpq_t());
            acc += tmp;
            if (e.j + 1 < a.size()) push(e.i, e.j + 1);
        }
        if (sgn(acc) != 0) out.push_back({m, acc});
    }
    return out;
}

}  // namespace

Poly::Poly(const Rational& c) {
    if (sgn(c) != 0) {
        terms_.push_back({Monomial{}, c});
        terms_.back().c.canonicalize();
    }
}

Poly Poly::variable(VarIndex v) { return monomial(unit_monomial(v, 1), Rational(1)); }

Poly Poly::monomial(const Monomial& m, const Rational& c) {
    Poly p;
    if (sgn(c) != 0) {
        p.terms_.push_back({m, c});
        p.terms_.back().c.canonicalize();
    }
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    for (auto& t : terms) t.c.canonicalize();
    const auto& K = kernels();
    std::sort(terms.begin(), terms.end(), [&](const Term& x, const Term& y) { return K.compare(x.m, y.m) > 0; });
    combine_sorted(terms);
    Poly p;
    p.terms_ = std::move(terms);
    return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m == Monomial{}); }

bool Poly::is_one() const { return terms_.size() == 1 && terms_[0].m == Monomial{} && terms_[0].c == 1; }

Rational Poly::constant_value() const { return terms_.empty() ? Rational(0) : terms_.back().m == Monomial{} ? terms_.back().c : Rational(0); }

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : kernels().degree(terms_.front().m); }

unsigned Poly::degree_in(VarIndex v) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max<unsigned>(d, t.m.exp[v]);
    return d;
}

std::uint64_t Poly::support() const {
    std::uint64_t s = 0;
    const auto& K = kernels();
    for (const auto& t : terms_) s |= K.support(t.m);
    return s;
}

bool Poly::is_affine() const { return total_degree() <= 1; }

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_) t.c = -t.c;
    return p;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) return *this = o;
    terms_ = merge(terms_, o.terms_, false);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    terms_ = merge(terms_, o.terms_, true);
    return *this;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
    if (sgn(c) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.c *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    const Poly& big = a.size() >= b.size() ? a : b;
    const Poly& small = a.size() >= b.size() ? b : a;
    if (small.size() == 1) return big.mul_monomial(small.terms_[0].m, small.terms_[0].c);
    Poly p;
    if (big.size() * small.size() <= 16384)
        p.terms_ = mul_sorting(big.terms_, small.terms_);
    else
        p.terms_ = mul_heap(big.terms_, small.terms_);
    return p;
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
        if (!(a.terms_[k].m == b.terms_[k].m) || a.terms_[k].c != b.terms_[k].c) return false;
    return true;
}

Poly Poly::pow(unsigned e) const {
    Poly r(1), base = *this;
    while (e) {
        if (e & 1u) r *= base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

Poly Poly::mul_monomial(const Monomial& m, const Rational& c) const {
    Poly p;
    if (sgn(c) == 0 || terms_.empty()) return p;
    std::vector<Monomial> src(terms_.size()), dst(terms_.size());
    for (std::size_t k = 0; k < terms_.size(); ++k) src[k] = terms_[k].m;
    if (!kernels().mul_batch(src.data(), src.size(), m, dst.data()))
        throw Error(ErrorCode::ExponentOverflow, "exponent exceeds 255");
    p.terms_.resize(terms_.size());
    for (std::size_t k = 0; k < terms_.size(); ++k) p.terms_[k] = {dst[k], terms_[k].c * c};
    return p;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
    if (d.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
    if (is_zero()) return Poly();
    if (d.is_constant()) return *this * Rational(1 / d.terms_[0].c);
    const auto& K = kernels();
    if (!K.divides(d.terms_.front().m, terms_.front().m) || !K.divides(d.terms_.back().m, terms_.back().m))
        return std::nullopt;
    if (total_degree() < d.total_degree()) return std::nullopt;
    for (std::uint64_t ds = d.support(); ds; ds &= ds - 1) {
        auto v = static_cast<VarIndex>(__builtin_ctzll(ds));
        if (d.degree_in(v) > degree_in(v)) return std::nullopt;
    }

    std::map<Monomial, Rational, Desc> rem;
    for (const auto& t : terms_) rem.emplace_hint(rem.end(), t.m, t.c);
    const Term& ld = d.terms_.front();
    std::vector<Term> q;
    Monomial qm, pm;
    while (!rem.empty()) {
        auto top = rem.begin();
        if (!K.divides(ld.m, top->first)) return std::nullopt;
        K.quotient(top->first, ld.m, qm);
        Rational qc = top->second / ld.c;
        rem.erase(top);
        for (std::size_t k = 1; k < d.terms_.size(); ++k) {
            K.mul_batch(&d.terms_[k].m, 1, qm, &pm);
            auto [it, inserted] = rem.try_emplace(pm);
            it->second -= qc * d.terms_[k].c;
            if (sgn(it->second) == 0) rem.erase(it);
        }
        q.push_back({qm, std::move(qc)});
    }
    Poly p;
    p.terms_ = std::move(q);
    return p;
}

std::vector<Poly> Poly::coefficients_in(VarIndex v) const {
    std::vector<Poly> out(degree_in(v) + 1);
    if (terms_.empty()) return {};
    for (const auto& t : terms_) {
        Term s = t;
        unsigned e = s.m.exp[v];
        s.m.exp[v] = 0;
        out[e].terms_.push_back(std::move(s));
    }
    return out;
}

Poly Poly::from_coefficients(VarIndex v, const std::vector<Poly>& coeffs) {
    Poly r;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (!coeffs[k].is_zero()) r += coeffs[k].mul_monomial(unit_monomial(v, static_cast<unsigned>(k)), Rational(1));
    return r;
}

Poly Poly::substitute(VarIndex v, const Poly& value) const {
    if (!contains(v)) return *this;
    auto cs = coefficients_in(v);
    Poly r = cs.back();
    for (std::size_t k = cs.size() - 1; k-- > 0;) {
        r *= value;
        r += cs[k];
    }
    return r;
}

Rational Poly::make_monic() {
    if (terms_.empty()) return Rational(0);
    Rational lc = terms_.front().c;
    if (lc != 1) {
        Rational inv = 1 / lc;
        for (auto& t : terms_) t.c *= inv;
    }
    return lc;
}

int Poly::compare(const Poly& a, const Poly& b) {
    const auto& K = kernels();
    std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (int c = K.compare(a.terms_[k].m, b.terms_[k].m)) return c;
        if (int c = cmp(a.terms_[k].c, b.terms_[k].c)) return c < 0 ? -1 : 1;
    }
    if (a.terms_.size() == b.terms_.size()) return 0;
    return a.terms_.size() < b.terms_.size() ? -1 : 1;
}

std::size_t Poly::hash() const {
    std::size_t h = terms_.size();
    MonomialHash mh;
    for (const auto& t : terms_) {
        std::size_t x = mh(t.m);
        x ^= mpz_get_ui(t.c.get_num_mpz_t()) * 0x9e3779b97f4a7c15ull;
        x ^= mpz_get_ui(t.c.get_den_mpz_t()) * 0xc2b2ae3d27d4eb4full;
        if (sgn(t.c) < 0) x = ~x;
        h = h * 1000003u ^ x;
    }
    return h;
}

namespace {

std::vector<VarIndex> print_order(std::uint64_t support) {
    std::vector<VarIndex> vs;
    for (std::size_t v = 0; v < kMaxVars; ++v)
        if ((support >> v) & 1u) vs.push_back(static_cast<VarIndex>(v));
    std::sort(vs.begin(), vs.end(), var_print_less);
    return vs;
}

}  // namespace

std::string monomial_to_string(const Monomial& m) {
    std::string s;
    for (VarIndex v : print_order(kernels().support(m))) {
        if (!s.empty()) s += '*';
        s += var_info(v).name;
        if (m.exp[v] > 1) s += '^' + std::to_string(m.exp[v]);
    }
    return s;
}

int monomial_print_compare(const Monomial& a, const Monomial& b) {
    const auto& K = kernels();
    const auto da = K.degree(a), db = K.degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (VarIndex v : print_order(K.support(a) | K.support(b)))
        if (a.exp[v] != b.exp[v]) return a.exp[v] < b.exp[v] ? -1 : 1;
    return 0;
}

std::vector<Term> Poly::printed_terms() const {
    std::vector<Term> t = terms_;
    std::sort(t.begin(), t.end(), [](const Term& x, const Term& y) { return monomial_print_compare(x.m, y.m) > 0; });
    return t;
}

int Poly::print_compare(const Poly& a, const Poly& b) {
    auto ta = a.printed_terms(), tb = b.printed_terms();
    std::size_t n = std::min(ta.size(), tb.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (int c = monomial_print_compare(ta[k].m, tb[k].m)) return c;
        if (int c = cmp(ta[k].c, tb[k].c)) return c < 0 ? -1 : 1;
    }
    if (ta.size() == tb.size()) return 0;
    return ta.size() < tb.size() ? -1 : 1;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : printed_terms()) {
        Rational a = abs(t.c);
        bool neg = sgn(t.c) < 0;
        if (first)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        first = false;
        std::string mono = monomial_to_string(t.m);
        if (mono.empty())
            s += a.get_str();
        else if (a == 1)
            s += mono;
        else
            s += a.get_str() + "*" + mono;
    }
    return s;
}

namespace {

int main_var(std::uint64_t s) { return s ? __builtin_ctzll(s) : -1; }

Poly content_in(const Poly& p, VarIndex x) {
    Poly g;
    for (const auto& c : p.coefficients_in(x)) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? [&] { Poly m = c; m.make_monic(); return m; }() : gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

Poly lc_in(const Poly& p, VarIndex x) { return p.coefficients_in(x).back(); }

Poly prem(const Poly& a, const Poly& b, VarIndex x) {
    Poly r = a;
    unsigned db = b.degree_in(x);
    Poly lb = lc_in(b, x);
    while (!r.is_zero() && r.degree_in(x) >= db) {
        unsigned k = r.degree_in(x) - db;
        Poly lr = lc_in(r, x);
        Monomial xm;
        xm.exp[x] = static_cast<std::uint8_t>(k);
        r = lb * r - (lr * b).mul_monomial(xm, Rational(1));
    }
    return r;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero() && b.is_zero()) return Poly();
    if (a.is_zero() || b.is_zero()) {
        Poly g = a.is_zero() ? b : a;
        g.make_monic();
        return g;
    }
    if (a.is_constant() || b.is_constant()) return Poly(1);
    int xi = main_var(a.support() | b.support());
    auto x = static_cast<VarIndex>(xi);
    if (!a.contains(x)) return gcd(a, content_in(b, x));
    if (!b.contains(x)) return gcd(content_in(a, x), b);
    Poly ca = content_in(a, x), cb = content_in(b, x);
    Poly pa = *a.divide_exact(ca), pb = *b.divide_exact(cb);
    pa.make_monic();
    pb.make_monic();
    Poly c = gcd(ca, cb);
    if (pa.degree_in(x) < pb.degree_in(x)) std::swap(pa, pb);
    Poly g;
    for (;;) {
        Poly r = prem(pa, pb, x);
        if (r.is_zero()) {
            g = pb;
            break;
        }
        if (!r.contains(x)) {
            g = Poly(1);
            break;
        }
        pa = std::move(pb);
        Poly cr = content_in(r, x);
        pb = *r.divide_exact(cr);
        pb.make_monic();
    }
    g = *g.divide_exact(content_in(g, x));
    Poly out = c * g;
    out.make_monic();
    return out;
}

}  // namespace gklo
