#include "gklo/diffop.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "gklo/error.hpp"

namespace gklo {

ShiftMonomial ShiftMonomial::unit(VarIndex v, int k) { return from_exponents({{v, k}}); }

ShiftMonomial ShiftMonomial::from_exponents(Shift e) {
    for (const auto& [v, k] : e)
        if (var_info(v).kind != VarKind::Node)
            throw Error(ErrorCode::ShiftOnNonNodeVar, "shift on non-node variable " + var_info(v).name);
    std::sort(e.begin(), e.end());
    Shift out;
    for (const auto& [v, k] : e) {
        if (!out.empty() && out.back().first == v)
            out.back().second += k;
        else
            out.emplace_back(v, k);
        if (out.back().second == 0) out.pop_back();
    }
    ShiftMonomial m;
    m.e_ = std::move(out);
    return m;
}

int ShiftMonomial::exponent(VarIndex v) const {
    for (const auto& [w, k] : e_)
        if (w == v) return k;
    return 0;
}

ShiftMonomial ShiftMonomial::inverse() const {
    ShiftMonomial m = *this;
    for (auto& [v, k] : m.e_) k = -k;
    return m;
}

ShiftMonomial operator*(const ShiftMonomial& a, const ShiftMonomial& b) {
    ShiftMonomial m;
    auto i = a.e_.begin(), j = b.e_.begin();
    while (i != a.e_.end() || j != b.e_.end()) {
        if (j == b.e_.end() || (i != a.e_.end() && i->first < j->first)) {
            m.e_.push_back(*i++);
        } else if (i == a.e_.end() || j->first < i->first) {
            m.e_.push_back(*j++);
        } else {
            int k = i->second + j->second;
            if (k != 0) m.e_.emplace_back(i->first, k);
            ++i;
            ++j;
        }
    }
    return m;
}

std::strong_ordering operator<=>(const ShiftMonomial& a, const ShiftMonomial& b) {
    auto i = a.e_.begin(), j = b.e_.begin();
    while (i != a.e_.end() || j != b.e_.end()) {
        if (j == b.e_.end() || (i != a.e_.end() && i->first < j->first)) return i->second <=> 0;
        if (i == a.e_.end() || j->first < i->first) return 0 <=> j->second;
        if (i->second != j->second) return i->second <=> j->second;
        ++i;
        ++j;
    }
    return std::strong_ordering::equal;
}

std::string ShiftMonomial::to_string() const {
    if (e_.empty()) return "1";
    Shift sorted = e_;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return var_print_less(a.first, b.first); });
    std::string s;
    for (const auto& [v, k] : sorted) {
        if (!s.empty()) s += '*';
        s += "d" + var_info(v).name.substr(1);
        if (k != 1) s += "^" + std::to_string(k);
    }
    return s;
}

DiffOp::DiffOp(const RatFunc& f) {
    if (!f.is_zero()) terms_.emplace(ShiftMonomial(), f);
}

DiffOp::DiffOp(const RatFunc& f, const ShiftMonomial& m) {
    if (!f.is_zero()) terms_.emplace(m, f);
}

DiffOp DiffOp::shift(VarIndex v, int k) { return DiffOp(RatFunc(1), ShiftMonomial::unit(v, k)); }

RatFunc DiffOp::coefficient(const ShiftMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? RatFunc() : it->second;
}

std::uint64_t DiffOp::join_context(const DiffOp& a, const DiffOp& b) {
    if (a.context_ && b.context_ && a.context_ != b.context_)
        throw Error(ErrorCode::ContextMismatch, "operators from different quiver contexts");
    return a.context_ ? a.context_ : b.context_;
}

DiffOp DiffOp::operator-() const {
    DiffOp r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

DiffOp DiffOp::sum(const std::vector<DiffOp>& parts) {
    DiffOp r;
    std::map<ShiftMonomial, std::vector<RatFunc>> acc;
    for (const auto& p : parts) {
        r.context_ = join_context(r, p);
        for (const auto& [m, c] : p.terms_) acc[m].push_back(c);
    }
    for (auto& [m, cs] : acc) {
        RatFunc c = cs.size() == 1 ? cs.front() : RatFunc::sum(cs);
        if (!c.is_zero()) r.terms_.emplace(m, std::move(c));
    }
    return r;
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) { return DiffOp::sum({a, b}); }
DiffOp operator-(const DiffOp& a, const DiffOp& b) { return DiffOp::sum({a, -b}); }

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
    DiffOp r;
    r.context_ = DiffOp::join_context(a, b);
    std::map<ShiftMonomial, std::vector<RatFunc>> acc;
    for (const auto& [l, f] : a.terms_)
        for (const auto& [m, g] : b.terms_) acc[l * m].push_back(f * g.shift(l.exponents()));
    for (auto& [m, cs] : acc) {
        RatFunc c = cs.size() == 1 ? cs.front() : RatFunc::sum(cs);
        if (!c.is_zero()) r.terms_.emplace(m, std::move(c));
    }
    return r;
}

DiffOp operator*(const RatFunc& f, const DiffOp& a) {
    DiffOp r;
    r.context_ = a.context_;
    if (f.is_zero()) return r;
    for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, f * c);
    return r;
}

bool operator==(const DiffOp& a, const DiffOp& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (auto i = a.terms_.begin(), j = b.terms_.begin(); i != a.terms_.end(); ++i, ++j)
        if (i->first != j->first || !(i->second == j->second)) return false;
    return true;
}

std::string DiffOp::to_string() const {
    if (terms_.empty()) return "0";
    // terms ordered by their shift text, compared as exponents in printing order
    std::vector<std::pair<Shift, const TermMap::value_type*>> order;
    for (const auto& t : terms_) {
        Shift e = t.first.exponents();
        std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return var_print_less(a.first, b.first); });
        order.emplace_back(std::move(e), &t);
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        // lexicographic on dense exponent vectors
        const auto &x = a.first, &y = b.first;
        for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k) {
            if (x[k].first != y[k].first)
                return var_print_less(x[k].first, y[k].first) ? x[k].second < 0 : 0 < y[k].second;
            if (x[k].second != y[k].second) return x[k].second < y[k].second;
        }
        if (x.size() < y.size()) return 0 < y[x.size()].second;
        if (y.size() < x.size()) return x[y.size()].second < 0;
        return false;
    });
    std::string s;
    for (const auto& [e, t] : order) {
        const auto& [m, c] = *t;
        if (!s.empty()) s += " + ";
        s += "(" + c.to_string() + ")";
        if (!m.is_identity()) s += "*" + m.to_string();
    }
    return s;
}

std::ostream& operator<<(std::ostream& os, const DiffOp& a) { return os << a.to_string(); }

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return DiffOp::sum({a * b, -(b * a)}); }
DiffOp anticommutator(const DiffOp& a, const DiffOp& b) { return DiffOp::sum({a * b, b * a}); }

DiffOp parse_diffop(std::string_view text) {
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorCode::Parse, "column " + std::to_string(pos + 1) + ": " + msg);
    };
    skip();
    if (text.substr(pos) == "0") return DiffOp();
    std::vector<DiffOp> parts;
    for (;;) {
        skip();
        if (pos >= text.size() || text[pos] != '(') fail("expected '('");
        std::size_t start = ++pos;
        int depth = 1;
        while (pos < text.size() && depth > 0) {
            if (text[pos] == '(') ++depth;
            if (text[pos] == ')') --depth;
            ++pos;
        }
        if (depth != 0) fail("unbalanced parentheses");
        RatFunc c = parse_ratfunc(text.substr(start, pos - 1 - start));
        Shift e;
        while (pos < text.size() && text[pos] == '*') {
            ++pos;
            if (text.substr(pos, 3) != "d_{") fail("expected shift monomial d_{i,r}");
            std::size_t close = text.find('}', pos);
            if (close == std::string_view::npos) fail("unterminated '{'");
            std::string name = "x" + std::string(text.substr(pos + 1, close - pos));
            pos = close + 1;
            int k = 1;
            if (pos < text.size() && text[pos] == '^') {
                std::size_t s0 = ++pos;
                if (pos < text.size() && text[pos] == '-') ++pos;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
                if (pos == s0) fail("expected exponent");
                k = std::stoi(std::string(text.substr(s0, pos - s0)));
            }
            e.emplace_back(intern_var(name), k);
        }
        parts.emplace_back(c, ShiftMonomial::from_exponents(std::move(e)));
        skip();
        if (pos == text.size()) break;
        if (text[pos] != '+') fail("expected '+'");
        ++pos;
    }
    return DiffOp::sum(parts);
}

FpPoint random_point(const PrimeField& F, std::uint64_t support, std::mt19937_64& rng) {
    FpPoint pt{};
    for (std::size_t v = 0; v < kMaxVars; ++v)
        if ((support >> v) & 1u) pt[v] = rng() % F.modulus();
    return pt;
}

PitResult randomized_is_zero(const DiffOp& a, int trials, std::uint64_t seed, const PrimeField& F) {
    std::uint64_t support = 0;
    for (const auto& [m, c] : a.terms()) support |= c.support();
    std::mt19937_64 rng(seed);
    PitResult res;
    for (int t = 0; t < trials; ++t) {
        bool done = false;
        for (int attempt = 0; attempt < 32 && !done; ++attempt) {
            FpPoint pt = random_point(F, support, rng);
            try {
                for (const auto& [m, c] : a.terms()) {
                    std::uint64_t val = c.evaluate(F, pt);
                    if (val != 0) {
                        PitWitness w{{}, m, val};
                        for (std::size_t v = 0; v < kMaxVars; ++v)
                            if ((support >> v) & 1u) w.point.emplace_back(var_info(static_cast<VarIndex>(v)).name, pt[v]);
                        return {PitStatus::NonzeroWitness, std::move(w)};
                    }
                }
                done = true;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::PoleHit) throw;
            }
        }
        if (!done) return {PitStatus::Inconclusive, std::nullopt};
    }
    return res;
}

}  // namespace gklo
