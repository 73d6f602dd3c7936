#include "gklo/gklo.hpp"

#include <atomic>

namespace gklo {

namespace {

std::atomic<std::uint64_t> next_context_id{1};

RatFunc hbar() { return RatFunc::variable(hbar_var()); }
RatFunc half_hbar() { return Rational(1, 2) * hbar(); }

constexpr std::pair<Corruption, const char*> kCorruptionNames[] = {
    {Corruption::None, "none"},
    {Corruption::BizPole, "biz-pole"},
    {Corruption::BizFraming, "biz-framing"},
    {Corruption::BizTauDenominator, "biz-tau-denominator"},
    {Corruption::HuSign, "hu-sign"},
    {Corruption::HuFraming, "hu-framing"},
    {Corruption::YtauSign, "ytau-sign"},
};

}  // namespace

const char* to_string(Corruption c) {
    for (const auto& [k, n] : kCorruptionNames)
        if (k == c) return n;
    return "none";
}

std::optional<Corruption> corruption_from_string(std::string_view s) {
    for (const auto& [k, n] : kCorruptionNames)
        if (s == n) return k;
    return std::nullopt;
}

VarIndex spectral_u() { return intern_var("u"); }

GkloContext::GkloContext(InvolutiveQuiver q, DimensionData d, Corruption corruption)
    : q_(std::move(q)),
      d_(std::move(d)),
      c_(cartan_matrix(q_)),
      mu_(shift_coweight(q_, d_)),
      zeta_(zeta_parameters(q_, d_)),
      corruption_(corruption),
      id_(next_context_id++) {
    const int n = q_.node_count();
    xvars_.resize(n);
    wvars_.resize(n);
    for (int i = 0; i < n; ++i) {
        if (q_.is_positive(i))
            for (int r = 1; r <= d_.v[i]; ++r) xvars_[i].push_back(intern_var(node_var_name(q_.node_id(i), r)));
        for (int k = 1; k <= d_.w[i]; ++k) wvars_[i].push_back(intern_var(framing_var_name(q_.node_id(i), k)));
    }
}

VarIndex GkloContext::node_var(int i, int r) const {
    if (!q_.is_positive(i)) throw Error(ErrorCode::InvalidArgument, "node_var needs a positive node");
    if (r < 1 || r > d_.v[i])
        throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(r) + " out of range at node " + q_.node_id(i));
    return xvars_[i][r - 1];
}

VarIndex GkloContext::framing_var(int j, int k) const {
    if (k < 1 || k > d_.w.at(j))
        throw Error(ErrorCode::IndexOutOfRange, "framing index " + std::to_string(k) + " out of range");
    return wvars_[j][k - 1];
}

NegativeRewrite GkloContext::canonicalize_negative(int i, int r) const {
    if (q_.is_positive(i))
        throw Error(ErrorCode::NotNegativeNode, "node '" + q_.node_id(i) + "' is positive");
    if (r < 1 || r > d_.v[i]) throw Error(ErrorCode::IndexOutOfRange, "index out of range");
    return {q_.tau(i), r, -1, -1};
}

RatFunc GkloContext::x(int i, int r) const {
    if (q_.is_positive(i)) return RatFunc::variable(node_var(i, r));
    auto n = canonicalize_negative(i, r);
    return RatFunc(n.x_sign) * RatFunc::variable(node_var(n.positive_node, n.r));
}

ShiftMonomial GkloContext::d(int i, int r) const {
    if (q_.is_positive(i)) return ShiftMonomial::unit(node_var(i, r));
    auto n = canonicalize_negative(i, r);
    return ShiftMonomial::unit(node_var(n.positive_node, n.r), n.shift_exponent);
}

RatFunc GkloContext::V(int i, const RatFunc& z) const {
    RatFunc p(1);
    for (int k = 1; k <= d_.v.at(i); ++k) p *= z - x(i, k);
    return p;
}

RatFunc GkloContext::W(int i, const RatFunc& z) const {
    RatFunc p(1);
    for (int k = 1; k <= d_.w.at(i); ++k) p *= z - RatFunc::variable(framing_var(i, k));
    return p;
}

RatFunc GkloContext::V_r(int i, int r, const RatFunc& z) const {
    if (r < 1 || r > d_.v.at(i)) throw Error(ErrorCode::IndexOutOfRange, "index out of range");
    RatFunc p(1);
    for (int k = 1; k <= d_.v[i]; ++k)
        if (k != r) p *= z - x(i, k);
    return p;
}

RatFunc GkloContext::V_rs(int i, int r, int s, const RatFunc& z) const {
    if (r < 1 || r > d_.v.at(i) || s < 1 || s > d_.v[i] || r == s)
        throw Error(ErrorCode::IndexOutOfRange, "index out of range");
    RatFunc p(1);
    for (int k = 1; k <= d_.v[i]; ++k)
        if (k != r && k != s) p *= z - x(i, k);
    return p;
}

DiffOp GkloContext::y(int i, int r) const {
    if (r < 1 || r > d_.v.at(i))
        throw Error(ErrorCode::IndexOutOfRange, "y_{" + q_.node_id(i) + "," + std::to_string(r) + "} out of range");
    {
        std::lock_guard lock(mu_cache_);
        auto it = y_cache_.find({i, r});
        if (it != y_cache_.end()) return it->second;
    }
    const RatFunc xr = x(i, r), h2 = half_hbar();
    RatFunc c(1);
    for (int h : q_.arrows_from(i)) {
        const Arrow& a = q_.arrows()[h];
        c *= V(a.target, xr + h2);
        if (a.fixed) {
            RatFunc den = corruption_ == Corruption::BizTauDenominator ? RatFunc(2) * xr - h2 : RatFunc(2) * xr + h2;
            c /= den;
        }
    }
    c *= W(q_.tau(i), corruption_ == Corruption::BizFraming ? -xr + h2 : -xr - h2);
    c /= V_r(i, r, xr);
    if (corruption_ == Corruption::YtauSign && !q_.is_positive(i)) c = -c;
    DiffOp out = DiffOp(c, d(i, r)).set_context(id_);
    std::lock_guard lock(mu_cache_);
    y_cache_.emplace(std::pair{i, r}, out);
    return out;
}

RatFunc GkloContext::pole_shift(int i, int r) const {
    return corruption_ == Corruption::BizPole ? x(i, r) - half_hbar() : x(i, r) + half_hbar();
}

DiffOp GkloContext::B(int i, const RatFunc& z) const {
    std::vector<DiffOp> parts;
    for (int r = 1; r <= d_.v.at(i); ++r) parts.push_back((-z - pole_shift(i, r)).inverse() * y(i, r));
    return DiffOp::sum(parts).set_context(id_);
}

DiffOp GkloContext::B_coeff(int i, int s) const {
    if (s < 0) throw Error(ErrorCode::IndexOutOfRange, "B_{i,s} needs s >= 0");
    std::vector<DiffOp> parts;
    for (int r = 1; r <= d_.v.at(i); ++r) parts.push_back(-(-pole_shift(i, r)).pow(s) * y(i, r));
    return DiffOp::sum(parts).set_context(id_);
}

RatFunc GkloContext::H(int i, const RatFunc& z) const {
    const int ti = q_.tau(i);
    const RatFunc h2 = half_hbar();
    int sign_exp = d_.v[i] - 1 + (q_.arrow_to_tau(i) ? 1 : 0) + (corruption_ == Corruption::HuSign ? 1 : 0);
    RatFunc r((sign_exp % 2 == 0) ? 1 : -1);
    r *= (RatFunc(2) * z).pow(c_[i][ti]);
    r *= W(i, corruption_ == Corruption::HuFraming ? z : -z) * W(ti, z);
    r /= V(i, -z + h2) * V(i, -z - h2);
    for (int h : q_.arrows_from(i)) r *= V(q_.arrows()[h].target, -z);
    for (int h : q_.arrows_from(ti)) r *= V(q_.arrows()[h].target, z);
    return r;
}

RatFunc GkloContext::H_coeff(int i, int r) const {
    {
        std::lock_guard lock(mu_cache_);
        auto it = hcoeff_cache_.find({i, r});
        if (it != hcoeff_cache_.end()) return it->second;
    }
    RatFunc hu;
    {
        std::lock_guard lock(mu_cache_);
        auto it = hu_cache_.find(i);
        if (it == hu_cache_.end()) it = hu_cache_.emplace(i, H(i, RatFunc::variable(spectral_u()))).first;
        hu = it->second;
    }
    // Fill a block around r so neighbouring requests are cached.
    const int lo = std::min(r, H_threshold(i) - 1), hi = std::max(r, H_threshold(i) + 8);
    std::vector<int> ks;
    for (int k = lo; k <= hi; ++k) ks.push_back(-k - 1);
    auto cs = laurent_coefficients(hu, spectral_u(), ks);
    std::lock_guard lock(mu_cache_);
    for (std::size_t n = 0; n < ks.size(); ++n) hcoeff_cache_.emplace(std::pair{i, lo + static_cast<int>(n)}, cs[n]);
    return hcoeff_cache_.at({i, r});
}

DiffOp GkloContext::H_tilde(int i, int n) const {
    if (n < 0) throw Error(ErrorCode::IndexOutOfRange, "H~_{i,n} needs n >= 0");
    auto ber = bernoulli_coefficients(static_cast<unsigned>(n + 1));
    std::vector<RatFunc> parts;
    const RatFunc inv_h = hbar().inverse();
    for (int r = 1; r <= d_.v.at(i); ++r) {
        RatFunc t = x(i, r) * inv_h + RatFunc(Rational(1, 2));
        RatFunc tp(1);
        std::vector<RatFunc> terms;
        for (const auto& b : ber) {
            if (sgn(b) != 0) terms.push_back(RatFunc(b) * tp);
            tp *= t;
        }
        parts.push_back(RatFunc::sum(terms));
    }
    RatFunc pre = RatFunc(Rational((n % 2 == 1) ? 1 : -1, n + 1)) * hbar().pow(n);
    return DiffOp(pre * RatFunc::sum(parts)).set_context(id_);
}

}  // namespace gklo
