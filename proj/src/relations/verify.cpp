#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "gklo/error.hpp"
#include "gklo/relations.hpp"

namespace gklo {

namespace {

constexpr std::size_t kWitnessChars = 4000;
constexpr int kPoleRetries = 32;

struct TagName {
    RelationTag tag;
    const char* name;
};

constexpr TagName kTags[] = {
    {RelationTag::HH, "HH"},
    {RelationTag::HTauParity, "H-tau-parity"},
    {RelationTag::HB, "HB"},
    {RelationTag::BB, "BB"},
    {RelationTag::CommSerre, "CommSerre"},
    {RelationTag::UsualSerre, "UsualSerre"},
    {RelationTag::ISerreFinite, "ISerreFinite"},
    {RelationTag::ISerreGF, "ISerreGF"},
    {RelationTag::YCommSame, "YCommSame"},
    {RelationTag::YCommTau, "YCommTau"},
    {RelationTag::YCommAdj, "YCommAdj"},
    {RelationTag::YXComm, "YXComm"},
    {RelationTag::CorCEqual0H, "CorCEqual0H"},
    {RelationTag::CorUH, "CorUH"},
    {RelationTag::TrunDivByZ, "TrunDivByZ"},
    {RelationTag::TildeHBracket, "TildeHBracket"},
    {RelationTag::HiZSymmetric, "HiZSymmetric"},
    {RelationTag::HiZVanishing, "HiZVanishing"},
    {RelationTag::HiZLeading, "HiZLeading"},
    {RelationTag::HHCoeff, "HHCoeff"},
    {RelationTag::HBCoeff, "HBCoeff"},
    {RelationTag::BBCoeff, "BBCoeff"},
    {RelationTag::CommSerreCoeff, "CommSerreCoeff"},
    {RelationTag::CoeffConsistency, "CoeffConsistency"},
    {RelationTag::NoTauDenominator, "NoTauDenominator"},
    {RelationTag::RescaleInvariance, "RescaleInvariance"},
};

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string clip(std::string s) {
    if (s.size() > kWitnessChars) {
        s.resize(kWitnessChars);
        s += "...";
    }
    return s;
}

bool wanted(const VerifyOptions& opt, RelationTag t) { return opt.only.empty() || opt.only.count(t); }

}  // namespace

const char* to_string(RelationTag t) {
    for (const auto& [tag, name] : kTags)
        if (tag == t) return name;
    return "?";
}

std::optional<RelationTag> relation_tag_from_string(std::string_view s) {
    for (const auto& [tag, name] : kTags)
        if (s == name) return tag;
    return std::nullopt;
}

const std::vector<RelationTag>& all_relation_tags() {
    static const std::vector<RelationTag> tags = [] {
        std::vector<RelationTag> t;
        for (const auto& [tag, name] : kTags) t.push_back(tag);
        return t;
    }();
    return tags;
}

const char* to_string(Mode m) { return m == Mode::Exact ? "exact" : "randomized"; }

const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
        case Status::Skipped: return "skipped";
    }
    return "?";
}

bool VerificationReport::all_pass() const {
    return std::none_of(entries.begin(), entries.end(),
                        [](const Entry& e) { return e.status == Status::Fail || e.status == Status::Inconclusive; });
}

int VerificationReport::count(Status s) const {
    return static_cast<int>(std::count_if(entries.begin(), entries.end(), [s](const Entry& e) { return e.status == s; }));
}

std::string relation_name(const GkloContext& ctx, const RelationId& id) {
    std::string s = std::string(to_string(id.tag)) + "(";
    for (std::size_t k = 0; k < id.nodes.size(); ++k) {
        if (k) s += ",";
        s += ctx.quiver().node_id(id.nodes[k]);
    }
    if (id.tag == RelationTag::CoeffConsistency && !id.aux.empty()) {
        s += ";";
        s += to_string(static_cast<RelationTag>(id.aux[0]));
    } else if (id.tag == RelationTag::RescaleInvariance && id.aux.size() == 2) {
        s += ";" + std::to_string(id.aux[0]) + "/" + std::to_string(id.aux[1]);
    } else if (!id.aux.empty()) {
        s += ";";
        for (std::size_t k = 0; k < id.aux.size(); ++k) {
            if (k) s += ",";
            s += std::to_string(id.aux[k]);
        }
    }
    return s + ")";
}

Entry run_check(const GkloContext& ctx, const Check& c, const VerifyOptions& opt) {
    Entry e;
    e.id = c.id;
    e.name = relation_name(ctx, c.id);
    e.mode = c.exact_only ? Mode::Exact : opt.mode;
    if (!c.skip.empty()) {
        e.status = Status::Skipped;
        e.note = c.skip;
        return e;
    }
    auto t0 = std::chrono::steady_clock::now();
    try {
        std::vector<Identity> ids = c.build();
        ExactEvaluator exact;
        if (e.mode == Mode::Exact) {
            for (const auto& id : ids) {
                DiffOp val = exact.eval(id.expr);
                if (val.is_zero()) continue;
                const auto& [m, coef] = *val.terms().begin();
                e.status = Status::Fail;
                e.witness = Witness{id.label, m.to_string(), clip(coef.to_string()), {}, 0};
                break;
            }
        } else {
            PrimeField F(opt.prime ? opt.prime : default_prime());
            std::uint64_t support = 0;
            for (const auto& id : ids) support |= expr_support(id.expr);
            std::mt19937_64 rng(fnv1a(e.name, opt.seed * 0x9E3779B97F4A7C15ull + 1));
            for (int t = 0; t < opt.trials && e.status == Status::Pass; ++t) {
                bool done = false;
                for (int attempt = 0; attempt < kPoleRetries && !done; ++attempt) {
                    FpPoint pt = random_point(F, support, rng);
                    try {
                        ModularEvaluator me(F, pt, exact);
                        for (const auto& id : ids) {
                            FpOp val = me.eval(id.expr);
                            if (val.empty()) continue;
                            Witness w{id.label, val.begin()->first.to_string(), "", {}, val.begin()->second};
                            for (std::size_t v = 0; v < kMaxVars; ++v)
                                if ((support >> v) & 1u) w.point.emplace_back(var_info(static_cast<VarIndex>(v)).name, pt[v]);
                            e.status = Status::Fail;
                            e.witness = std::move(w);
                            break;
                        }
                        done = true;
                    } catch (const Error& err) {
                        if (err.code() != ErrorCode::PoleHit) throw;
                    }
                }
                if (!done) {
                    e.status = Status::Inconclusive;
                    e.note = "every point hit a pole after " + std::to_string(kPoleRetries) + " draws";
                }
            }
        }
    } catch (const Error& err) {
        e.status = Status::Inconclusive;
        e.note = std::string(to_string(err.code())) + ": " + err.what();
    }
    e.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return e;
}

std::vector<Check> relation_suite(const GeneratorFamily& g, const VerifyOptions& opt, int N) {
    const auto& ctx = g.ctx();
    const int n = ctx.node_count();
    std::vector<Check> out;
    auto add = [&](RelationTag t, auto&& make) {
        if (wanted(opt, t)) out.push_back(make());
    };
    for (int i = 0; i < n; ++i) {
        add(RelationTag::HTauParity, [&] { return check_H_parity(g, i); });
        add(RelationTag::ISerreGF, [&] { return check_ISerre_gf(g, i); });
        if (wanted(opt, RelationTag::ISerreFinite))
            for (int k1 = 0; k1 <= 3; ++k1)
                for (int k2 = k1; k1 + k2 <= 3; ++k2)
                    for (int r = 0; k1 + k2 + r <= 3; ++r) out.push_back(check_ISerre_finite(g, i, k1, k2, r));
        add(RelationTag::YCommSame, [&] { return check_y_same(g, i); });
        add(RelationTag::YCommTau, [&] { return check_y_tau(g, i); });
        add(RelationTag::CorCEqual0H, [&] { return check_cor_cequal0(g, i); });
        add(RelationTag::CorUH, [&] { return check_cor_uH(g, i); });
        add(RelationTag::TrunDivByZ, [&] { return check_trun_div_by_z(g, i); });
        if (wanted(opt, RelationTag::TildeHBracket))
            for (int k = 0; k <= 3; ++k) out.push_back(check_tilde_H(g, i, k));
        add(RelationTag::HiZSymmetric, [&] { return check_Hiz_symmetric(g, i, 4); });
        add(RelationTag::HiZVanishing, [&] { return check_Hiz_vanishing(g, i); });
        add(RelationTag::HiZLeading, [&] { return check_Hiz_leading(g, i); });
        add(RelationTag::NoTauDenominator, [&] { return check_no_tau_denominator(g, i); });
        for (int j = 0; j < n; ++j) {
            add(RelationTag::HH, [&] { return check_HH(g, i, j); });
            add(RelationTag::HB, [&] { return check_HB(g, i, j); });
            add(RelationTag::BB, [&] { return check_BB(g, i, j); });
            add(RelationTag::CommSerre, [&] { return check_CommSerre(g, i, j); });
            add(RelationTag::UsualSerre, [&] { return check_UsualSerre(g, i, j); });
            add(RelationTag::YCommAdj, [&] { return check_y_adjacent(g, i, j); });
            add(RelationTag::YXComm, [&] { return check_y_x(g, i, j); });
            add(RelationTag::HHCoeff, [&] { return check_HH_coeff(g, i, j, N); });
            add(RelationTag::HBCoeff, [&] { return check_HB_coeff(g, i, j, N); });
            add(RelationTag::BBCoeff, [&] { return check_BB_coeff(g, i, j, N); });
            add(RelationTag::CommSerreCoeff, [&] { return check_CommSerre_coeff(g, i, j, N); });
            if (wanted(opt, RelationTag::CoeffConsistency))
                for (RelationTag w : {RelationTag::HH, RelationTag::HB, RelationTag::BB, RelationTag::CommSerre})
                    out.push_back(check_coeff_consistency(g, w, i, j, N));
        }
    }
    return out;
}

RescaleResult check_rescale_invariance(const GkloContext& ctx, int i, const Rational& scale, const VerifyOptions& opt) {
    GeneratorFamily g(ctx, i, scale);
    const int ti = ctx.tau(i);
    auto touches = [&](int a) { return a == i || a == ti; };
    std::vector<Check> checks;
    for (int a = 0; a < ctx.node_count(); ++a)
        for (int b = 0; b < ctx.node_count(); ++b) {
            if (!touches(a) && !touches(b)) continue;
            checks.push_back(check_HH(g, a, b));
            checks.push_back(check_HB(g, a, b));
            checks.push_back(check_BB(g, a, b));
            checks.push_back(check_CommSerre(g, a, b));
            checks.push_back(check_UsualSerre(g, a, b));
        }
    for (int a : {i, ti}) {
        checks.push_back(check_H_parity(g, a));
        checks.push_back(check_ISerre_gf(g, a));
        checks.push_back(check_ISerre_finite(g, a, 0, 0, 0));
    }
    RescaleResult res;
    res.relations_pass = true;
    for (const auto& c : checks) {
        Entry e = run_check(ctx, c, opt);
        if (e.status == Status::Fail || e.status == Status::Inconclusive) res.relations_pass = false;
        res.entries.push_back(std::move(e));
    }
    Entry lead = run_check(ctx, check_Hiz_leading(g, i), opt);
    res.leading_value_pass = lead.status == Status::Pass;
    res.entries.push_back(std::move(lead));
    return res;
}

VerificationReport verify_all(const GkloContext& ctx, const VerifyOptions& opt) {
    VerificationReport rep;
    rep.options = opt;
    rep.series_order = opt.series_order > 0 ? opt.series_order : default_series_order(ctx);
    GeneratorFamily g(ctx);
    std::vector<Check> checks = relation_suite(g, opt, rep.series_order);
    std::vector<int> rescale_nodes;
    if (wanted(opt, RelationTag::RescaleInvariance)) rescale_nodes = ctx.quiver().positive_nodes();

    const std::size_t total = checks.size() + rescale_nodes.size();
    rep.entries.resize(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next++) < total;) {
            if (k < checks.size()) {
                rep.entries[k] = run_check(ctx, checks[k], opt);
                continue;
            }
            const int i = rescale_nodes[k - checks.size()];
            Entry e;
            mpz_class num = opt.rescale.get_num(), den = opt.rescale.get_den();
            e.id = RelationId{RelationTag::RescaleInvariance, {i}, {static_cast<int>(num.get_si()), static_cast<int>(den.get_si())}};
            e.name = relation_name(ctx, e.id);
            e.mode = opt.mode;
            auto t0 = std::chrono::steady_clock::now();
            try {
                RescaleResult r = check_rescale_invariance(ctx, i, opt.rescale, opt);
                const bool unit = opt.rescale == 1;
                const bool ok = r.relations_pass && r.leading_value_pass == unit;
                e.status = ok ? Status::Pass : Status::Fail;
                e.note = std::string("relations ") + (r.relations_pass ? "pass" : "fail") + "; leading value " +
                         (r.leading_value_pass ? "pass" : "fail");
                for (const auto& sub : r.entries)
                    if (sub.status == Status::Fail && !(sub.id.tag == RelationTag::HiZLeading && !unit)) {
                        e.witness = sub.witness;
                        e.note += "; first failure " + sub.name;
                        break;
                    }
            } catch (const Error& err) {
                e.status = Status::Inconclusive;
                e.note = std::string(to_string(err.code())) + ": " + err.what();
            }
            e.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            rep.entries[k] = std::move(e);
        }
    };
    const int nt = std::max(1, opt.threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    std::stable_sort(rep.entries.begin(), rep.entries.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
    return rep;
}

}  // namespace gklo
