// gklo: command-line front end for the GKLO operator library.
//
// Exit codes: 0 pass, 1 relation failure, 2 invalid spec, 3 parse/IO/usage.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "gklo/gklo.hpp"
#include "gklo/monopole.hpp"
#include "gklo/relations.hpp"
#include "gklo/spec_doc.hpp"
#include "gklo/version.hpp"

using namespace gklo;

namespace {

constexpr int kPass = 0, kRelationFailure = 1, kInvalidSpec = 2, kParseError = 3;

struct InvalidSpec {
    std::vector<Diagnostic> diags;
};

struct Loaded {
    SpecDocument doc;
    InvolutiveQuiver q;
    DimensionData dims;
};

Loaded load(const std::string& path) {
    Loaded l;
    l.doc = load_spec_document(path);
    auto diags = diagnose_quiver(l.doc.quiver);
    if (!diags.empty()) throw InvalidSpec{std::move(diags)};
    l.q = validate_quiver(l.doc.quiver);
    try {
        l.dims = make_dimensions(l.q, l.doc.v, l.doc.w);
        check_dimensions(l.q, l.dims);
    } catch (const Error& e) {
        throw InvalidSpec{{{e.code(), e.what()}}};
    }
    return l;
}

int node_index(const InvolutiveQuiver& q, const std::string& id) {
    try {
        return q.index_of(id);
    } catch (const Error&) {
        throw Error(ErrorCode::IndexOutOfRange, "no node '" + id + "'");
    }
}

std::pair<int, int> parse_range(const std::string& s) {
    auto p = s.find("..");
    if (p == std::string::npos) throw Error(ErrorCode::Parse, "range must look like a..b: " + s);
    try {
        std::size_t used1 = 0, used2 = 0;
        int a = std::stoi(s.substr(0, p), &used1), b = std::stoi(s.substr(p + 2), &used2);
        if (used1 != p || used2 != s.size() - p - 2 || a > b) throw std::invalid_argument(s);
        return {a, b};
    } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "range must look like a..b with a <= b: " + s);
    }
}

std::string rational_string(const Rational& r) { return r.get_str(); }

int cmd_validate(const std::string& path) {
    load(path);
    std::cout << "valid\n";
    return kPass;
}

int cmd_info(const std::string& path) {
    auto l = load(path);
    GkloContext ctx(l.q, l.dims);
    const auto& q = l.q;
    nlohmann::ordered_json j;
    j["nodes"] = q.node_ids();
    nlohmann::ordered_json tau = nlohmann::ordered_json::object(), pos = nlohmann::ordered_json::array();
    for (int i = 0; i < q.node_count(); ++i) tau[q.node_id(i)] = q.node_id(q.tau(i));
    for (int i : q.positive_nodes()) pos.push_back(q.node_id(i));
    j["tau"] = tau;
    j["positive_nodes"] = pos;
    j["cartan"] = ctx.cartan();
    nlohmann::ordered_json fund = nlohmann::ordered_json::object(), cor = nlohmann::ordered_json::object(),
                           pair = nlohmann::ordered_json::object(), zeta = nlohmann::ordered_json::object(),
                           thr = nlohmann::ordered_json::object();
    for (int i = 0; i < q.node_count(); ++i) {
        const auto& id = q.node_id(i);
        fund[id] = ctx.mu().fundamental[i];
        cor[id] = ctx.mu().coroot[i];
        pair[id] = ctx.mu().pairings[i];
        zeta[id] = rational_string(ctx.zeta()[i].value());
        thr[id] = ctx.H_threshold(i);
    }
    j["mu"] = {{"fundamental", fund}, {"coroot", cor}};
    j["pairings"] = pair;
    j["hbar_zeta"] = zeta;
    j["h_threshold"] = thr;
    std::cout << j.dump(2) << "\n";
    return kPass;
}

struct VerifyArgs {
    std::string mode;
    int order = 0, trials = 0, threads = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string only, report_out, corrupt;
    bool timings = false;
};

int cmd_verify(const std::string& path, const VerifyArgs& a, const CLI::App& sub) {
    auto l = load(path);
    Corruption corruption = Corruption::None;
    if (!a.corrupt.empty()) {
        auto c = corruption_from_string(a.corrupt);
        if (!c) throw Error(ErrorCode::Parse, "unknown corruption site '" + a.corrupt + "'");
        corruption = *c;
    }
    GkloContext ctx(l.q, l.dims, corruption);
    VerifyOptions o;
    const auto& d = l.doc.options;
    std::string mode = sub.count("--mode") ? a.mode : d.mode.value_or("exact");
    o.mode = mode == "random" ? Mode::Randomized : Mode::Exact;
    o.series_order = sub.count("--order") ? a.order : d.series_order.value_or(0);
    o.trials = sub.count("--trials") ? a.trials : d.trials.value_or(20);
    o.seed = sub.count("--seed") ? a.seed : d.seed.value_or(1);
    o.threads = a.threads;
    o.timings = a.timings;
    if (!a.only.empty()) {
        std::stringstream ss(a.only);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto t = relation_tag_from_string(tok);
            if (!t) throw Error(ErrorCode::Parse, "unknown relation tag '" + tok + "'");
            o.only.insert(*t);
        }
    }
    auto report = verify_all(ctx, o);
    if (!a.report_out.empty()) {
        std::ofstream out(a.report_out, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + a.report_out);
        out << report_json(ctx, report);
        if (!out) throw Error(ErrorCode::Io, "cannot write " + a.report_out);
    }
    std::cout << report_summary(report);
    return report.all_pass() ? kPass : kRelationFailure;
}

struct BuildArgs {
    std::string node, what, of = "H", range;
};

int cmd_build(const std::string& path, const BuildArgs& a) {
    auto l = load(path);
    GkloContext ctx(l.q, l.dims);
    const int i = node_index(l.q, a.node);
    const std::string id = a.node;
    const RatFunc u = RatFunc::variable(spectral_u());
    if (a.what == "B") {
        std::cout << "B_{" << id << "}(u) = " << ctx.B(i, u).to_string() << "\n";
    } else if (a.what == "H") {
        std::cout << "H_{" << id << "}(u) = " << ctx.H(i, u).to_string() << "\n";
    } else if (a.what == "y") {
        auto [lo, hi] = a.range.empty() ? std::pair{1, ctx.v(i)} : parse_range(a.range);
        if (lo < 1 || hi > ctx.v(i))
            throw Error(ErrorCode::IndexOutOfRange, "y_{i,r} needs 1 <= r <= v_i = " + std::to_string(ctx.v(i)));
        for (int r = lo; r <= hi; ++r) std::cout << "y_{" << id << "," << r << "} = " << ctx.y(i, r).to_string() << "\n";
    } else {
        auto [lo, hi] = a.range.empty() ? std::pair{0, 3} : parse_range(a.range);
        for (int k = lo; k <= hi; ++k) {
            if (a.of == "H") {
                std::cout << "H_{" << id << "," << k << "} = " << ctx.H_coeff(i, k).to_string() << "\n";
            } else {
                if (k < 0) throw Error(ErrorCode::IndexOutOfRange, "B_{i,s} needs s >= 0");
                std::cout << "B_{" << id << "," << k << "} = " << ctx.B_coeff(i, k).to_string() << "\n";
            }
        }
    }
    return kPass;
}

struct MonopoleArgs {
    std::string node, f = "1", direction;
    int rmax = 3;
};

int cmd_monopole(const std::string& path, const MonopoleArgs& a) {
    auto l = load(path);
    GkloContext ctx(l.q, l.dims);
    const int i = node_index(l.q, a.node);
    const bool positive = l.q.is_positive(i);
    const int p = positive ? i : l.q.tau(i);
    Direction dir = positive ? Direction::Plus : Direction::Minus;
    if (a.direction == "plus") dir = Direction::Plus;
    if (a.direction == "minus") dir = Direction::Minus;
    RatFunc f = parse_ratfunc(a.f);
    const std::string lam = dir == Direction::Plus ? "eps_{" + l.q.node_id(p) + ",1}"
                                                   : "-eps_{" + l.q.node_id(p) + "," + std::to_string(ctx.v(p)) + "}";
    if (ctx.v(p) == 0) {
        std::cout << "f[R_" << lam << "]: node has v = 0\n";
    } else {
        std::cout << "f = " << f.to_string() << "\n";
        std::cout << "f[R_" << lam << "] = " << minuscule_monopole(ctx, p, f, dir).to_string() << "\n";
    }
    auto res = psi_crosscheck(ctx, i, a.rmax);
    std::cout << "psi cross-check for node " << a.node << " (" << res.convention << ", sign " << res.sign << ")\n";
    for (const auto& t : res.terms) {
        std::cout << "  r=" << t.r << " " << (t.pass ? "pass" : "FAIL");
        if (!t.pass) std::cout << "  " << t.witness;
        std::cout << "\n";
    }
    std::cout << (res.pass ? "pass" : "fail") << "\n";
    return res.pass ? kPass : kRelationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact GKLO operators for shifted twisted Yangians"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string path;
    auto* validate = app.add_subcommand("validate", "Check a quiver-spec document");
    validate->add_option("spec", path, "Quiver-spec document (JSON)")->required();

    auto* info = app.add_subcommand("info", "Cartan matrix, shift coweight, pairings and hbar*zeta");
    info->add_option("spec", path, "Quiver-spec document (JSON)")->required();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Verify the defining relations");
    verify->add_option("spec", path, "Quiver-spec document (JSON)")->required();
    verify->add_option("--mode", va.mode, "exact or random")->check(CLI::IsMember({"exact", "random"}));
    verify->add_option("--order", va.order, "Series order for coefficient checks (0: default)")->check(CLI::Range(0, 1000));
    verify->add_option("--trials", va.trials, "Random points per check")->check(CLI::Range(1, 100000));
    verify->add_option("--seed", va.seed, "Seed for randomized mode");
    verify->add_option("--only", va.only, "Comma-separated relation tags");
    verify->add_option("--report-out", va.report_out, "Write the JSON report here");
    verify->add_option("--corrupt", va.corrupt, "Debug: flip one sign (biz-pole, biz-framing, ...)");
    verify->add_option("--threads", va.threads, "Worker threads")->check(CLI::Range(1, 256));
    verify->add_flag("--timings", va.timings, "Record elapsed_ms per entry (report is then not byte-stable)");

    BuildArgs ba;
    auto* build = app.add_subcommand("build", "Print operators in canonical form");
    build->add_option("spec", path, "Quiver-spec document (JSON)")->required();
    build->add_option("--node", ba.node, "Node id")->required();
    build->add_option("--what", ba.what, "B, H, y or coeffs")->required()->check(CLI::IsMember({"B", "H", "y", "coeffs"}));
    build->add_option("--of", ba.of, "Series for coeffs: H or B")->check(CLI::IsMember({"H", "B"}));
    build->add_option("--range", ba.range, "Index range a..b");

    MonopoleArgs ma;
    auto* mono = app.add_subcommand("monopole", "Minuscule monopole operator and the Psi cross-check");
    mono->add_option("spec", path, "Quiver-spec document (JSON)")->required();
    mono->add_option("--node", ma.node, "Node id")->required();
    mono->add_option("--f", ma.f, "Polynomial in x");
    mono->add_option("--direction", ma.direction, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
    mono->add_option("--rmax", ma.rmax, "Largest r for the cross-check")->check(CLI::Range(0, 50));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kParseError;
    }

    try {
        if (*validate) return cmd_validate(path);
        if (*info) return cmd_info(path);
        if (*verify) return cmd_verify(path, va, *verify);
        if (*build) return cmd_build(path, ba);
        if (*mono) return cmd_monopole(path, ma);
    } catch (const InvalidSpec& e) {
        for (const auto& d : e.diags) std::cerr << "invalid: " << to_string(d.code) << ": " << d.message << "\n";
        return kInvalidSpec;
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return kParseError;
    }
    return kParseError;
}
