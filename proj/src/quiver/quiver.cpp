#include "gklo/quiver.hpp"

#include <algorithm>
#include <set>

namespace gklo {

bool id_less(const std::string& a, const std::string& b) {
    auto numeric = [](const std::string& s) {
        return !s.empty() && s.size() < 18 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    bool na = numeric(a), nb = numeric(b);
    if (na && nb) return std::stoll(a) != std::stoll(b) ? std::stoll(a) < std::stoll(b) : a < b;
    if (na != nb) return na;
    return a < b;
}

int InvolutiveQuiver::index_of(const std::string& id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id, id_less);
    if (it == nodes_.end() || *it != id) throw Error(ErrorCode::UnknownNode, "unknown node '" + id + "'");
    return static_cast<int>(it - nodes_.begin());
}

std::vector<int> InvolutiveQuiver::positive_nodes() const {
    std::vector<int> out;
    for (int i = 0; i < node_count(); ++i)
        if (positive_[i]) out.push_back(i);
    return out;
}

std::vector<int> InvolutiveQuiver::arrows_from(int i) const {
    std::vector<int> out;
    for (std::size_t h = 0; h < arrows_.size(); ++h)
        if (arrows_[h].source == i) out.push_back(static_cast<int>(h));
    return out;
}

bool InvolutiveQuiver::arrow_to_tau(int i) const {
    return std::any_of(arrows_.begin(), arrows_.end(),
                       [&](const Arrow& a) { return a.source == i && a.target == tau_[i]; });
}

RawQuiver InvolutiveQuiver::to_raw() const {
    RawQuiver r;
    r.nodes = nodes_;
    for (const auto& a : arrows_) r.arrows.push_back({a.id, nodes_[a.source], nodes_[a.target]});
    for (int i = 0; i < node_count(); ++i)
        if (i <= tau_[i]) r.node_pairs.emplace_back(nodes_[i], nodes_[tau_[i]]);
    for (std::size_t h = 0; h < arrows_.size(); ++h)
        if (static_cast<int>(h) <= arrows_[h].tau) r.arrow_pairs.emplace_back(arrows_[h].id, arrows_[arrows_[h].tau].id);
    std::vector<std::string> pos;
    for (int i : positive_nodes()) pos.push_back(nodes_[i]);
    r.positive_nodes = pos;
    return r;
}

// Validation collects every problem it can see; structural failures early on
// (unknown ids, missing involution images) stop the later axiom checks.
static void build(const RawQuiver& raw, std::vector<Diagnostic>& diags, std::vector<std::string>& nodes,
                  std::vector<int>& tau, std::vector<bool>& positive, std::vector<Arrow>& arrows) {
    auto add = [&](ErrorCode c, std::string m) { diags.push_back({c, std::move(m)}); };

    nodes = raw.nodes;
    std::sort(nodes.begin(), nodes.end(), id_less);
    for (std::size_t k = 1; k < nodes.size(); ++k)
        if (nodes[k] == nodes[k - 1]) add(ErrorCode::InvalidArgument, "duplicate node '" + nodes[k] + "'");
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.empty()) add(ErrorCode::InvalidArgument, "quiver has no nodes");
    auto idx = [&](const std::string& id) -> int {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), id, id_less);
        return it != nodes.end() && *it == id ? static_cast<int>(it - nodes.begin()) : -1;
    };
    const int n = static_cast<int>(nodes.size());
    std::size_t before = diags.size();

    tau.assign(n, -1);
    for (const auto& [a, b] : raw.node_pairs) {
        int ia = idx(a), ib = idx(b);
        if (ia < 0 || ib < 0) {
            add(ErrorCode::UnknownNode, "involution pair (" + a + ", " + b + ") names an unknown node");
            continue;
        }
        for (auto [x, y] : {std::pair{ia, ib}, std::pair{ib, ia}}) {
            if (tau[x] >= 0 && tau[x] != y)
                add(ErrorCode::InvolutionMismatch, "node '" + nodes[x] + "' has two involution images");
            tau[x] = y;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (tau[i] < 0)
            add(ErrorCode::InvolutionMismatch, "node '" + nodes[i] + "' has no involution image");
        else if (tau[i] == i)
            add(ErrorCode::FixedNode, "node '" + nodes[i] + "' is fixed by the involution (tau i != i required)");
    }

    std::map<std::string, int> arrow_index;
    for (const auto& a : raw.arrows) {
        Arrow ar{a.id, idx(a.source), idx(a.target)};
        if (ar.source < 0 || ar.target < 0) {
            add(ErrorCode::UnknownNode, "arrow '" + a.id + "' has an unknown endpoint");
            continue;
        }
        if (arrow_index.count(a.id)) {
            add(ErrorCode::InvalidArgument, "duplicate arrow '" + a.id + "'");
            continue;
        }
        arrow_index[a.id] = static_cast<int>(arrows.size());
        ar.tau = -1;
        arrows.push_back(ar);
    }
    for (const auto& [a, b] : raw.arrow_pairs) {
        auto ia = arrow_index.find(a), ib = arrow_index.find(b);
        if (ia == arrow_index.end() || ib == arrow_index.end()) {
            add(ErrorCode::InvolutionMismatch, "arrow pair (" + a + ", " + b + ") names an unknown arrow");
            continue;
        }
        for (auto [x, y] : {std::pair{ia->second, ib->second}, std::pair{ib->second, ia->second}}) {
            if (arrows[x].tau >= 0 && arrows[x].tau != y)
                add(ErrorCode::InvolutionMismatch, "arrow '" + arrows[x].id + "' has two involution images");
            arrows[x].tau = y;
        }
    }
    for (auto& a : arrows)
        if (a.tau < 0) add(ErrorCode::InvolutionMismatch, "arrow '" + a.id + "' has no involution image");
    if (std::any_of(diags.begin() + static_cast<std::ptrdiff_t>(before), diags.end(),
                    [](const Diagnostic& d) { return d.code != ErrorCode::FixedNode; }))
        return;

    std::set<std::pair<int, int>> seen;
    for (auto& a : arrows) {
        if (a.source == a.target) add(ErrorCode::SelfLoop, "arrow '" + a.id + "' is a self-loop");
        auto key = std::minmax(a.source, a.target);
        if (!seen.insert(key).second)
            add(ErrorCode::MultiEdge, "more than one arrow between '" + nodes[key.first] + "' and '" + nodes[key.second] + "'");
        const Arrow& t = arrows[a.tau];
        if (t.source != tau[a.target] || t.target != tau[a.source])
            add(ErrorCode::InvolutionMismatch,
                "arrow '" + a.id + "': s(tau h) = tau t(h) and t(tau h) = tau s(h) fail");
        a.fixed = &t == &a;
        if ((tau[a.source] == a.target) != a.fixed)
            add(ErrorCode::InvolutionMismatch,
                "arrow '" + a.id + "': tau s(h) = t(h) must hold exactly when tau h = h");
    }

    positive.assign(n, false);
    if (raw.positive_nodes) {
        for (const auto& id : *raw.positive_nodes) {
            int i = idx(id);
            if (i < 0)
                add(ErrorCode::BadPositiveHalf, "positive node '" + id + "' is unknown");
            else if (positive[i])
                add(ErrorCode::BadPositiveHalf, "positive node '" + id + "' listed twice");
            else
                positive[i] = true;
        }
        for (int i = 0; i < n; ++i)
            if (i < tau[i] && positive[i] == positive[tau[i]])
                add(ErrorCode::BadPositiveHalf, "positive nodes must contain exactly one of '" + nodes[i] + "' and '" +
                                                    nodes[tau[i]] + "'");
    } else {
        for (int i = 0; i < n; ++i) positive[i] = i < tau[i];
    }

    // Q1+: from each free orbit {h, tau h} prefer the arrow leaving Q0+, else the least id.
    for (std::size_t h = 0; h < arrows.size(); ++h) {
        auto& a = arrows[h];
        if (a.fixed || static_cast<int>(h) > a.tau) continue;
        auto& b = arrows[a.tau];
        bool pa = positive[a.source], pb = positive[b.source];
        bool pick_a = pa != pb ? pa : id_less(a.id, b.id);
        (pick_a ? a : b).positive = true;
    }
}

std::vector<Diagnostic> diagnose_quiver(const RawQuiver& raw) {
    std::vector<Diagnostic> diags;
    std::vector<std::string> nodes;
    std::vector<int> tau;
    std::vector<bool> positive;
    std::vector<Arrow> arrows;
    build(raw, diags, nodes, tau, positive, arrows);
    return diags;
}

InvolutiveQuiver validate_quiver(const RawQuiver& raw) {
    std::vector<Diagnostic> diags;
    InvolutiveQuiver q;
    build(raw, diags, q.nodes_, q.tau_, q.positive_, q.arrows_);
    if (!diags.empty()) throw Error(diags.front().code, diags.front().message);
    return q;
}

void check_dimensions(const InvolutiveQuiver& q, const DimensionData& d) {
    const auto n = static_cast<std::size_t>(q.node_count());
    if (d.v.size() != n || d.w.size() != n) throw Error(ErrorCode::DimMismatch, "dimension vectors have the wrong length");
    for (std::size_t i = 0; i < n; ++i) {
        if (d.v[i] < 0 || d.w[i] < 0)
            throw Error(ErrorCode::DimMismatch, "negative dimension at node '" + q.node_id(static_cast<int>(i)) + "'");
        if (d.v[i] != d.v[q.tau(static_cast<int>(i))])
            throw Error(ErrorCode::DimMismatch, "v is not tau-invariant at node '" + q.node_id(static_cast<int>(i)) + "'");
    }
}

DimensionData make_dimensions(const InvolutiveQuiver& q, const std::map<std::string, int>& v,
                              const std::map<std::string, int>& w) {
    DimensionData d{std::vector<int>(q.node_count(), 0), std::vector<int>(q.node_count(), 0)};
    for (const auto& [id, x] : v) d.v[q.index_of(id)] = x;
    for (const auto& [id, x] : w) d.w[q.index_of(id)] = x;
    check_dimensions(q, d);
    return d;
}

CartanMatrix cartan_matrix(const InvolutiveQuiver& q) {
    const int n = q.node_count();
    CartanMatrix c(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) c[i][i] = 2;
    for (const auto& a : q.arrows()) {
        c[a.source][a.target] -= 1;
        c[a.target][a.source] -= 1;
    }
    return c;
}

Coweight shift_coweight(const InvolutiveQuiver& q, const DimensionData& d) {
    check_dimensions(q, d);
    const int n = q.node_count();
    Coweight mu{std::vector<int>(n, 0), std::vector<int>(n, 0), std::vector<int>(n, 0)};
    for (int j = 0; j < n; ++j) mu.fundamental[j] = d.w[j] + d.w[q.tau(j)];
    for (const auto& a : q.arrows())
        if (a.fixed) {
            mu.fundamental[a.source] -= 1;
            mu.fundamental[a.target] -= 1;
        }
    for (int j = 0; j < n; ++j) mu.coroot[j] = -d.v[j];
    auto c = cartan_matrix(q);
    for (int i = 0; i < n; ++i) {
        int p = mu.fundamental[i];
        for (int j = 0; j < n; ++j) p += mu.coroot[j] * c[j][i];
        mu.pairings[i] = p;
    }
    return mu;
}

Rational Zeta::value() const {
    Rational r(sign);
    if (power_of_two >= 0)
        r *= Rational(mpz_class(1) << power_of_two);
    else
        r /= Rational(mpz_class(1) << -power_of_two);
    return r;
}

std::vector<Zeta> zeta_parameters(const InvolutiveQuiver& q, const DimensionData& d) {
    check_dimensions(q, d);
    auto c = cartan_matrix(q);
    std::vector<Zeta> out(q.node_count());
    for (int i = 0; i < q.node_count(); ++i) {
        int e = d.v[i] - 1 + (q.arrow_to_tau(i) ? 1 : 0) + d.w[i];
        for (int h : q.arrows_from(i)) e += d.v[q.arrows()[h].target];
        out[i].sign = (e % 2 == 0) ? 1 : -1;
        out[i].power_of_two = c[i][q.tau(i)];
    }
    return out;
}

RawQuiver edgeless_pair() {
    RawQuiver r;
    r.nodes = {"1", "2"};
    r.node_pairs = {{"1", "2"}};
    return r;
}

RawQuiver diagonal_a(int n) {
    RawQuiver r;
    for (int k = 1; k <= 2 * n; ++k) r.nodes.push_back(std::to_string(k));
    for (int k = 1; k <= n; ++k) r.node_pairs.emplace_back(std::to_string(k), std::to_string(k + n));
    for (int k = 1; k < n; ++k) {
        std::string a = "a" + std::to_string(k), b = "b" + std::to_string(k);
        r.arrows.push_back({a, std::to_string(k), std::to_string(k + 1)});
        r.arrows.push_back({b, std::to_string(k + 1 + n), std::to_string(k + n)});
        r.arrow_pairs.emplace_back(a, b);
    }
    return r;
}

RawQuiver aiii(int n) {
    RawQuiver r;
    const int m = 2 * n;
    for (int k = 1; k <= m; ++k) r.nodes.push_back(std::to_string(k));
    for (int k = 1; k <= n; ++k) r.node_pairs.emplace_back(std::to_string(k), std::to_string(m + 1 - k));
    for (int k = 1; k < m; ++k) r.arrows.push_back({"h" + std::to_string(k), std::to_string(k), std::to_string(k + 1)});
    for (int k = 1; k <= n; ++k) r.arrow_pairs.emplace_back("h" + std::to_string(k), "h" + std::to_string(m - k));
    return r;
}

}  // namespace gklo
