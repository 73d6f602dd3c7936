#include "gklo/vars.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "gklo/error.hpp"
#include "gklo/kernels.hpp"

namespace gklo {
namespace {

VarKind infer_kind(std::string_view name);

// hbar and the spectral/monopole variables always come first, so printed
// forms do not depend on which variables a process happened to touch first.
struct Table {
    Table() {
        for (const char* n : {"hbar", "u", "v", "x"}) {
            index.emplace(n, static_cast<VarIndex>(infos.size()));
            infos.push_back({n, infer_kind(n)});
        }
    }
    std::shared_mutex mu;
    std::deque<VarInfo> infos;
    std::unordered_map<std::string, VarIndex> index;
};

Table& table() {
    static Table t;
    return t;
}

VarKind infer_kind(std::string_view name) {
    if (name == "hbar") return VarKind::Hbar;
    if (name.starts_with("x_{")) return VarKind::Node;
    if (name.starts_with("w_{")) return VarKind::Framing;
    return VarKind::Spectral;
}

}  // namespace

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::ShiftOnNonNodeVar: return "ShiftOnNonNodeVar";
        case ErrorCode::RepeatedPole: return "RepeatedPole";
        case ErrorCode::NonLinearFactor: return "NonLinearFactor";
        case ErrorCode::VarTableFull: return "VarTableFull";
        case ErrorCode::ExponentOverflow: return "ExponentOverflow";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::FixedNode: return "FixedNode";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::MultiEdge: return "MultiEdge";
        case ErrorCode::InvolutionMismatch: return "InvolutionMismatch";
        case ErrorCode::BadPositiveHalf: return "BadPositiveHalf";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::ContextMismatch: return "ContextMismatch";
        case ErrorCode::NotNegativeNode: return "NotNegativeNode";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::WrongBranch: return "WrongBranch";
        case ErrorCode::NotMinusculeContext: return "NotMinusculeContext";
        case ErrorCode::EmptyNode: return "EmptyNode";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

VarIndex intern_var(std::string_view name) {
    auto& t = table();
    {
        std::shared_lock lock(t.mu);
        if (auto it = t.index.find(std::string(name)); it != t.index.end()) return it->second;
    }
    std::unique_lock lock(t.mu);
    if (auto it = t.index.find(std::string(name)); it != t.index.end()) return it->second;
    if (t.infos.size() >= kMaxVars)
        throw Error(ErrorCode::VarTableFull, "variable table full, cannot add " + std::string(name));
    auto idx = static_cast<VarIndex>(t.infos.size());
    t.infos.push_back({std::string(name), infer_kind(name)});
    t.index.emplace(std::string(name), idx);
    return idx;
}

std::optional<VarIndex> find_var(std::string_view name) {
    auto& t = table();
    std::shared_lock lock(t.mu);
    if (auto it = t.index.find(std::string(name)); it != t.index.end()) return it->second;
    return std::nullopt;
}

const VarInfo& var_info(VarIndex v) {
    auto& t = table();
    std::shared_lock lock(t.mu);
    return t.infos.at(v);
}

std::size_t var_count() {
    auto& t = table();
    std::shared_lock lock(t.mu);
    return t.infos.size();
}

namespace {

int kind_rank(VarKind k) {
    switch (k) {
        case VarKind::Hbar: return 0;
        case VarKind::Spectral: return 1;
        case VarKind::Node: return 2;
        case VarKind::Framing: return 3;
    }
    return 4;
}

int natural_compare(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    while (i < a.size() && j < b.size()) {
        if (digit(a[i]) && digit(b[j])) {
            std::size_t i0 = i, j0 = j;
            while (i < a.size() && digit(a[i])) ++i;
            while (j < b.size() && digit(b[j])) ++j;
            auto x = a.substr(i0, i - i0), y = b.substr(j0, j - j0);
            while (x.size() > 1 && x[0] == '0') x.remove_prefix(1);
            while (y.size() > 1 && y[0] == '0') y.remove_prefix(1);
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            if (int c = x.compare(y)) return c < 0 ? -1 : 1;
        } else {
            if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]) ? -1 : 1;
            ++i;
            ++j;
        }
    }
    if (i < a.size()) return 1;
    if (j < b.size()) return -1;
    return a.compare(b) < 0 ? -1 : a.compare(b) > 0;
}

}  // namespace

bool var_print_less(VarIndex a, VarIndex b) {
    if (a == b) return false;
    const auto &x = var_info(a), &y = var_info(b);
    if (kind_rank(x.kind) != kind_rank(y.kind)) return kind_rank(x.kind) < kind_rank(y.kind);
    if (x.kind == VarKind::Spectral) {
        // the reserved spectral names keep their table order
        for (const char* n : {"u", "v", "x"}) {
            if (x.name == n) return y.name != n;
            if (y.name == n) return false;
        }
    }
    return natural_compare(x.name, y.name) < 0;
}

VarIndex hbar_var() {
    static const VarIndex h = intern_var("hbar");
    return h;
}

std::string node_var_name(std::string_view node, int r) {
    return "x_{" + std::string(node) + "," + std::to_string(r) + "}";
}

std::string framing_var_name(std::string_view node, int k) {
    return "w_{" + std::string(node) + "," + std::to_string(k) + "}";
}

}  // namespace gklo
