#include "gklo/spec_doc.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gklo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw Error(ErrorCode::Parse, "field " + (where.empty() ? std::string("/") : where) + ": " + msg);
}

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto& [k, val] : j.items())
        if (!allowed.count(k)) fail(where + "/" + k, "unknown key");
}

// Node and arrow ids may be written as strings or non-negative integers.
std::string id_at(const json& j, const std::string& where) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s.empty()) fail(where, "empty id");
        return s;
    }
    if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
    fail(where, "expected an id (string or non-negative integer)");
}

std::vector<std::string> id_list(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(id_at(j[k], where + "/" + std::to_string(k)));
    return out;
}

std::vector<std::pair<std::string, std::string>> pairs(const json& j, const std::string& where, bool allow_self) {
    if (!j.is_array()) fail(where, "expected an array of pairs");
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string at = where + "/" + std::to_string(k);
        if (!j[k].is_array() || j[k].size() != 2) fail(at, "expected a pair [a, b]");
        auto a = id_at(j[k][0], at + "/0");
        auto b = id_at(j[k][1], at + "/1");
        if (allow_self && b == "self") b = a;
        out.emplace_back(a, b);
    }
    return out;
}

std::map<std::string, int> dim_map(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object node -> integer");
    std::map<std::string, int> out;
    for (const auto& [k, val] : j.items()) {
        if (!val.is_number_integer() || val.get<long long>() < 0 || val.get<long long>() > 64)
            fail(where + "/" + k, "expected an integer in [0, 64]");
        out[k] = val.get<int>();
    }
    return out;
}

std::string position(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

SpecDocument parse_spec_document(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw Error(ErrorCode::Parse, position(text, e.byte ? e.byte - 1 : 0) + ": " + msg);
    }
    only_keys(j, "", {"nodes", "arrows", "involution", "positive_nodes", "dims", "options"});
    SpecDocument doc;
    if (!j.contains("nodes")) fail("/nodes", "missing");
    doc.quiver.nodes = id_list(j["nodes"], "/nodes");
    if (j.contains("arrows")) {
        const auto& arr = j["arrows"];
        if (!arr.is_array()) fail("/arrows", "expected an array");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string at = "/arrows/" + std::to_string(k);
            only_keys(arr[k], at, {"id", "source", "target"});
            for (const char* key : {"id", "source", "target"})
                if (!arr[k].contains(key)) fail(at + "/" + key, "missing");
            doc.quiver.arrows.push_back(
                {id_at(arr[k]["id"], at + "/id"), id_at(arr[k]["source"], at + "/source"), id_at(arr[k]["target"], at + "/target")});
        }
    }
    if (!j.contains("involution")) fail("/involution", "missing");
    const auto& inv = j["involution"];
    only_keys(inv, "/involution", {"nodes", "arrows"});
    if (inv.contains("nodes")) doc.quiver.node_pairs = pairs(inv["nodes"], "/involution/nodes", false);
    if (inv.contains("arrows")) doc.quiver.arrow_pairs = pairs(inv["arrows"], "/involution/arrows", true);
    if (j.contains("positive_nodes")) doc.quiver.positive_nodes = id_list(j["positive_nodes"], "/positive_nodes");
    if (j.contains("dims")) {
        only_keys(j["dims"], "/dims", {"v", "w"});
        if (j["dims"].contains("v")) doc.v = dim_map(j["dims"]["v"], "/dims/v");
        if (j["dims"].contains("w")) doc.w = dim_map(j["dims"]["w"], "/dims/w");
    }
    if (j.contains("options")) {
        const auto& o = j["options"];
        only_keys(o, "/options", {"mode", "series_order", "trials", "seed"});
        if (o.contains("mode")) {
            if (!o["mode"].is_string()) fail("/options/mode", "expected \"exact\" or \"random\"");
            auto m = o["mode"].get<std::string>();
            if (m != "exact" && m != "random") fail("/options/mode", "expected \"exact\" or \"random\"");
            doc.options.mode = m;
        }
        auto positive = [&](const char* key) -> std::optional<int> {
            if (!o.contains(key)) return std::nullopt;
            if (!o[key].is_number_integer() || o[key].get<long long>() < 1 || o[key].get<long long>() > 1000)
                fail(std::string("/options/") + key, "expected an integer in [1, 1000]");
            return o[key].get<int>();
        };
        doc.options.series_order = positive("series_order");
        doc.options.trials = positive("trials");
        if (o.contains("seed")) {
            if (!o["seed"].is_number_unsigned()) fail("/options/seed", "expected a non-negative integer");
            doc.options.seed = o["seed"].get<std::uint64_t>();
        }
    }
    return doc;
}

SpecDocument load_spec_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec_document(ss.str());
}

std::string write_spec_document(const SpecDocument& doc) {
    nlohmann::ordered_json j;
    j["nodes"] = doc.quiver.nodes;
    auto arrows = nlohmann::ordered_json::array();
    for (const auto& a : doc.quiver.arrows) arrows.push_back({{"id", a.id}, {"source", a.source}, {"target", a.target}});
    j["arrows"] = arrows;
    auto np = nlohmann::ordered_json::array(), ap = nlohmann::ordered_json::array();
    for (const auto& [a, b] : doc.quiver.node_pairs) np.push_back({a, b});
    for (const auto& [a, b] : doc.quiver.arrow_pairs) ap.push_back({a, a == b ? std::string("self") : b});
    j["involution"] = {{"nodes", np}, {"arrows", ap}};
    if (doc.quiver.positive_nodes) j["positive_nodes"] = *doc.quiver.positive_nodes;
    j["dims"] = {{"v", doc.v}, {"w", doc.w}};
    return j.dump(2) + "\n";
}

}  // namespace gklo
