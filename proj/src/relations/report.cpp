#include <sstream>

#include <json.hpp>

#include "gklo/relations.hpp"
#include "gklo/version.hpp"

namespace gklo {

std::string report_json(const GkloContext& ctx, const VerificationReport& r) {
    using nlohmann::ordered_json;
    const auto& q = ctx.quiver();
    ordered_json doc;
    doc["tool"] = "gklo";
    doc["version"] = kVersion;

    ordered_json cfg;
    cfg["nodes"] = q.node_ids();
    ordered_json v = ordered_json::object(), w = ordered_json::object();
    for (int i = 0; i < q.node_count(); ++i) {
        v[q.node_id(i)] = ctx.v(i);
        w[q.node_id(i)] = ctx.w(i);
    }
    cfg["v"] = v;
    cfg["w"] = w;
    cfg["corruption"] = to_string(ctx.corruption());
    doc["config"] = cfg;

    const auto& o = r.options;
    ordered_json opts;
    opts["mode"] = to_string(o.mode);
    opts["series_order"] = r.series_order;
    opts["trials"] = o.trials;
    opts["seed"] = o.seed;
    opts["prime"] = o.prime ? o.prime : default_prime();
    opts["threads"] = o.threads;
    opts["rescale"] = o.rescale.get_str();
    ordered_json only = ordered_json::array();
    for (RelationTag t : o.only) only.push_back(to_string(t));
    opts["only"] = only;
    doc["options"] = opts;

    doc["summary"] = {{"pass", r.count(Status::Pass)},
                      {"fail", r.count(Status::Fail)},
                      {"inconclusive", r.count(Status::Inconclusive)},
                      {"skipped", r.count(Status::Skipped)}};

    ordered_json entries = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json j;
        j["tag"] = to_string(e.id.tag);
        ordered_json nodes = ordered_json::array();
        for (int n : e.id.nodes) nodes.push_back(q.node_id(n));
        j["nodes"] = nodes;
        j["aux"] = e.id.aux;
        j["name"] = e.name;
        j["mode"] = to_string(e.mode);
        j["status"] = to_string(e.status);
        if (!e.note.empty()) j["note"] = e.note;
        if (e.witness) {
            ordered_json wj;
            wj["label"] = e.witness->label;
            wj["monomial"] = e.witness->monomial;
            if (!e.witness->term.empty()) wj["term"] = e.witness->term;
            if (!e.witness->point.empty()) {
                ordered_json pt = ordered_json::object();
                for (const auto& [name, val] : e.witness->point) pt[name] = val;
                wj["point"] = pt;
                wj["value"] = e.witness->value;
            }
            j["witness"] = wj;
        }
        if (o.timings) j["elapsed_ms"] = e.elapsed_ms;
        entries.push_back(j);
    }
    doc["entries"] = entries;
    return doc.dump(2) + "\n";
}

std::string report_summary(const VerificationReport& r) {
    std::ostringstream os;
    for (const auto& e : r.entries) {
        if (e.status == Status::Pass || e.status == Status::Skipped) continue;
        os << to_string(e.status) << "  " << e.name;
        if (e.witness) os << "  [" << e.witness->label << "] at " << e.witness->monomial;
        if (!e.note.empty()) os << "  (" << e.note << ")";
        os << "\n";
    }
    os << r.count(Status::Pass) << " pass, " << r.count(Status::Fail) << " fail, " << r.count(Status::Inconclusive)
       << " inconclusive, " << r.count(Status::Skipped) << " skipped (" << to_string(r.options.mode)
       << ", order " << r.series_order << ")\n";
    return os.str();
}

}  // namespace gklo
