#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "torbar/constructions.hpp"
#include "torbar/errors.hpp"
#include "torbar/graph.hpp"
#include "torbar/induced.hpp"
#include "torbar/rigidity.hpp"

namespace torbar {

using json = nlohmann::ordered_json;

inline std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

namespace detail {

inline json gain_to_json(const GainVector& m) { return json::array({m[0], m[1], m[2]}); }

inline GainVector gain_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) {
        throw ParseError(where + ": gain must be an array of exactly 3 integers");
    }
    GainVector m;
    for (std::size_t k = 0; k < 3; ++k) {
        if (!j[k].is_number_integer()) {
            throw ParseError(where + "[" + std::to_string(k) + "]: gain component must be an integer");
        }
        m.c[k] = j[k].get<std::int64_t>();
    }
    return m;
}

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ParseError(where + ": unknown field \"" + item.key() + "\"");
        }
    }
}

}  // namespace detail

// Canonical document: bodies sorted lexicographically, edges by id, explicit
// ids, fixed key order. Stored edge orientations are preserved.
inline json serialize_graph(const BodyBarOrbitGraph& g) {
    json doc;
    doc["dim"] = 3;
    std::vector<std::string> bodies = g.body_names();
    std::sort(bodies.begin(), bodies.end());
    doc["bodies"] = bodies;
    json edges = json::array();
    for (const OrientedEdge& e : g.edges()) {
        json je;
        je["u"] = g.body_name(e.tail);
        je["v"] = g.body_name(e.head);
        je["gain"] = detail::gain_to_json(e.gain);
        je["id"] = e.id;
        edges.push_back(std::move(je));
    }
    doc["edges"] = std::move(edges);
    return doc;
}

inline BodyBarOrbitGraph parse_graph(const json& doc, std::int64_t gain_cap = kDefaultGainCap) {
    if (!doc.is_object()) throw ParseError("document root must be an object");
    detail::reject_unknown_keys(doc, {"dim", "bodies", "edges"}, "document");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<int>() != 3) {
        throw ParseError("dim: must be the integer 3");
    }
    if (!doc.contains("bodies") || !doc["bodies"].is_array() || doc["bodies"].empty()) {
        throw ParseError("bodies: must be a non-empty array of body ids");
    }
    if (!doc.contains("edges") || !doc["edges"].is_array()) {
        throw ParseError("edges: must be an array");
    }

    BodyBarOrbitGraph g(gain_cap);
    for (std::size_t i = 0; i < doc["bodies"].size(); ++i) {
        const json& b = doc["bodies"][i];
        const std::string where = "bodies[" + std::to_string(i) + "]";
        if (!b.is_string() || b.get<std::string>().empty()) {
            throw ParseError(where + ": body id must be a non-empty string");
        }
        try {
            g.add_body(b.get<std::string>());
        } catch (const DomainError& err) {
            throw ParseError(where + ": " + err.what());
        }
    }

    struct Pending {
        std::string u, v;
        GainVector gain;
        std::optional<EdgeId> id;
        std::string where;
    };
    std::vector<Pending> pending;
    std::set<EdgeId> explicit_ids;
    EdgeId next_id = 0;
    for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
        const json& je = doc["edges"][i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (!je.is_object()) throw ParseError(where + ": edge must be an object");
        detail::reject_unknown_keys(je, {"u", "v", "gain", "id"}, where);
        for (const char* key : {"u", "v"}) {
            if (!je.contains(key) || !je[key].is_string()) {
                throw ParseError(where + "." + key + ": must be a body id string");
            }
            if (!g.has_body(je[key].get<std::string>())) {
                throw ParseError(where + "." + key + ": unknown body \"" +
                                 je[key].get<std::string>() + "\"");
            }
        }
        if (!je.contains("gain")) throw ParseError(where + ".gain: missing");
        Pending p;
        p.u = je["u"].get<std::string>();
        p.v = je["v"].get<std::string>();
        p.gain = detail::gain_from_json(je["gain"], where + ".gain");
        p.where = where;
        if (je.contains("id")) {
            if (!je["id"].is_number_integer() || je["id"].get<std::int64_t>() < 0) {
                throw ParseError(where + ".id: must be a non-negative integer");
            }
            p.id = je["id"].get<std::int64_t>();
            if (!explicit_ids.insert(*p.id).second) {
                throw ParseError(where + ".id: duplicate edge id " + std::to_string(*p.id));
            }
            next_id = std::max(next_id, *p.id + 1);
        }
        pending.push_back(std::move(p));
    }
    for (Pending& p : pending) {
        if (!p.id) {
            while (explicit_ids.count(next_id)) ++next_id;
            p.id = next_id++;
        }
        try {
            g.add_edge(p.u, p.v, p.gain, p.id);
        } catch (const DomainError& err) {
            throw ParseError(p.where + ": " + err.what());
        }
    }
    return g;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        // Map the byte offset to a line number for the diagnostic.
        std::size_t line = 1;
        for (std::size_t i = 0; i < err.byte && i < text.size(); ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ParseError(origin + ":" + std::to_string(line) + ": " + err.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline BodyBarOrbitGraph load_graph_file(const std::string& path,
                                         std::int64_t gain_cap = kDefaultGainCap) {
    return parse_graph(parse_json_text(read_file(path), path), gain_cap);
}

// Bar-joint graphs reuse the document schema; vertices are listed as bodies.
inline json serialize_bar_joint(const BarJointOrbitGraph& g) {
    json doc;
    doc["dim"] = 3;
    std::vector<std::string> names = g.vertex_names();
    std::sort(names.begin(), names.end());
    doc["bodies"] = names;
    json edges = json::array();
    for (const OrientedEdge& e : g.edges()) {
        json je;
        je["u"] = g.vertex_name(e.tail);
        je["v"] = g.vertex_name(e.head);
        je["gain"] = detail::gain_to_json(e.gain);
        je["id"] = e.id;
        edges.push_back(std::move(je));
    }
    doc["edges"] = std::move(edges);
    return doc;
}

// ---------------------------------------------------------------------------
// Reduction traces.

inline json pinch_to_json(const PinchSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["j"] = spec.j;
    if (spec.new_body) j["new_body"] = *spec.new_body;
    json pinched = json::array();
    for (const auto& p : spec.pinched) {
        json jp;
        jp["edge"] = p.edge_id;
        jp["first_half"] = detail::gain_to_json(p.first_half);
        if (p.anchor) jp["anchor"] = *p.anchor;
        if (p.half1_id) jp["half1"] = *p.half1_id;
        if (p.half2_id) jp["half2"] = *p.half2_id;
        pinched.push_back(std::move(jp));
    }
    j["pinched"] = std::move(pinched);
    json loops = json::array();
    for (const auto& l : spec.loops) {
        json jl;
        jl["gain"] = detail::gain_to_json(l.gain);
        if (l.id) jl["id"] = *l.id;
        loops.push_back(std::move(jl));
    }
    j["loops"] = std::move(loops);
    json news = json::array();
    for (const auto& ne : spec.new_edges) {
        json jn;
        jn["target"] = ne.target;
        jn["gain"] = detail::gain_to_json(ne.gain);
        if (ne.id) jn["id"] = *ne.id;
        news.push_back(std::move(jn));
    }
    j["new_edges"] = std::move(news);
    return j;
}

inline PinchSpec pinch_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": pinch must be an object");
    detail::reject_unknown_keys(j, {"n", "j", "new_body", "pinched", "loops", "new_edges"}, where);
    PinchSpec spec;
    if (!j.contains("n") || !j["n"].is_number_integer()) throw ParseError(where + ".n: missing integer");
    if (!j.contains("j") || !j["j"].is_number_integer()) throw ParseError(where + ".j: missing integer");
    spec.n = j["n"].get<int>();
    spec.j = j["j"].get<int>();
    if (j.contains("new_body")) {
        if (!j["new_body"].is_string()) throw ParseError(where + ".new_body: must be a string");
        spec.new_body = j["new_body"].get<std::string>();
    }
    auto opt_id = [&](const json& obj, const char* key, const std::string& w) -> std::optional<EdgeId> {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj[key].is_number_integer() || obj[key].get<std::int64_t>() < 0) {
            throw ParseError(w + "." + key + ": must be a non-negative integer");
        }
        return obj[key].get<std::int64_t>();
    };
    if (j.contains("pinched")) {
        for (std::size_t i = 0; i < j["pinched"].size(); ++i) {
            const json& jp = j["pinched"][i];
            const std::string w = where + ".pinched[" + std::to_string(i) + "]";
            detail::reject_unknown_keys(jp, {"edge", "first_half", "anchor", "half1", "half2"}, w);
            if (!jp.contains("edge") || !jp["edge"].is_number_integer()) {
                throw ParseError(w + ".edge: missing integer");
            }
            PinchSpec::Pinched p;
            p.edge_id = jp["edge"].get<std::int64_t>();
            p.first_half = detail::gain_from_json(jp.at("first_half"), w + ".first_half");
            if (jp.contains("anchor")) {
                if (!jp["anchor"].is_string()) throw ParseError(w + ".anchor: must be a string");
                p.anchor = jp["anchor"].get<std::string>();
            }
            p.half1_id = opt_id(jp, "half1", w);
            p.half2_id = opt_id(jp, "half2", w);
            spec.pinched.push_back(std::move(p));
        }
    }
    if (j.contains("loops")) {
        for (std::size_t i = 0; i < j["loops"].size(); ++i) {
            const json& jl = j["loops"][i];
            const std::string w = where + ".loops[" + std::to_string(i) + "]";
            detail::reject_unknown_keys(jl, {"gain", "id"}, w);
            spec.loops.push_back({detail::gain_from_json(jl.at("gain"), w + ".gain"), opt_id(jl, "id", w)});
        }
    }
    if (j.contains("new_edges")) {
        for (std::size_t i = 0; i < j["new_edges"].size(); ++i) {
            const json& jn = j["new_edges"][i];
            const std::string w = where + ".new_edges[" + std::to_string(i) + "]";
            detail::reject_unknown_keys(jn, {"target", "gain", "id"}, w);
            if (!jn.contains("target") || !jn["target"].is_string()) {
                throw ParseError(w + ".target: missing string");
            }
            spec.new_edges.push_back({jn["target"].get<std::string>(),
                                      detail::gain_from_json(jn.at("gain"), w + ".gain"),
                                      opt_id(jn, "id", w)});
        }
    }
    return spec;
}

inline json trace_to_json(const ReductionTrace& trace) {
    json j;
    j["format"] = "torbar-trace-v1";
    j["terminal"] = serialize_graph(trace.terminal);
    json steps = json::array();
    for (const auto& step : trace.steps) {
        json js;
        js["removed_body"] = step.removed_body;
        js["pinch"] = pinch_to_json(step.spec);
        steps.push_back(std::move(js));
    }
    j["steps"] = std::move(steps);
    return j;
}

inline ReductionTrace trace_from_json(const json& j, std::int64_t gain_cap = kDefaultGainCap) {
    if (!j.is_object()) throw ParseError("trace: root must be an object");
    detail::reject_unknown_keys(j, {"format", "terminal", "steps"}, "trace");
    if (!j.contains("format") || j["format"] != "torbar-trace-v1") {
        throw ParseError("trace.format: expected \"torbar-trace-v1\"");
    }
    if (!j.contains("terminal")) throw ParseError("trace.terminal: missing");
    ReductionTrace trace;
    trace.terminal = parse_graph(j["terminal"], gain_cap);
    if (j.contains("steps")) {
        for (std::size_t i = 0; i < j["steps"].size(); ++i) {
            const json& js = j["steps"][i];
            const std::string w = "trace.steps[" + std::to_string(i) + "]";
            detail::reject_unknown_keys(js, {"removed_body", "pinch"}, w);
            if (!js.contains("removed_body") || !js["removed_body"].is_string()) {
                throw ParseError(w + ".removed_body: missing string");
            }
            trace.steps.push_back(
                {pinch_from_json(js.at("pinch"), w + ".pinch"), js["removed_body"].get<std::string>()});
        }
    }
    return trace;
}

// CSV dump of a field matrix: one row per edge, residues as decimal integers.
inline std::string matrix_csv(const FieldMatrix& m, const BarJointOrbitGraph& g) {
    std::ostringstream out;
    out << "edge_id";
    for (const std::string& name : g.vertex_names()) {
        out << ",v:" << name << ":x,v:" << name << ":y,v:" << name << ":z";
    }
    out << "\n";
    for (std::size_t r = 0; r < m.rows; ++r) {
        out << m.row_edge_ids[r];
        for (std::size_t c = 0; c < m.cols; ++c) out << "," << m.at(r, c);
        out << "\n";
    }
    return out.str();
}

}  // namespace torbar
