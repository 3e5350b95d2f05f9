// json_io.hpp
//
// JSON encodings shared by the command-line tool, the on-disk catalog
// cache and the test fixtures.
//
//   class            ->  [a, b_1, ..., b_delta]
//   catalog cache    ->  {format_version, delta, degree, self_intersection,
//                         classes: [[...], ...]}
//   dual graph       ->  {vertices: [{id, class: [...]|"contracted", ram}],
//                         edges: [{u, v, type, orientation?, tangency?}]}
//
// "orientation" names the vertex id of the ramified branch on a tau_ur
// edge; "tangency" on a rho edge is "coincident" or "independent".

#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "delpezzo/enumerate.hpp"
#include "delpezzo/lattice.hpp"
#include "delpezzo/trees.hpp"

namespace delpezzo {

using nlohmann::json;

inline json class_to_json(const DivisorClass& c) {
    json arr = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) arr.push_back(c[i]);
    return arr;
}

inline DivisorClass class_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("class: expected a nonempty array");
    std::vector<Coeff> v;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw std::invalid_argument("class: expected integers");
        v.push_back(x.get<Coeff>());
    }
    return DivisorClass(std::move(v));
}

constexpr int catalog_cache_format_version = 1;

inline json catalog_to_json(const ClassCatalog& cat) {
    json j;
    j["format_version"] = catalog_cache_format_version;
    j["delta"] = cat.query.ctx.delta();
    j["degree"] = cat.query.degree;
    j["self_intersection"] = cat.query.self_intersection;
    json classes = json::array();
    for (const auto& c : cat.classes) classes.push_back(class_to_json(c));
    j["classes"] = std::move(classes);
    return j;
}

/// Parse a cached catalog; empty optional when the payload is missing,
/// version-mismatched or fails cheap validity checks (cache is advisory).
inline std::optional<ClassCatalog> catalog_from_json(const json& j) {
    if (!j.is_object() || !j.contains("format_version") ||
        j["format_version"] != catalog_cache_format_version)
        return std::nullopt;
    if (!j.contains("delta") || !j.contains("degree") || !j.contains("self_intersection") ||
        !j.contains("classes"))
        return std::nullopt;
    try {
        LatticeContext ctx = LatticeContext::blowup_plane(j["delta"].get<int>());
        ClassCatalog cat{{ctx, j["degree"].get<Coeff>(), j["self_intersection"].get<Coeff>()}, {}};
        for (const auto& cj : j["classes"]) {
            DivisorClass c = class_from_json(cj);
            require_in_context(ctx, c);
            if (anticanonical_degree(ctx, c) != cat.query.degree ||
                self_intersection(ctx, c) != cat.query.self_intersection)
                return std::nullopt;
            cat.classes.push_back(std::move(c));
        }
        if (!std::is_sorted(cat.classes.begin(), cat.classes.end())) return std::nullopt;
        if (std::adjacent_find(cat.classes.begin(), cat.classes.end()) != cat.classes.end())
            return std::nullopt;
        return cat;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline json graph_to_json(const DualGraph& g) {
    json j;
    json vertices = json::array();
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        const auto& v = g.vertices[i];
        json vj;
        vj["id"] = i;
        if (v.contracted()) vj["class"] = "contracted";
        else vj["class"] = class_to_json(*v.image_class);
        vj["ram"] = v.ramification;
        vertices.push_back(std::move(vj));
    }
    j["vertices"] = std::move(vertices);
    json edges = json::array();
    for (const auto& e : g.edges) {
        json ej;
        ej["u"] = e.u;
        ej["v"] = e.v;
        ej["type"] = node_type_name(e.type);
        if (e.type == NodeType::tau_ur) ej["orientation"] = e.ramified_end;
        if (is_rho(e.type) && e.coincident_direction) ej["tangency"] = "coincident";
        edges.push_back(std::move(ej));
    }
    j["edges"] = std::move(edges);
    return j;
}

inline DualGraph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        throw std::invalid_argument("graph: expected {vertices, edges}");
    DualGraph g;
    g.vertices.resize(j["vertices"].size());
    for (const auto& vj : j["vertices"]) {
        if (!vj.contains("id")) throw std::invalid_argument("graph vertex: missing id");
        const std::size_t id = vj["id"].get<std::size_t>();
        if (id >= g.vertices.size()) throw std::invalid_argument("graph vertex: id out of range");
        GraphVertex& v = g.vertices[id];
        if (!vj.contains("class")) throw std::invalid_argument("graph vertex: missing class");
        if (vj["class"].is_string()) {
            if (vj["class"] != "contracted")
                throw std::invalid_argument("graph vertex: class must be an array or \"contracted\"");
        } else {
            v.image_class = class_from_json(vj["class"]);
        }
        if (vj.contains("ram")) v.ramification = vj["ram"].get<Coeff>();
    }
    for (const auto& ej : j["edges"]) {
        GraphEdge e;
        e.u = ej.at("u").get<int>();
        e.v = ej.at("v").get<int>();
        auto t = node_type_from_name(ej.at("type").get<std::string>());
        if (!t) throw std::invalid_argument("graph edge: unknown node type");
        e.type = *t;
        if (ej.contains("orientation")) e.ramified_end = ej["orientation"].get<int>();
        if (ej.contains("tangency")) {
            const std::string tg = ej["tangency"].get<std::string>();
            if (tg == "coincident") e.coincident_direction = true;
            else if (tg != "independent") throw std::invalid_argument("graph edge: bad tangency");
        }
        g.edges.push_back(std::move(e));
    }
    return g;
}

inline std::optional<json> read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
}

inline bool write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) return false;
    out << j.dump(2) << "\n";
    return bool(out);
}

}  // namespace delpezzo
