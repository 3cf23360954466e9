#pragma once

// JSON for graphs and reports. Integers beyond 2^53 in magnitude are written
// as decimal strings; either form is accepted on input.

#include "okgraph/classify.hpp"
#include "okgraph/ktheory.hpp"
#include "okgraph/present.hpp"
#include "okgraph/realize.hpp"

#include <json.hpp>

namespace okgraph {

using Json = nlohmann::ordered_json;

inline Json to_json(const Integer& x) {
    if (fits_json_number(x)) return Json(x.convert_to<long long>());
    return Json(x.str());
}

inline Integer integer_from_json(const Json& j, const std::string& what) {
    if (j.is_number_integer()) return Integer(j.get<long long>());
    if (j.is_number_unsigned()) return Integer(j.get<unsigned long long>());
    if (j.is_string()) {
        try {
            return parse_integer(j.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw ValidationError(what + ": expected an integer, got " + j.dump());
}

inline Json to_json(const IntVector& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

inline Json to_json(const IntMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
    return out;
}

inline Json to_json(const std::vector<std::string>& v) {
    Json out = Json::array();
    for (const auto& s : v) out.push_back(s);
    return out;
}

// ---------------------------------------------------------------------------
// Graphs

inline WeightedGraph graph_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("graph JSON must be an object");
    auto field = [](const Json& obj, const char* key, const std::string& where) -> const Json& {
        auto it = obj.find(key);
        if (it == obj.end()) throw ValidationError(where + ": missing \"" + key + "\"");
        return *it;
    };
    auto str = [&](const Json& obj, const char* key, const std::string& where) {
        const Json& v = field(obj, key, where);
        if (!v.is_string()) throw ValidationError(where + ": \"" + key + "\" must be a string");
        return v.get<std::string>();
    };
    std::vector<std::string> vertices;
    const Json& vs = field(j, "vertices", "graph");
    if (!vs.is_array()) throw ValidationError("graph: \"vertices\" must be an array");
    for (const auto& v : vs) {
        if (!v.is_string()) throw ValidationError("graph: vertex ids must be strings");
        vertices.push_back(v.get<std::string>());
    }
    std::vector<EdgeSpec> edges;
    if (auto it = j.find("edges"); it != j.end()) {
        if (!it->is_array()) throw ValidationError("graph: \"edges\" must be an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& e = (*it)[i];
            const std::string where = "edge " + std::to_string(i);
            if (!e.is_object()) throw ValidationError(where + " must be an object");
            edges.push_back({str(e, "id", where), str(e, "dom", where), str(e, "ran", where),
                             integer_from_json(field(e, "n", where), where + " n"),
                             integer_from_json(field(e, "m", where), where + " m")});
        }
    }
    std::vector<FamilySpec> families;
    if (auto it = j.find("families"); it != j.end()) {
        if (!it->is_array()) throw ValidationError("graph: \"families\" must be an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& f = (*it)[i];
            const std::string where = "family " + std::to_string(i);
            if (!f.is_object()) throw ValidationError(where + " must be an object");
            families.push_back({str(f, "dom", where), str(f, "ran", where),
                                integer_from_json(field(f, "n", where), where + " n"),
                                integer_from_json(field(f, "m", where), where + " m")});
        }
    }
    return build_graph(std::move(vertices), std::move(edges), std::move(families));
}

inline WeightedGraph parse_graph(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    return graph_from_json(j);
}

inline Json to_json(const WeightedGraph& g) {
    Json out;
    out["vertices"] = to_json(g.vertices());
    out["edges"] = Json::array();
    for (const auto& e : g.edge_specs())
        out["edges"].push_back({{"id", e.id}, {"dom", e.dom}, {"ran", e.ran}, {"n", to_json(e.n)}, {"m", to_json(e.m)}});
    out["families"] = Json::array();
    for (const auto& f : g.family_specs())
        out["families"].push_back({{"dom", f.dom}, {"ran", f.ran}, {"n", to_json(f.n)}, {"m", to_json(f.m)}});
    return out;
}

inline Json path_json(const WeightedGraph& g, const Path& p) { return to_json(p.labels(g)); }

inline Json inspect_json(const WeightedGraph& g) {
    Json out;
    out["vertices"] = to_json(g.vertices());
    out["edges"] = to_json(g)["edges"];
    out["families"] = to_json(g)["families"];
    out["regular_vertices"] = to_json(g.ids(regular_vertices(g)));
    out["m_vertices"] = to_json(g.ids(m_vertices(g)));
    auto loop = has_loop(g);
    out["loop"] = loop ? path_json(g, *loop) : Json(nullptr);
    return out;
}

// ---------------------------------------------------------------------------
// K-theory

inline Json to_json(const GroupElement& e) { return to_json(e.coords()); }

inline Json k_report(const WeightedGraph& g) {
    KMatrices km = assemble(g);
    KInvariants k = k_invariants_from(km);
    Json out;
    out["k0"] = k.k0.str();
    out["k1"] = k.k1.str();
    out["unit"] = to_json(k.unit);
    out["n_matrix"] = to_json(km.n_matrix);
    out["m_matrix"] = to_json(km.m_matrix);
    out["rg_m_columns"] = to_json(g.ids(km.rg_m_columns));
    out["m_columns"] = to_json(g.ids(km.m_columns));
    out["summands"] = {{"coker_i0_minus_n", k.coker_n.str()},
                       {"ker_i1_minus_m", k.ker_m.str()},
                       {"ker_i0_minus_n", k.ker_n.str()},
                       {"coker_i1_minus_m", k.coker_m.str()}};
    return out;
}

// ---------------------------------------------------------------------------
// Classification

inline Json to_json(const WeightedGraph& g, const PUnboundedVerdict& v) {
    Json out;
    out["status"] = to_string(v.status);
    out["sources"] = to_json(g.ids(v.sources));
    out["target"] = g.vertex_id(v.target);
    if (v.unbounded) {
        const auto& c = *v.unbounded;
        out["certificate"] = {{"cycle", path_json(g, c.cycle)},
                              {"base", g.vertex_id(c.base)},
                              {"source", g.vertex_id(c.source)},
                              {"access", c.access ? path_json(g, *c.access) : Json::array()},
                              {"exit", c.exit ? path_json(g, *c.exit) : Json::array()},
                              {"prime", to_json(c.prime)},
                              {"surplus", to_json(c.surplus)}};
    }
    if (v.bounded) {
        const auto& b = *v.bounded;
        Json cert;
        cert["proof"] = to_string(b.proof);
        if (b.max_p) cert["max_p"] = to_json(*b.max_p);
        if (b.p_upper_bound) cert["p_upper_bound"] = to_json(*b.p_upper_bound);
        if (!b.prime_bounds.empty()) {
            cert["prime_bounds"] = Json::array();
            for (const auto& pb : b.prime_bounds)
                cert["prime_bounds"].push_back({{"prime", to_json(pb.prime)}, {"max_valuation", to_json(pb.max_valuation)}});
        }
        if (b.proof == BoundedProof::kAcyclicRegion) cert["paths_examined"] = b.paths_examined;
        out["certificate"] = cert;
    }
    if (v.status == BoundStatus::kUnknown) out["search_bound"] = v.search_bound;
    return out;
}

inline Json to_json(const WeightedGraph& g, const MinimalityVerdict& m) {
    Json out;
    out["status"] = to_string(m.status);
    if (m.witness) {
        const auto& w = *m.witness;
        out["witness"] = {{"kind", to_string(w.kind)},
                          {"v0", g.vertex_id(w.v0)},
                          {"cycle", w.cycle ? path_json(g, *w.cycle) : Json::array()},
                          {"orbit", to_json(g.ids(w.orbit))},
                          {"bounded", to_json(g, w.bounded)}};
    }
    if (!m.note.empty()) out["note"] = m.note;
    Json pairs = Json::array();
    for (const auto& p : m.pairs) pairs.push_back(to_json(g, p));
    out["pairs"] = pairs;
    return out;
}

inline Json to_json(const WeightedGraph& g, const AlgebraVerdict& a) {
    Json out;
    out["label"] = to_string(a.label);
    out["kirchberg"] = a.kirchberg;
    out["justification"] = to_json(a.justification);
    out["loop"] = a.loop ? path_json(g, *a.loop) : Json(nullptr);
    out["minimality"] = to_json(g, a.minimality);
    return out;
}

// ---------------------------------------------------------------------------
// Realization

inline Json to_json(const RealizationReport& r) {
    Json out;
    out["k0"] = r.k0_spec.str();
    out["unit"] = r.k0_spec.unit ? to_json(*r.k0_spec.unit) : Json::array();
    out["k1"] = r.k1_spec.str();
    out["route"] = r.route;
    if (r.t) out["t"] = to_json(*r.t);
    if (r.s) out["s"] = to_json(*r.s);
    out["n_matrix"] = to_json(r.matrices.n_tilde);
    out["m_matrix"] = to_json(r.matrices.m);
    out["rank_deficit"] = r.matrices.l0;
    out["witness"] = {{"free_rank", r.matrices.witness_free},
                      {"torsion", to_json(r.matrices.witness_torsion)},
                      {"matrix", to_json(r.matrices.witness)},
                      {"unit_target", to_json(r.witness_target)}};
    out["computed"] = {{"k0", r.computed.k0.str()}, {"k1", r.computed.k1.str()}, {"unit", to_json(r.computed.unit)}};
    const auto& c = r.checks;
    out["verified"] = {{"ok", c.ok()},
                       {"k0_match", c.k0_match},
                       {"k1_match", c.k1_match},
                       {"unit_match", c.unit_match},
                       {"witness_well_defined", c.witness_well_defined},
                       {"witness_surjective", c.witness_surjective},
                       {"witness_injective", c.witness_injective},
                       {"minimal", c.minimal},
                       {"has_loop", c.has_loop},
                       {"failures", to_json(c.failures)}};
    out["minimality"] = to_string(r.minimality);
    return out;
}

// ---------------------------------------------------------------------------
// Presentations and profiles

inline Json to_json(const StarPresentation& p) {
    Json out;
    out["toeplitz"] = p.toeplitz;
    out["unitaries"] = to_json(p.unitaries);
    out["isometries"] = Json::array();
    for (const auto& s : p.isometries) {
        Json j = {{"edge", s.edge}, {"k", to_json(s.k)}};
        if (s.family) j["family"] = true;
        out["isometries"].push_back(j);
    }
    out["relations"] = Json::array();
    for (const auto& r : p.relations) {
        Json j;
        j["type"] = r.type;
        if (r.vertex) j["vertex"] = *r.vertex;
        if (r.edge) j["edge"] = *r.edge;
        if (r.k) j["k"] = to_json(*r.k);
        if (r.k_prime) j["k_prime"] = to_json(*r.k_prime);
        if (r.l) j["l"] = to_json(*r.l);
        if (!r.terms.empty()) j["terms"] = to_json(r.terms);
        j["text"] = r.text;
        out["relations"].push_back(j);
    }
    return out;
}

inline Json to_json(const ReducedPresentation& p) {
    Json out;
    out["n"] = to_json(p.n);
    out["m"] = to_json(p.m);
    out["d"] = to_json(p.d);
    out["generators"] = to_json(p.generators);
    out["relations"] = Json::array();
    for (const auto& r : p.relations) out["relations"].push_back({{"label", r.label}, {"text", r.text}});
    return out;
}

inline Json to_json(const CircleAlgebraProfile& p) {
    Json out;
    out["blocks"] = Json::array();
    for (const auto& b : p.blocks)
        out["blocks"].push_back({{"vertex", b.vertex}, {"dim", to_json(b.dim)}, {"circle", b.circle}});
    out["algebra"] = p.str();
    return out;
}

}  // namespace okgraph
