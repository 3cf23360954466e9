#pragma once

// Generator-relation presentations and circle-algebra block profiles.

#include "okgraph/graph.hpp"

#include <map>
#include <string>
#include <vector>

namespace okgraph {

struct IsometryGenerator {
    std::string edge;
    Integer k;
    bool family = false;  // stands for every edge of an infinite family
};

/// One relation. Which fields are set depends on the type:
///   "i"    per vertex        U_v^*U_v = U_vU_v^*
///   "ii"   once              the U_v^*U_v are mutually orthogonal
///   "iii"  per (e, k)        S_{e,k}^*S_{e,k} = U_{d(e)}^*U_{d(e)}
///   "iv"   once              the S_{e,k}S_{e,k}^* are mutually orthogonal
///   "vi"   per (e, k)        U_{r(e)}S_{e,k} = S_{e,k'}U_{d(e)}^l, k + m(e) = k' + n(e) l
///   "vii"  per v in E0_rg and E0_m
///   "viii" per v in E0_sg and E0_m
struct Relation {
    std::string type;
    std::optional<std::string> vertex;
    std::optional<std::string> edge;
    std::optional<Integer> k;
    std::optional<Integer> k_prime;
    std::optional<Integer> l;
    std::vector<std::string> terms;
    std::string text;
};

struct StarPresentation {
    std::vector<std::string> unitaries;
    std::vector<IsometryGenerator> isometries;
    std::vector<Relation> relations;
    bool toeplitz = false;

    std::size_t count(const std::string& type) const {
        std::size_t c = 0;
        for (const auto& r : relations)
            if (r.type == type) ++c;
        return c;
    }
};

namespace detail {

inline std::string u_name(const std::string& v) { return "U_{" + v + "}"; }
inline std::string s_name(const std::string& e, const Integer& k) { return "S_{" + e + "," + k.str() + "}"; }

inline std::string u_power(const std::string& v, const Integer& l) {
    if (l == 0) return "";
    if (l == 1) return u_name(v);
    return u_name(v) + "^{" + l.str() + "}";
}

/// S_{e,k+m} written as S_{e,k'}U^l.
inline std::string shifted(const std::string& e, const std::string& d, const Integer& k_prime, const Integer& l) {
    return s_name(e, k_prime) + u_power(d, l);
}

}  // namespace detail

inline StarPresentation star_presentation(const WeightedGraph& g, bool toeplitz = false) {
    StarPresentation out;
    out.toeplitz = toeplitz;
    for (const auto& v : g.vertices()) {
        out.unitaries.push_back("u_" + v);
        out.relations.push_back({"i", v, {}, {}, {}, {}, {}, detail::u_name(v) + "^*" + detail::u_name(v) + " = " +
                                                                   detail::u_name(v) + detail::u_name(v) + "^*"});
    }
    out.relations.push_back({"ii", {}, {}, {}, {}, {}, {}, "{U_v^*U_v} mutually orthogonal projections"});

    for (const Arrow& e : g.arrows()) {
        const std::string& d = g.vertex_id(e.dom);
        for (Integer k = 0; k < e.n; ++k) {
            out.isometries.push_back({e.label, k, e.family});
            out.relations.push_back({"iii", {}, e.label, k, {}, {}, {},
                                     detail::s_name(e.label, k) + "^*" + detail::s_name(e.label, k) + " = " +
                                         detail::u_name(d) + "^*" + detail::u_name(d)});
        }
    }
    if (!out.isometries.empty())
        out.relations.push_back({"iv", {}, {}, {}, {}, {}, {}, "{S_{e,k}S_{e,k}^*} mutually orthogonal projections"});

    for (const Arrow& e : g.arrows()) {
        const std::string& d = g.vertex_id(e.dom);
        const std::string& r = g.vertex_id(e.ran);
        for (Integer k = 0; k < e.n; ++k) {
            Integer l = floor_div(k + e.m, e.n);
            Integer kp = k + e.m - e.n * l;
            out.relations.push_back({"vi", {}, e.label, k, kp, l, {},
                                     detail::u_name(r) + detail::s_name(e.label, k) + " = " +
                                         detail::shifted(e.label, d, kp, l)});
        }
    }
    if (toeplitz) return out;

    const VertexSet mv = m_vertices(g);
    const VertexSet rg = regular_vertices(g);
    for (VertexIndex v : mv) {
        const std::string& id = g.vertex_id(v);
        Relation rel;
        rel.vertex = id;
        const bool regular = contains(rg, v);
        rel.type = regular ? "vii" : "viii";
        for (std::size_t a : g.in_arrows(v)) {
            const Arrow& e = g.arrow(a);
            if (!regular && e.m == 0) continue;
            const std::string& d = g.vertex_id(e.dom);
            for (Integer k = 0; k < e.n; ++k) {
                if (regular) {
                    rel.terms.push_back(detail::s_name(e.label, k) + detail::s_name(e.label, k) + "^*");
                } else {
                    Integer l = floor_div(k + e.m, e.n);
                    Integer kp = k + e.m - e.n * l;
                    rel.terms.push_back("(" + detail::s_name(e.label, k) + " - " + detail::shifted(e.label, d, kp, l) +
                                        ")" + detail::s_name(e.label, k) + "^*");
                }
            }
        }
        std::string sum;
        for (std::size_t i = 0; i < rel.terms.size(); ++i) sum += (i ? " + " : "") + rel.terms[i];
        rel.text = detail::u_name(id) + "^*" + detail::u_name(id) + (regular ? "" : " - " + detail::u_name(id)) +
                   " = " + sum;
        out.relations.push_back(std::move(rel));
    }
    return out;
}

struct ReducedRelation {
    std::string label;
    std::string text;
};

/// Presentation of O(E_{n,m}) with one unitary u and isometries regrouped
/// along d = gcd(n, |m|).
struct ReducedPresentation {
    Integer n;
    Integer m;
    Integer d;
    std::vector<std::string> generators;
    std::vector<ReducedRelation> relations;
};

inline ReducedPresentation one_vertex_reduced(const Integer& n, const Integer& m) {
    if (n < 1) throw ValidationError("one_vertex_reduced: n must be >= 1");
    if (m == 0) throw ValidationError("one_vertex_reduced: no reduced form for m = 0");
    ReducedPresentation out{n, m, gcd(n, m), {}, {}};
    auto power = [](const std::string& base, const Integer& e) {
        if (e == 1) return base;
        return base + "^" + (e < 0 ? "{" + e.str() + "}" : e.str());
    };
    if (out.d == 1) {
        out.generators = {"u", "s"};
        out.relations.push_back(
            {"i", "u*u = uu* = s*s = sum_{k=0}^{" + Integer(n - 1).str() + "} u^k ss* u^{-k} = 1"});
        out.relations.push_back({"ii", power("u", n) + " s = s " + power("u", m)});
        return out;
    }
    const Integer block = n / out.d;
    for (Integer i = 0; i < out.d; ++i)
        for (Integer k = 0; k < block; ++k) out.generators.push_back("s_{" + i.str() + "," + k.str() + "}");
    out.generators.insert(out.generators.begin(), "u");
    out.relations.push_back({"unitary", "u*u = uu* = 1"});
    out.relations.push_back({"isometries", "s_{i,k}*s_{i,k} = 1 and sum_{i,k} s_{i,k}s_{i,k}* = 1"});
    for (Integer i = 0; i < out.d; ++i) {
        for (Integer k = 0; k + 1 < block; ++k)
            out.relations.push_back({"shift", "u s_{" + i.str() + "," + k.str() + "} = s_{" + i.str() + "," +
                                                  Integer(k + 1).str() + "}"});
        out.relations.push_back({"wrap", "u s_{" + i.str() + "," + Integer(block - 1).str() + "} = s_{" + i.str() + ",0} " +
                                             power("u", m / out.d)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Circle-algebra profiles

struct ProfileBlock {
    std::string vertex;
    Integer dim;
    bool circle = true;

    std::string str() const {
        std::string mat = dim == 1 ? "" : "M_" + dim.str();
        if (circle) return mat.empty() ? "C(T)" : mat + " (x) C(T)";
        return mat.empty() ? "C" : mat;
    }
};

struct CircleAlgebraProfile {
    std::vector<ProfileBlock> blocks;

    std::string str() const {
        if (blocks.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < blocks.size(); ++i) out += (i ? " + " : "") + blocks[i].str();
        return out;
    }
    Integer total_dim() const {
        Integer t = 0;
        for (const auto& b : blocks) t += b.dim;
        return t;
    }
};

/// k_v = sum of n(mu) over paths mu (the empty path included) with d*(mu) = v,
/// on a loop-free graph without families: k_v = 1 + sum_{d(e) = v} n(e) k_{r(e)}.
inline std::vector<Integer> path_weights(const WeightedGraph& f) {
    if (f.family_count() != 0) throw ValidationError("profile: the graph must not carry infinite families");
    if (has_loop(f)) throw ValidationError("profile: the graph has a loop");
    std::vector<std::optional<Integer>> memo(f.vertex_count());
    auto k = [&](auto&& self, VertexIndex v) -> Integer {
        if (memo[v]) return *memo[v];
        Integer total = 1;
        for (std::size_t a : f.out_arrows(v)) total += f.arrow(a).n * self(self, f.arrow(a).ran);
        memo[v] = total;
        return total;
    };
    std::vector<Integer> out;
    for (VertexIndex v = 0; v < f.vertex_count(); ++v) out.push_back(k(k, v));
    return out;
}

inline CircleAlgebraProfile toeplitz_profile(const WeightedGraph& f) {
    std::vector<Integer> k = path_weights(f);
    CircleAlgebraProfile out;
    for (VertexIndex v = 0; v < f.vertex_count(); ++v) out.blocks.push_back({f.vertex_id(v), k[v], true});
    return out;
}

/// The subgraph F of `e` on the given vertices and edges.
inline WeightedGraph subgraph(const WeightedGraph& e, const std::vector<std::string>& vertices,
                              const std::vector<std::string>& edges) {
    for (const auto& v : vertices) e.vertex(v);
    std::vector<EdgeSpec> specs;
    for (const auto& id : edges) {
        auto a = e.find_edge(id);
        if (!a) throw ValidationError("subgraph: unknown edge '" + id + "'");
        const Arrow& x = e.arrow(*a);
        const std::string& d = e.vertex_id(x.dom);
        const std::string& r = e.vertex_id(x.ran);
        if (std::find(vertices.begin(), vertices.end(), d) == vertices.end() ||
            std::find(vertices.begin(), vertices.end(), r) == vertices.end())
            throw ValidationError("subgraph: edge '" + id + "' leaves the vertex set");
        specs.push_back({id, d, r, x.n, x.m});
    }
    return build_graph(vertices, std::move(specs));
}

/// Blocks M_{k_v} for v in S1 and M_{k_v} (x) C(T) for v in S2, where with
/// R(v) = r^{-1}(v) \ F1 in E:
///   S1 = {v in F0 and E0_m : R(v) nonempty, all m = 0}
///   S2 = F0 minus {v in F0 and E0_m : all of R(v) has m = 0}.
inline CircleAlgebraProfile relative_profile(const WeightedGraph& e, const std::vector<std::string>& f_vertices,
                                             const std::vector<std::string>& f_edges) {
    WeightedGraph f = subgraph(e, f_vertices, f_edges);
    std::vector<Integer> k = path_weights(f);
    std::vector<char> in_f1(e.arrows().size(), 0);
    for (const auto& id : f_edges) in_f1[*e.find_edge(id)] = 1;
    const VertexSet em = m_vertices(e);
    CircleAlgebraProfile out;
    for (VertexIndex fv = 0; fv < f.vertex_count(); ++fv) {
        const VertexIndex v = e.vertex(f.vertex_id(fv));
        std::size_t outside = 0;
        bool all_zero = true;
        for (std::size_t a : e.in_arrows(v)) {
            if (in_f1[a]) continue;
            ++outside;
            if (e.arrow(a).m != 0) all_zero = false;
        }
        const bool in_em = contains(em, v);
        if (in_em && all_zero && outside > 0)
            out.blocks.push_back({f.vertex_id(fv), k[fv], false});
        else if (!(in_em && all_zero))
            out.blocks.push_back({f.vertex_id(fv), k[fv], true});
    }
    return out;
}

}  // namespace okgraph
