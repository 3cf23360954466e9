#pragma once

// Weighted directed graphs (E, n, m): every edge e carries a covering degree
// n(e) >= 1 and a winding number m(e). Orientation: an edge runs from its
// domain d(e) to its range r(e). Paths are written range-first, so
// (e_1, ..., e_k) is composable when d(e_i) = r(e_{i+1}).

#include "okgraph/errors.hpp"
#include "okgraph/integer.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace okgraph {

using VertexIndex = std::size_t;
using VertexSet = std::vector<VertexIndex>;  // sorted, no duplicates

struct EdgeSpec {
    std::string id;
    std::string dom;
    std::string ran;
    Integer n;
    Integer m;
};

/// Countably many parallel edges sharing (dom, ran, n, m).
struct FamilySpec {
    std::string dom;
    std::string ran;
    Integer n;
    Integer m;
};

/// A single edge, or the representative of an infinite family.
struct Arrow {
    std::string label;  // edge id, or "family:<i>"
    VertexIndex dom = 0;
    VertexIndex ran = 0;
    Integer n;
    Integer m;
    bool family = false;
};

class WeightedGraph {
public:
    WeightedGraph() = default;

    std::size_t vertex_count() const { return vertices_.size(); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::string& vertex_id(VertexIndex v) const { return vertices_.at(v); }

    std::optional<VertexIndex> find_vertex(const std::string& id) const {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id);
        if (it == vertices_.end() || *it != id) return std::nullopt;
        return static_cast<VertexIndex>(it - vertices_.begin());
    }
    VertexIndex vertex(const std::string& id) const {
        auto v = find_vertex(id);
        if (!v) throw ValidationError("unknown vertex '" + id + "'");
        return *v;
    }

    /// Finite edges first (sorted by id), then one representative per family.
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const Arrow& arrow(std::size_t a) const { return arrows_.at(a); }
    std::size_t edge_count() const { return edge_count_; }
    std::size_t family_count() const { return arrows_.size() - edge_count_; }

    std::optional<std::size_t> find_edge(const std::string& id) const {
        for (std::size_t a = 0; a < edge_count_; ++a)
            if (arrows_[a].label == id) return a;
        return std::nullopt;
    }

    const std::vector<std::size_t>& in_arrows(VertexIndex v) const { return in_.at(v); }
    const std::vector<std::size_t>& out_arrows(VertexIndex v) const { return out_.at(v); }

    std::vector<EdgeSpec> edge_specs() const {
        std::vector<EdgeSpec> out;
        for (std::size_t a = 0; a < edge_count_; ++a) {
            const Arrow& e = arrows_[a];
            out.push_back({e.label, vertices_[e.dom], vertices_[e.ran], e.n, e.m});
        }
        return out;
    }
    std::vector<FamilySpec> family_specs() const {
        std::vector<FamilySpec> out;
        for (std::size_t a = edge_count_; a < arrows_.size(); ++a) {
            const Arrow& e = arrows_[a];
            out.push_back({vertices_[e.dom], vertices_[e.ran], e.n, e.m});
        }
        return out;
    }

    std::vector<std::string> ids(const VertexSet& set) const {
        std::vector<std::string> out;
        for (VertexIndex v : set) out.push_back(vertices_.at(v));
        return out;
    }

private:
    friend WeightedGraph build_graph(std::vector<std::string>, std::vector<EdgeSpec>, std::vector<FamilySpec>);

    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<std::vector<std::size_t>> out_;
};

/// Validates and normalizes: vertices and edges are sorted by id.
inline WeightedGraph build_graph(std::vector<std::string> vertices, std::vector<EdgeSpec> edges,
                                 std::vector<FamilySpec> families = {}) {
    if (vertices.empty()) throw ValidationError("graph needs at least one vertex");
    for (const auto& v : vertices)
        if (v.empty()) throw ValidationError("vertex ids must be nonempty");
    std::sort(vertices.begin(), vertices.end());
    if (auto dup = std::adjacent_find(vertices.begin(), vertices.end()); dup != vertices.end())
        throw ValidationError("duplicate vertex id '" + *dup + "'");
    std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });

    WeightedGraph g;
    g.vertices_ = std::move(vertices);
    auto endpoint = [&g](const std::string& id, const std::string& what) {
        auto v = g.find_vertex(id);
        if (!v) throw ValidationError(what + " references undeclared vertex '" + id + "'");
        return *v;
    };
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const EdgeSpec& e = edges[i];
        if (e.id.empty()) throw ValidationError("edge ids must be nonempty");
        if (i > 0 && edges[i - 1].id == e.id) throw ValidationError("duplicate edge id '" + e.id + "'");
        if (e.n < 1) throw ValidationError("edge '" + e.id + "' has n = " + e.n.str() + " < 1");
        g.arrows_.push_back({e.id, endpoint(e.dom, "edge '" + e.id + "'"), endpoint(e.ran, "edge '" + e.id + "'"),
                             e.n, e.m, false});
    }
    g.edge_count_ = g.arrows_.size();
    for (std::size_t i = 0; i < families.size(); ++i) {
        const FamilySpec& f = families[i];
        const std::string what = "family " + std::to_string(i);
        if (f.n < 1) throw ValidationError(what + " has n = " + f.n.str() + " < 1");
        g.arrows_.push_back({"family:" + std::to_string(i), endpoint(f.dom, what), endpoint(f.ran, what), f.n, f.m,
                             true});
    }
    g.in_.assign(g.vertices_.size(), {});
    g.out_.assign(g.vertices_.size(), {});
    for (std::size_t a = 0; a < g.arrows_.size(); ++a) {
        g.in_[g.arrows_[a].ran].push_back(a);
        g.out_[g.arrows_[a].dom].push_back(a);
    }
    return g;
}

/// Vertices receiving at least one and only finitely many edges.
inline VertexSet regular_vertices(const WeightedGraph& g) {
    VertexSet out;
    for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
        const auto& in = g.in_arrows(v);
        bool infinite = std::any_of(in.begin(), in.end(), [&](std::size_t a) { return g.arrow(a).family; });
        if (!in.empty() && !infinite) out.push_back(v);
    }
    return out;
}

/// Vertices whose incoming edges with m != 0 are finitely many and at least one.
inline VertexSet m_vertices(const WeightedGraph& g) {
    VertexSet out;
    for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
        std::size_t finite = 0;
        bool infinite = false;
        for (std::size_t a : g.in_arrows(v)) {
            const Arrow& e = g.arrow(a);
            if (e.m == 0) continue;
            if (e.family)
                infinite = true;
            else
                ++finite;
        }
        if (finite > 0 && !infinite) out.push_back(v);
    }
    return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline VertexSet all_vertices(const WeightedGraph& g) {
    VertexSet out(g.vertex_count());
    for (VertexIndex v = 0; v < out.size(); ++v) out[v] = v;
    return out;
}

inline bool contains(const VertexSet& s, VertexIndex v) { return std::binary_search(s.begin(), s.end(), v); }

// ---------------------------------------------------------------------------
// Paths

/// Arrow indices, range end first. Length zero is not a Path (use the vertex).
struct Path {
    std::vector<std::size_t> arrows;

    std::size_t length() const { return arrows.size(); }
    VertexIndex range(const WeightedGraph& g) const { return g.arrow(arrows.front()).ran; }
    VertexIndex domain(const WeightedGraph& g) const { return g.arrow(arrows.back()).dom; }

    std::vector<std::string> labels(const WeightedGraph& g) const {
        std::vector<std::string> out;
        for (std::size_t a : arrows) out.push_back(g.arrow(a).label);
        return out;
    }

    /// (this, tail): this path followed, on the domain side, by `tail`.
    Path then(const Path& tail) const {
        Path p = *this;
        p.arrows.insert(p.arrows.end(), tail.arrows.begin(), tail.arrows.end());
        return p;
    }

    friend bool operator==(const Path&, const Path&) = default;
    friend auto operator<=>(const Path&, const Path&) = default;
};

inline bool is_composable(const WeightedGraph& g, const std::vector<std::size_t>& arrows) {
    if (arrows.empty()) return false;
    for (std::size_t a : arrows)
        if (a >= g.arrows().size()) return false;
    for (std::size_t i = 0; i + 1 < arrows.size(); ++i)
        if (g.arrow(arrows[i]).dom != g.arrow(arrows[i + 1]).ran) return false;
    return true;
}

inline Path make_path(const WeightedGraph& g, std::vector<std::size_t> arrows) {
    if (!is_composable(g, arrows)) throw ValidationError("arrow sequence is not a composable path");
    return Path{std::move(arrows)};
}

inline Path make_path(const WeightedGraph& g, const std::vector<std::string>& labels) {
    std::vector<std::size_t> arrows;
    for (const auto& l : labels) {
        auto it = std::find_if(g.arrows().begin(), g.arrows().end(), [&](const Arrow& a) { return a.label == l; });
        if (it == g.arrows().end()) throw ValidationError("unknown edge '" + l + "'");
        arrows.push_back(static_cast<std::size_t>(it - g.arrows().begin()));
    }
    return make_path(g, std::move(arrows));
}

/// One step of the p recursion: p((e, nu)) from p(nu).
inline Integer p_step(const Integer& n, const Integer& m, const Integer& p_tail) {
    if (m == 0) return 1;
    Integer np = n * p_tail;
    return np / gcd(np, m);
}

/// p(mu): size of r_mu(d_mu^{-1}(z)). Evaluated from the domain end, with the
/// range-most edge outermost.
inline Integer p_value(const WeightedGraph& g, const Path& path) {
    Integer p = 1;
    for (auto it = path.arrows.rbegin(); it != path.arrows.rend(); ++it) p = p_step(g.arrow(*it).n, g.arrow(*it).m, p);
    return p;
}

/// e^{2 pi i theta} with theta = num/den in [0, 1), reduced.
struct CirclePoint {
    Integer num = 0;
    Integer den = 1;

    static CirclePoint make(Integer num, Integer den) {
        if (den == 0) throw ValidationError("circle point with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        num = floor_mod(num, den);
        Integer g = gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        return {std::move(num), std::move(den)};
    }

    friend bool operator==(const CirclePoint&, const CirclePoint&) = default;
    friend bool operator<(const CirclePoint& a, const CirclePoint& b) { return a.num * b.den < b.num * a.den; }

    std::string str() const { return num.str() + "/" + den.str(); }
};

/// The exact set r_mu(d_mu^{-1}(z0)): starting from the domain end, take all
/// n(e)-th roots and push forward by z -> z^{m(e)}.
inline std::vector<CirclePoint> fiber_image(const WeightedGraph& g, const Path& path, const CirclePoint& z0) {
    std::set<CirclePoint> current{z0};
    for (auto it = path.arrows.rbegin(); it != path.arrows.rend(); ++it) {
        const Arrow& e = g.arrow(*it);
        std::set<CirclePoint> next;
        for (const auto& z : current) {
            for (Integer j = 0; j < e.n; ++j) {
                // theta' = (theta + j) / n, then multiply by m.
                Integer num = (z.num + j * z.den) * e.m;
                Integer den = z.den * e.n;
                next.insert(CirclePoint::make(std::move(num), std::move(den)));
            }
        }
        current = std::move(next);
    }
    return {current.begin(), current.end()};
}

/// All paths mu with d*(mu) = from_dom, r*(mu) = to_ran and 1 <= length <= max_len.
/// Families contribute a single representative edge.
inline std::vector<Path> enumerate_paths(const WeightedGraph& g, VertexIndex from_dom, VertexIndex to_ran,
                                         std::size_t max_len) {
    if (max_len < 1) throw ValidationError("enumerate_paths: max_len must be >= 1");
    std::vector<Path> out;
    // Build from the domain end: the stack holds arrows domain-first.
    std::vector<std::size_t> stack;
    auto rec = [&](auto&& self, VertexIndex at) -> void {
        if (stack.size() == max_len) return;
        for (std::size_t a : g.out_arrows(at)) {
            stack.push_back(a);
            VertexIndex next = g.arrow(a).ran;
            if (next == to_ran) out.push_back(Path{{stack.rbegin(), stack.rend()}});
            self(self, next);
            stack.pop_back();
        }
    };
    rec(rec, from_dom);
    std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
        return a.length() != b.length() ? a.length() < b.length() : a.arrows < b.arrows;
    });
    return out;
}

/// Vertices reachable from any vertex of `sources` by paths of length >= 0,
/// using only arrows accepted by `use`.
template <class Pred>
VertexSet reachable_from(const WeightedGraph& g, const VertexSet& sources, Pred use) {
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<VertexIndex> queue;
    for (VertexIndex s : sources)
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        VertexIndex v = queue.front();
        queue.pop_front();
        for (std::size_t a : g.out_arrows(v)) {
            if (!use(g.arrow(a))) continue;
            VertexIndex w = g.arrow(a).ran;
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    VertexSet out;
    for (VertexIndex v = 0; v < seen.size(); ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

inline VertexSet reachable_from(const WeightedGraph& g, const VertexSet& sources) {
    return reachable_from(g, sources, [](const Arrow&) { return true; });
}

/// Vertices that reach `targets` using only arrows accepted by `use`.
template <class Pred>
VertexSet coreachable_to(const WeightedGraph& g, const VertexSet& targets, Pred use) {
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<VertexIndex> queue;
    for (VertexIndex t : targets)
        if (!seen[t]) {
            seen[t] = 1;
            queue.push_back(t);
        }
    while (!queue.empty()) {
        VertexIndex v = queue.front();
        queue.pop_front();
        for (std::size_t a : g.in_arrows(v)) {
            if (!use(g.arrow(a))) continue;
            VertexIndex w = g.arrow(a).dom;
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        }
    }
    VertexSet out;
    for (VertexIndex v = 0; v < seen.size(); ++v)
        if (seen[v]) out.push_back(v);
    return out;
}

/// True iff some path of length >= 0 runs from `from_dom` to `to_ran`.
inline bool reachable(const WeightedGraph& g, VertexIndex from_dom, VertexIndex to_ran) {
    return contains(reachable_from(g, {from_dom}), to_ran);
}

/// Shortest path from `from` to `to` (length >= 1) using arrows accepted by
/// `use` and staying inside `allowed` (empty = everywhere).
template <class Pred>
std::optional<Path> shortest_path(const WeightedGraph& g, VertexIndex from, VertexIndex to, Pred use,
                                  const std::vector<char>& allowed = {}) {
    const std::size_t n = g.vertex_count();
    auto ok = [&](VertexIndex v) { return allowed.empty() || allowed[v]; };
    std::vector<std::optional<std::size_t>> via(n);
    std::vector<char> seen(n, 0);
    std::deque<VertexIndex> queue{from};
    while (!queue.empty()) {
        VertexIndex v = queue.front();
        queue.pop_front();
        for (std::size_t a : g.out_arrows(v)) {
            const Arrow& e = g.arrow(a);
            if (!use(e) || !ok(e.ran)) continue;
            if (e.ran == to) {
                // Walk back to `from`; the path is range-first.
                Path p;
                p.arrows.push_back(a);
                VertexIndex at = v;
                while (at != from) {
                    p.arrows.push_back(*via[at]);
                    at = g.arrow(*via[at]).dom;
                }
                return p;
            }
            if (!seen[e.ran] && e.ran != from) {
                seen[e.ran] = 1;
                via[e.ran] = a;
                queue.push_back(e.ran);
            }
        }
    }
    return std::nullopt;
}

/// Shortest cycle (d* = r*) of length >= 1; families count as edges.
inline std::optional<Path> has_loop(const WeightedGraph& g) {
    std::optional<Path> best;
    for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
        auto c = shortest_path(g, v, v, [](const Arrow&) { return true; });
        if (c && (!best || c->length() < best->length())) best = c;
    }
    return best;
}

/// Some cycle whose vertices all lie in `allowed`, if any.
inline std::optional<Path> find_cycle_within(const WeightedGraph& g, const std::vector<char>& allowed) {
    std::optional<Path> best;
    for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
        if (!allowed[v]) continue;
        auto c = shortest_path(g, v, v, [](const Arrow&) { return true; }, allowed);
        if (c && (!best || c->length() < best->length())) best = c;
    }
    return best;
}

}  // namespace okgraph
