#pragma once

// Minimality, loops and the simple purely infinite / AT dichotomy.
//
// For a prime q, v_q(p) evolves along a path (domain end first) as
//   x -> max(0, x + v_q(n) - v_q(|m|))   on m != 0 edges,
//   x -> 0                               on m == 0 edges.
// So sup p over paths from S to v is infinite iff, for some q, a cycle with
// positive surplus sum(v_q(n) - v_q(|m|)) sits in the m != 0 part of the region
// reachable from S and reaching v through m != 0 edges. Otherwise each
// v_q(p) is bounded by the heaviest m != 0 walk ending at v.

#include "okgraph/graph.hpp"

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace okgraph {

struct ClassifyOptions {
    std::size_t search_bound = 12;
    /// Use the valuation bound for cyclic regions. Off, those pairs stay Unknown.
    bool exact = true;

    /// Defaults, with the search bound overridable through OKGRAPH_SEARCH_BOUND.
    static ClassifyOptions from_env() {
        ClassifyOptions o;
        if (const char* s = std::getenv("OKGRAPH_SEARCH_BOUND")) {
            try {
                long v = std::stol(s);
                if (v >= 1) o.search_bound = static_cast<std::size_t>(v);
            } catch (const std::exception&) {
            }
        }
        return o;
    }
};

enum class BoundStatus { kUnbounded, kBounded, kUnknown };

inline std::string to_string(BoundStatus s) {
    switch (s) {
        case BoundStatus::kUnbounded: return "Unbounded";
        case BoundStatus::kBounded: return "Bounded";
        default: return "Unknown";
    }
}

enum class BoundedProof { kUnreachable, kOneVertex, kAcyclicRegion, kValuationBound };

inline std::string to_string(BoundedProof p) {
    switch (p) {
        case BoundedProof::kUnreachable: return "unreachable";
        case BoundedProof::kOneVertex: return "one-vertex";
        case BoundedProof::kAcyclicRegion: return "acyclic-region";
        default: return "valuation-bound";
    }
}

struct UnboundedCertificate {
    Path cycle;                 // closed, every m != 0, range = domain = base
    VertexIndex base = 0;
    VertexIndex source = 0;     // member of the source set
    std::optional<Path> access; // source -> base, absent when base == source
    std::optional<Path> exit;   // base -> target with m != 0, absent when base == target
    Integer prime;
    Integer surplus;            // sum over the cycle of v_q(n) - v_q(|m|)

    /// cycle^k followed by access on the domain side, preceded by exit on the range side.
    Path replay(std::size_t k) const {
        Path p;
        if (exit) p = *exit;
        for (std::size_t i = 0; i < k; ++i) p.arrows.insert(p.arrows.end(), cycle.arrows.begin(), cycle.arrows.end());
        if (access) p.arrows.insert(p.arrows.end(), access->arrows.begin(), access->arrows.end());
        return p;
    }
};

struct PrimeBound {
    Integer prime;
    Integer max_valuation;
};

struct BoundedCertificate {
    BoundedProof proof = BoundedProof::kUnreachable;
    std::optional<Integer> max_p;           // exact maximum when the path set is finite and nonempty
    std::vector<PrimeBound> prime_bounds;   // valuation-bound proof only
    std::optional<Integer> p_upper_bound;   // product of q^bound
    std::size_t paths_examined = 0;
};

struct PUnboundedVerdict {
    BoundStatus status = BoundStatus::kUnknown;
    VertexSet sources;
    VertexIndex target = 0;
    std::optional<UnboundedCertificate> unbounded;
    std::optional<BoundedCertificate> bounded;
    std::size_t search_bound = 0;
};

namespace detail {

inline Integer surplus_weight(const Arrow& e, const Integer& q) {
    return Integer(static_cast<long long>(valuation(e.n, q))) - Integer(static_cast<long long>(valuation(e.m, q)));
}

/// Shortest closed walk with positive q-surplus through the arrows allowed in
/// `arrow_ok`, as a range-first path, or nothing.
inline std::optional<Path> positive_cycle(const WeightedGraph& g, const std::vector<char>& arrow_ok,
                                          const VertexSet& region, const Integer& q) {
    const std::size_t n = g.vertex_count();
    const std::size_t len = region.size();
    std::vector<Integer> weight(g.arrows().size());
    for (std::size_t a = 0; a < g.arrows().size(); ++a)
        if (arrow_ok[a]) weight[a] = surplus_weight(g.arrow(a), q);

    std::optional<Path> best;
    for (VertexIndex c : region) {
        // best[k][v]: heaviest walk of length k from c to v; par[k][v]: its last arrow.
        std::vector<std::vector<std::optional<Integer>>> dist(len + 1, std::vector<std::optional<Integer>>(n));
        std::vector<std::vector<std::size_t>> par(len + 1, std::vector<std::size_t>(n, 0));
        dist[0][c] = Integer(0);
        for (std::size_t k = 1; k <= len; ++k) {
            if (best && k >= best->length()) break;
            for (std::size_t a = 0; a < g.arrows().size(); ++a) {
                if (!arrow_ok[a]) continue;
                const Arrow& e = g.arrow(a);
                if (!dist[k - 1][e.dom]) continue;
                Integer cand = *dist[k - 1][e.dom] + weight[a];
                if (!dist[k][e.ran] || cand > *dist[k][e.ran]) {
                    dist[k][e.ran] = cand;
                    par[k][e.ran] = a;
                }
            }
            if (dist[k][c] && *dist[k][c] > 0) {
                Path p;
                VertexIndex at = c;
                for (std::size_t i = k; i >= 1; --i) {
                    std::size_t a = par[i][at];
                    p.arrows.push_back(a);
                    at = g.arrow(a).dom;
                }
                best = p;
                break;
            }
        }
    }
    return best;
}

/// Heaviest walk (possibly empty) ending at `target`; requires no positive cycle.
inline Integer heaviest_walk_to(const WeightedGraph& g, const std::vector<char>& arrow_ok, const VertexSet& region,
                                VertexIndex target, const Integer& q) {
    std::vector<Integer> dist(g.vertex_count(), Integer(0));
    for (std::size_t round = 0; round <= region.size(); ++round) {
        bool changed = false;
        for (std::size_t a = 0; a < g.arrows().size(); ++a) {
            if (!arrow_ok[a]) continue;
            const Arrow& e = g.arrow(a);
            Integer cand = dist[e.dom] + surplus_weight(e, q);
            if (cand > dist[e.ran]) {
                dist[e.ran] = cand;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return dist[target];
}

inline Integer power(const Integer& b, const Integer& e) {
    Integer r = 1;
    for (Integer i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace detail

inline PUnboundedVerdict p_unbounded(const WeightedGraph& g, const VertexSet& sources_in, VertexIndex target,
                                     const ClassifyOptions& options = {}) {
    if (target >= g.vertex_count()) throw ValidationError("p_unbounded: unknown target vertex");
    VertexSet sources = sources_in;
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    for (VertexIndex s : sources)
        if (s >= g.vertex_count()) throw ValidationError("p_unbounded: unknown source vertex");

    PUnboundedVerdict out;
    out.sources = sources;
    out.target = target;
    out.search_bound = options.search_bound;

    const VertexSet reach = reachable_from(g, sources);
    if (!contains(reach, target)) {
        out.status = BoundStatus::kBounded;
        out.bounded = BoundedCertificate{BoundedProof::kUnreachable, std::nullopt, {}, std::nullopt, 0};
        return out;
    }

    // m != 0 part of the region that can still feed `target`.
    auto nonzero = [](const Arrow& e) { return e.m != 0; };
    const VertexSet region = set_intersection(reach, coreachable_to(g, {target}, nonzero));
    std::vector<char> in_region(g.vertex_count(), 0);
    for (VertexIndex v : region) in_region[v] = 1;
    std::vector<char> arrow_ok(g.arrows().size(), 0);
    std::vector<Integer> primes;
    for (std::size_t a = 0; a < g.arrows().size(); ++a) {
        const Arrow& e = g.arrow(a);
        if (e.m == 0 || !in_region[e.dom] || !in_region[e.ran]) continue;
        arrow_ok[a] = 1;
        for (auto& q : prime_divisors(e.n)) primes.push_back(q);
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());

    for (const Integer& q : primes) {
        auto cycle = detail::positive_cycle(g, arrow_ok, region, q);
        if (!cycle) continue;
        UnboundedCertificate cert;
        cert.cycle = *cycle;
        cert.base = cycle->range(g);
        cert.prime = q;
        cert.surplus = 0;
        for (std::size_t a : cycle->arrows) cert.surplus += detail::surplus_weight(g.arrow(a), q);
        if (contains(sources, cert.base)) {
            cert.source = cert.base;
        } else {
            auto all = [](const Arrow&) { return true; };
            for (VertexIndex s : sources) {
                auto p = shortest_path(g, s, cert.base, all);
                if (p && (!cert.access || p->length() < cert.access->length())) {
                    cert.access = p;
                    cert.source = s;
                }
            }
        }
        if (cert.base != target) cert.exit = shortest_path(g, cert.base, target, nonzero);
        out.status = BoundStatus::kUnbounded;
        out.unbounded = std::move(cert);
        return out;
    }

    // One vertex, one loop: p stays 1 exactly when m is a multiple of n.
    if (g.vertex_count() == 1 && g.arrows().size() == 1) {
        const Arrow& e = g.arrow(0);
        if (e.m % e.n == 0) {
            out.status = BoundStatus::kBounded;
            out.bounded = BoundedCertificate{BoundedProof::kOneVertex, Integer(1), {}, Integer(1), 0};
            return out;
        }
    }

    // Acyclic region: the path set is finite; take the maximum outright.
    const VertexSet full_region = set_intersection(reach, coreachable_to(g, {target}, [](const Arrow&) { return true; }));
    std::vector<char> in_full(g.vertex_count(), 0);
    for (VertexIndex v : full_region) in_full[v] = 1;
    if (!find_cycle_within(g, in_full) && full_region.size() <= options.search_bound + 1) {
        BoundedCertificate cert{BoundedProof::kAcyclicRegion, std::nullopt, {}, std::nullopt, 0};
        Integer best = contains(sources, target) ? Integer(1) : Integer(0);
        for (VertexIndex s : sources) {
            if (!in_full[s]) continue;
            for (const Path& p : enumerate_paths(g, s, target, options.search_bound)) {
                ++cert.paths_examined;
                Integer pv = p_value(g, p);
                if (pv > best) best = pv;
            }
        }
        cert.max_p = best;
        cert.p_upper_bound = best;
        out.status = BoundStatus::kBounded;
        out.bounded = std::move(cert);
        return out;
    }

    if (options.exact) {
        BoundedCertificate cert{BoundedProof::kValuationBound, std::nullopt, {}, Integer(1), 0};
        for (const Integer& q : primes) {
            Integer b = detail::heaviest_walk_to(g, arrow_ok, region, target, q);
            if (b < 0) b = 0;
            cert.prime_bounds.push_back({q, b});
            *cert.p_upper_bound *= detail::power(q, b);
        }
        out.status = BoundStatus::kBounded;
        out.bounded = std::move(cert);
        return out;
    }

    out.status = BoundStatus::kUnknown;
    return out;
}

inline PUnboundedVerdict p_unbounded(const WeightedGraph& g, VertexIndex from, VertexIndex to,
                                     const ClassifyOptions& options = {}) {
    if (from >= g.vertex_count()) throw ValidationError("p_unbounded: unknown source vertex");
    return p_unbounded(g, VertexSet{from}, to, options);
}

inline PUnboundedVerdict p_unbounded(const WeightedGraph& g, const std::string& from, const std::string& to,
                                     const ClassifyOptions& options = {}) {
    return p_unbounded(g, g.vertex(from), g.vertex(to), options);
}

/// Replays an Unbounded certificate: the path is composable, ends where it
/// should, the cycle and exit avoid m = 0 and the surplus is as cited.
inline bool check_certificate(const WeightedGraph& g, const PUnboundedVerdict& v) {
    if (v.status != BoundStatus::kUnbounded || !v.unbounded) return false;
    const UnboundedCertificate& c = v.unbounded.value();
    if (c.cycle.arrows.empty() || !is_composable(g, c.cycle.arrows)) return false;
    if (c.cycle.range(g) != c.base || c.cycle.domain(g) != c.base) return false;
    Integer s = 0;
    for (std::size_t a : c.cycle.arrows) {
        if (g.arrow(a).m == 0) return false;
        s += detail::surplus_weight(g.arrow(a), c.prime);
    }
    if (s != c.surplus || s <= 0) return false;
    if (c.exit)
        for (std::size_t a : c.exit->arrows)
            if (g.arrow(a).m == 0) return false;
    if (!contains(v.sources, c.source)) return false;
    Path full = c.replay(1);
    if (!is_composable(g, full.arrows)) return false;
    return full.range(g) == v.target && full.domain(g) == c.source;
}

// ---------------------------------------------------------------------------
// Minimality

enum class MinimalityStatus { kMinimal, kNotMinimal, kUnknown };

inline std::string to_string(MinimalityStatus s) {
    switch (s) {
        case MinimalityStatus::kMinimal: return "Minimal";
        case MinimalityStatus::kNotMinimal: return "NotMinimal";
        default: return "Unknown";
    }
}

enum class WitnessKind {
    kSingularOrbit,  // v0 singular: the empty path is a finite negative orbit
    kCycleOrbit,     // v0 on a cycle: the cycle repeated is an infinite negative orbit
    kConditionTwo,   // v0 in E0_rg \ E0_m with sup p from v0 to v finite
};

inline std::string to_string(WitnessKind k) {
    switch (k) {
        case WitnessKind::kSingularOrbit: return "singular-orbit";
        case WitnessKind::kCycleOrbit: return "cycle-orbit";
        default: return "condition-ii";
    }
}

struct MinimalityWitness {
    WitnessKind kind = WitnessKind::kSingularOrbit;
    VertexIndex v0 = 0;
    std::optional<Path> cycle;
    VertexSet orbit;            // vertices the orbit passes through
    PUnboundedVerdict bounded;  // Bounded from `orbit` to the target
};

struct MinimalityVerdict {
    MinimalityStatus status = MinimalityStatus::kUnknown;
    /// pairs[u * |E0| + v]: sup p from u to v.
    std::vector<PUnboundedVerdict> pairs;
    std::optional<MinimalityWitness> witness;
    std::string note;

    const PUnboundedVerdict& pair(std::size_t vertex_count, VertexIndex u, VertexIndex v) const {
        return pairs.at(u * vertex_count + v);
    }
};

/// E x_{n,m} T is minimal iff, for every target v, every negative orbit meets
/// Good(v) = {u : sup p from u to v is infinite} and E0_rg \ E0_m lies in Good(v).
/// Every negative orbit meets Good(v) iff the rest of the vertices carries no
/// singular vertex and no cycle.
inline MinimalityVerdict minimality(const WeightedGraph& g, const ClassifyOptions& options = {}) {
    const std::size_t nv = g.vertex_count();
    MinimalityVerdict out;
    out.pairs.reserve(nv * nv);
    for (VertexIndex u = 0; u < nv; ++u)
        for (VertexIndex v = 0; v < nv; ++v) out.pairs.push_back(p_unbounded(g, u, v, options));

    const VertexSet regular = regular_vertices(g);
    const VertexSet cond_two = set_difference(regular, m_vertices(g));
    bool undecided = false;

    for (VertexIndex v = 0; v < nv; ++v) {
        std::vector<char> bad(nv, 0);
        for (VertexIndex u = 0; u < nv; ++u)
            if (out.pair(nv, u, v).status != BoundStatus::kUnbounded) bad[u] = 1;

        for (VertexIndex s = 0; s < nv; ++s) {
            if (!bad[s] || contains(regular, s)) continue;
            const auto& pv = out.pair(nv, s, v);
            if (pv.status == BoundStatus::kBounded) {
                out.status = MinimalityStatus::kNotMinimal;
                out.witness = MinimalityWitness{WitnessKind::kSingularOrbit, s, std::nullopt, {s}, pv};
                return out;
            }
            undecided = true;
        }
        if (auto c = find_cycle_within(g, bad)) {
            VertexSet orbit;
            for (std::size_t a : c->arrows) orbit.push_back(g.arrow(a).ran);
            std::sort(orbit.begin(), orbit.end());
            orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
            auto pv = p_unbounded(g, orbit, v, options);
            if (pv.status == BoundStatus::kBounded) {
                out.status = MinimalityStatus::kNotMinimal;
                out.witness = MinimalityWitness{WitnessKind::kCycleOrbit, c->range(g), c, orbit, pv};
                return out;
            }
            undecided = true;
        }
        for (VertexIndex w : cond_two) {
            if (!bad[w]) continue;
            const auto& pv = out.pair(nv, w, v);
            if (pv.status == BoundStatus::kBounded) {
                out.status = MinimalityStatus::kNotMinimal;
                out.witness = MinimalityWitness{WitnessKind::kConditionTwo, w, std::nullopt, {w}, pv};
                return out;
            }
            undecided = true;
        }
    }
    if (undecided) {
        out.status = MinimalityStatus::kUnknown;
        out.note = "some pairs undecided within search bound " + std::to_string(options.search_bound);
    } else {
        out.status = MinimalityStatus::kMinimal;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dichotomy

enum class AlgebraLabel { kSimplePurelyInfinite, kSimpleAT, kNotSimple, kUnknown };

inline std::string to_string(AlgebraLabel l) {
    switch (l) {
        case AlgebraLabel::kSimplePurelyInfinite: return "SimplePurelyInfinite";
        case AlgebraLabel::kSimpleAT: return "SimpleAT";
        case AlgebraLabel::kNotSimple: return "NotSimple";
        default: return "Unknown";
    }
}

struct AlgebraVerdict {
    AlgebraLabel label = AlgebraLabel::kUnknown;
    bool kirchberg = false;
    std::vector<std::string> justification;
    MinimalityVerdict minimality;
    std::optional<Path> loop;
};

inline AlgebraVerdict dichotomy_from(MinimalityVerdict min, std::optional<Path> loop) {
    AlgebraVerdict out;
    out.loop = std::move(loop);
    switch (min.status) {
        case MinimalityStatus::kMinimal:
            out.justification.push_back("minimal");
            if (out.loop) {
                out.label = AlgebraLabel::kSimplePurelyInfinite;
                out.kirchberg = true;
                out.justification.push_back("has loop");
                out.justification.push_back("countable vertex and edge sets: Kirchberg");
            } else {
                out.label = AlgebraLabel::kSimpleAT;
                out.justification.push_back("no loop");
            }
            break;
        case MinimalityStatus::kNotMinimal:
            out.label = AlgebraLabel::kNotSimple;
            out.justification.push_back("not minimal: witness " + to_string(min.witness->kind));
            break;
        default:
            out.label = AlgebraLabel::kUnknown;
            out.justification.push_back("minimality unknown");
            break;
    }
    out.minimality = std::move(min);
    return out;
}

inline AlgebraVerdict dichotomy(const WeightedGraph& g, const ClassifyOptions& options = {}) {
    return dichotomy_from(minimality(g, options), has_loop(g));
}

}  // namespace okgraph
