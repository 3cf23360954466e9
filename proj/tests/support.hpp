#pragma once

// Test-side helpers: random inputs and oracles that do not reuse library code paths.

#include "okgraph/okgraph.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>

namespace testing_support {

using namespace okgraph;

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    long long uniform(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(gen); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen); }
};

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long long lo, long long hi) {
    IntMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = rng.uniform(lo, hi);
    return a;
}

// Laplace expansion along the first row.
inline Integer laplace_det(const std::vector<std::vector<Integer>>& a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    if (n == 1) return a[0][0];
    Integer total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j] == 0) continue;
        std::vector<std::vector<Integer>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Integer> row;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(a[i][c]);
            minor.push_back(row);
        }
        Integer term = a[0][j] * laplace_det(minor);
        total += (j % 2 == 0) ? term : Integer(-term);
    }
    return total;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

/// Cokernel from determinantal divisors: d_k = gcd of the k x k minors,
/// invariant factors d_k / d_{k-1}.
inline AbelianGroup cokernel_by_minors(const IntMatrix& a) {
    const std::size_t r = a.rows(), c = a.cols();
    Integer prev = 1;
    std::size_t rank = 0;
    IntVector factors;
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        subsets(r, k, rs);
        subsets(c, k, cs);
        Integer g = 0;
        for (const auto& ri : rs)
            for (const auto& ci : cs) {
                std::vector<std::vector<Integer>> m(k, std::vector<Integer>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) m[i][j] = a(ri[i], ci[j]);
                g = gcd(g, laplace_det(m));
            }
        if (g == 0) break;
        rank = k;
        Integer f = g / prev;
        if (f != 1) factors.push_back(f);
        prev = g;
    }
    AbelianGroup out;
    out.free_rank = r - rank;
    out.torsion = factors;
    return out;
}

/// For square a with |det a| = k > 0, counts {x in Z^n / aZ^n : t x = 0} for
/// each divisor t of k by brute force over (Z/k)^n.
inline std::map<long long, long long> torsion_profile_brute(const IntMatrix& a, long long k) {
    const std::size_t n = a.rows();
    long long total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= k;
    auto encode = [&](const std::vector<long long>& v) {
        long long code = 0;
        for (long long x : v) code = code * k + x;
        return code;
    };
    auto decode = [&](long long code) {
        std::vector<long long> v(n);
        for (std::size_t i = n; i-- > 0;) {
            v[i] = code % k;
            code /= k;
        }
        return v;
    };
    std::vector<char> in_h(static_cast<std::size_t>(total), 0);
    std::vector<long long> queue{0};
    in_h[0] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        auto v = decode(queue[qi]);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<long long> w(n);
            for (std::size_t i = 0; i < n; ++i) w[i] = ((v[i] + a(i, j).convert_to<long long>()) % k + k) % k;
            long long code = encode(w);
            if (!in_h[static_cast<std::size_t>(code)]) {
                in_h[static_cast<std::size_t>(code)] = 1;
                queue.push_back(code);
            }
        }
    }
    const long long h = static_cast<long long>(queue.size());
    std::map<long long, long long> out;
    for (long long t = 1; t <= k; ++t) {
        if (k % t != 0) continue;
        long long count = 0;
        for (long long code = 0; code < total; ++code) {
            auto v = decode(code);
            for (auto& x : v) x = (x * t) % k;
            if (in_h[static_cast<std::size_t>(encode(v))]) ++count;
        }
        out[t] = count / h;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graphs

inline WeightedGraph random_graph(Rng& rng, std::size_t nv, std::size_t ne, long long n_max, long long m_abs,
                                  bool allow_loops = true) {
    std::vector<std::string> vs;
    for (std::size_t i = 0; i < nv; ++i) vs.push_back("x" + std::to_string(i));
    std::vector<EdgeSpec> es;
    for (std::size_t i = 0; i < ne; ++i) {
        std::size_t a = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(nv) - 1));
        std::size_t b = static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(nv) - 1));
        if (!allow_loops) {
            // Orient along index order so the result is acyclic.
            if (a == b) continue;
            if (a > b) std::swap(a, b);
        }
        es.push_back({"e" + std::to_string(i), vs[a], vs[b], rng.uniform(1, n_max), rng.uniform(-m_abs, m_abs)});
    }
    return build_graph(vs, es);
}

inline WeightedGraph random_dag(Rng& rng, std::size_t nv, std::size_t ne, long long n_max, long long m_abs) {
    return random_graph(rng, nv, ne, n_max, m_abs, false);
}

/// Every path (the empty ones included) of a loop-free graph, as
/// (domain vertex, product of n).
inline std::vector<std::pair<VertexIndex, Integer>> all_paths_with_weight(const WeightedGraph& g) {
    std::vector<std::pair<VertexIndex, Integer>> out;
    for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
        std::function<void(VertexIndex, Integer)> walk = [&](VertexIndex at, Integer w) {
            out.push_back({v, w});
            for (std::size_t a : g.out_arrows(at)) walk(g.arrow(a).ran, w * g.arrow(a).n);
        };
        walk(v, 1);
    }
    return out;
}

/// fiber image by scanning the grid (1/D)Z/Z, D = den(z0) * prod n.
inline std::set<std::pair<Integer, Integer>> fiber_by_grid(const WeightedGraph& g, const Path& p, const Integer& num,
                                                          const Integer& den) {
    Integer D = den;
    for (std::size_t a : p.arrows) D *= g.arrow(a).n;
    // Points as numerators over D.
    std::set<Integer> level{floor_mod(num * (D / den), D)};
    for (auto it = p.arrows.rbegin(); it != p.arrows.rend(); ++it) {
        const Arrow& e = g.arrow(*it);
        std::set<Integer> next;
        for (Integer w = 0; w < D; ++w) {
            if (!level.count(floor_mod(w * e.n, D))) continue;
            next.insert(floor_mod(w * e.m, D));
        }
        level = next;
    }
    std::set<std::pair<Integer, Integer>> out;
    for (const auto& x : level) {
        Integer gg = gcd(x, D);
        if (x == 0) gg = D;
        out.insert({x / gg, D / gg});
    }
    return out;
}

}  // namespace testing_support
