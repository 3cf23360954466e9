#include "support.hpp"

#include <gtest/gtest.h>

using namespace okgraph;
using namespace testing_support;

namespace {

long long q_order(Integer x, const Integer& q) {
    if (x == 0) return 1 << 30;
    if (x < 0) x = -x;
    long long k = 0;
    while (x % q == 0) {
        x /= q;
        ++k;
    }
    return k;
}

// Brute-force max of p over all nonempty paths from u to v of length <= len.
Integer max_p_brute(const WeightedGraph& g, VertexIndex u, VertexIndex v, std::size_t len) {
    Integer best = u == v ? Integer(1) : Integer(0);
    for (const Path& p : enumerate_paths(g, u, v, len)) best = std::max(best, p_value(g, p));
    return best;
}

WeightedGraph two_vertex() {
    return build_graph({"v1", "v2"}, {{"e11", "v1", "v1", 2, 1},
                                      {"e12", "v1", "v2", 6, 3},
                                      {"e21", "v2", "v1", 1, 1},
                                      {"e22", "v2", "v2", 5, 1}});
}

}  // namespace

TEST(PUnbounded, OneVertexExamples) {
    auto v = p_unbounded(one_vertex_graph(2, 3), "v", "v");
    ASSERT_EQ(v.status, BoundStatus::kUnbounded);
    EXPECT_EQ(v.unbounded->prime, 2);
    EXPECT_EQ(v.unbounded->surplus, 1);
    EXPECT_TRUE(check_certificate(one_vertex_graph(2, 3), v));

    auto b = p_unbounded(one_vertex_graph(2, 4), "v", "v");
    ASSERT_EQ(b.status, BoundStatus::kBounded);
    EXPECT_EQ(b.bounded->proof, BoundedProof::kOneVertex);
    EXPECT_EQ(*b.bounded->max_p, 1);
}

TEST(PUnbounded, ChainGivesExactMax) {
    auto g = build_graph({"a", "b", "c"}, {{"ab", "a", "b", 4, 1}, {"bc", "b", "c", 3, 2}, {"ac", "a", "c", 2, 1}});
    auto v = p_unbounded(g, "a", "c");
    ASSERT_EQ(v.status, BoundStatus::kBounded);
    EXPECT_EQ(v.bounded->proof, BoundedProof::kAcyclicRegion);
    EXPECT_EQ(*v.bounded->max_p, max_p_brute(g, 0, 2, 5));
    EXPECT_EQ(v.bounded->paths_examined, 2u);
    auto back = p_unbounded(g, "c", "a");
    EXPECT_EQ(back.status, BoundStatus::kBounded);
    EXPECT_EQ(back.bounded->proof, BoundedProof::kUnreachable);
}

TEST(PUnbounded, UnknownVertexRejected) {
    auto g = one_vertex_graph(2, 3);
    EXPECT_THROW(p_unbounded(g, 0, 5), ValidationError);
    EXPECT_THROW(p_unbounded(g, "v", "nope"), ValidationError);
}

TEST(PUnbounded, ZeroWindingBlocksTheExit) {
    // Growth on the loop at a is erased by the m = 0 edge into b.
    auto g = build_graph({"a", "b"}, {{"aa", "a", "a", 2, 1}, {"ab", "a", "b", 3, 0}});
    auto v = p_unbounded(g, "a", "b");
    ASSERT_EQ(v.status, BoundStatus::kBounded);
    EXPECT_EQ(*v.bounded->p_upper_bound, 1);
    EXPECT_EQ(max_p_brute(g, 0, 1, 8), 1);
}

TEST(PUnbounded, CertificateReplayGrows) {
    Rng rng(101);
    int seen = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto g = random_graph(rng, 3, 6, 6, 4);
        for (VertexIndex u = 0; u < 3; ++u)
            for (VertexIndex v = 0; v < 3; ++v) {
                auto verdict = p_unbounded(g, u, v);
                if (verdict.status != BoundStatus::kUnbounded) continue;
                ++seen;
                ASSERT_TRUE(check_certificate(g, verdict));
                const auto& c = *verdict.unbounded;
                // The exit can swallow up to sum v_q(|m|) before growth shows.
                std::size_t start = 1;
                if (c.exit)
                    for (std::size_t a : c.exit->arrows) start += static_cast<std::size_t>(q_order(g.arrow(a).m, c.prime));
                long long prev = -1;
                for (std::size_t k = start; k < start + 5; ++k) {
                    Path p = c.replay(k);
                    ASSERT_TRUE(is_composable(g, p.arrows));
                    ASSERT_EQ(p.range(g), v);
                    ASSERT_EQ(p.domain(g), u);
                    long long val = q_order(p_value(g, p), c.prime);
                    ASSERT_GT(val, prev);
                    prev = val;
                }
            }
    }
    EXPECT_GT(seen, 50);
}

TEST(PUnbounded, ReplayCanStallBehindAHeavyExit) {
    auto g = build_graph({"a", "b"}, {{"aa", "a", "a", 2, 1}, {"ab", "a", "b", 1, 8}});
    auto v = p_unbounded(g, "a", "b");
    ASSERT_EQ(v.status, BoundStatus::kUnbounded);
    EXPECT_EQ(p_value(g, v.unbounded->replay(1)), 1);
    EXPECT_EQ(p_value(g, v.unbounded->replay(3)), 1);
    EXPECT_EQ(p_value(g, v.unbounded->replay(4)), 2);
    EXPECT_EQ(p_value(g, v.unbounded->replay(5)), 4);
}

TEST(PUnbounded, BoundedVerdictsHoldOnEnumeratedPaths) {
    Rng rng(103);
    int acyclic = 0, valuation_bound = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto g = random_graph(rng, 3, 5, 4, 4);
        for (VertexIndex u = 0; u < 3; ++u)
            for (VertexIndex v = 0; v < 3; ++v) {
                auto verdict = p_unbounded(g, u, v);
                ASSERT_NE(verdict.status, BoundStatus::kUnknown);
                if (verdict.status != BoundStatus::kBounded) continue;
                const auto& b = *verdict.bounded;
                const Integer brute = max_p_brute(g, u, v, 6);
                if (b.proof == BoundedProof::kAcyclicRegion) {
                    ++acyclic;
                    ASSERT_EQ(*b.max_p, brute);
                } else if (b.proof == BoundedProof::kValuationBound) {
                    ++valuation_bound;
                    ASSERT_LE(brute, *b.p_upper_bound);
                } else if (b.proof == BoundedProof::kUnreachable) {
                    ASSERT_FALSE(reachable(g, u, v));
                }
            }
    }
    EXPECT_GT(acyclic, 20);
    EXPECT_GT(valuation_bound, 5);
}

TEST(PUnbounded, MonotoneAlongNonzeroWinding) {
    Rng rng(107);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_graph(rng, 4, 7, 4, 3);
        const std::size_t nv = g.vertex_count();
        auto nonzero = [](const Arrow& e) { return e.m != 0; };
        for (VertexIndex a = 0; a < nv; ++a)
            for (VertexIndex b = 0; b < nv; ++b) {
                if (p_unbounded(g, a, b).status != BoundStatus::kUnbounded) continue;
                for (VertexIndex c = 0; c < nv; ++c) {
                    if (c != b && !shortest_path(g, b, c, nonzero)) continue;
                    ASSERT_NE(p_unbounded(g, a, c).status, BoundStatus::kBounded);
                }
            }
    }
}

TEST(PUnbounded, NonExactModeCanBeUnknown) {
    auto g = build_graph({"v"}, {{"a", "v", "v", 2, 2}, {"b", "v", "v", 3, 3}});
    ClassifyOptions loose;
    loose.exact = false;
    EXPECT_EQ(p_unbounded(g, 0, 0, loose).status, BoundStatus::kUnknown);
    auto exact = p_unbounded(g, 0, 0);
    ASSERT_EQ(exact.status, BoundStatus::kBounded);
    EXPECT_EQ(*exact.bounded->p_upper_bound, 1);
    EXPECT_EQ(max_p_brute(g, 0, 0, 6), 1);
}

TEST(Minimality, Examples) {
    EXPECT_EQ(minimality(one_vertex_graph(2, 3)).status, MinimalityStatus::kMinimal);
    auto nm = minimality(one_vertex_graph(2, 4));
    EXPECT_EQ(nm.status, MinimalityStatus::kNotMinimal);
    ASSERT_TRUE(nm.witness.has_value());
    EXPECT_EQ(minimality(two_vertex()).status, MinimalityStatus::kMinimal);
}

TEST(Minimality, OneVertexGridIsExact) {
    for (int n = 1; n <= 6; ++n)
        for (int m = -6; m <= 6; ++m) {
            auto s = minimality(one_vertex_graph(n, m)).status;
            const bool multiple = m % n == 0;
            EXPECT_EQ(s, multiple ? MinimalityStatus::kNotMinimal : MinimalityStatus::kMinimal) << n << "," << m;
        }
}

TEST(Minimality, UnreachablePairDoesNotBreakMinimality) {
    // u is a sink fed from w, so (u, w) is unreachable, yet every orbit
    // condition holds.
    auto g = build_graph({"u", "w"}, {{"ww", "w", "w", 2, 1}, {"wu", "w", "u", 1, 1}});
    auto v = minimality(g);
    EXPECT_EQ(v.pair(2, 0, 1).status, BoundStatus::kBounded);
    EXPECT_EQ(v.status, MinimalityStatus::kMinimal);
}

TEST(Minimality, SourceVertexIsNotMinimal) {
    // A vertex with no incoming edges is singular and bounded towards the loop.
    auto g = build_graph({"s", "w"}, {{"ww", "w", "w", 2, 1}, {"sw", "s", "w", 1, 1}});
    auto v = minimality(g);
    ASSERT_EQ(v.status, MinimalityStatus::kNotMinimal);
    EXPECT_EQ(v.witness->kind, WitnessKind::kSingularOrbit);
}

TEST(Minimality, WitnessIsRecheckable) {
    Rng rng(109);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_graph(rng, 3, 5, 4, 3);
        auto v = minimality(g);
        ASSERT_NE(v.status, MinimalityStatus::kUnknown);
        if (v.status != MinimalityStatus::kNotMinimal) continue;
        const auto& w = *v.witness;
        ASSERT_EQ(w.bounded.status, BoundStatus::kBounded);
        auto again = p_unbounded(g, w.orbit, w.bounded.target);
        ASSERT_EQ(again.status, BoundStatus::kBounded);
        if (w.cycle) {
            ASSERT_TRUE(is_composable(g, w.cycle->arrows));
            ASSERT_EQ(w.cycle->range(g), w.cycle->domain(g));
        }
    }
}

TEST(Dichotomy, Examples) {
    auto a = dichotomy(one_vertex_graph(2, 3));
    EXPECT_EQ(a.label, AlgebraLabel::kSimplePurelyInfinite);
    EXPECT_TRUE(a.kirchberg);
    EXPECT_EQ(dichotomy(one_vertex_graph(2, 4)).label, AlgebraLabel::kNotSimple);
    EXPECT_EQ(dichotomy(two_vertex()).label, AlgebraLabel::kSimplePurelyInfinite);
    // A lone vertex gives C(T): the vertex is singular.
    EXPECT_EQ(dichotomy(build_graph({"v"}, {})).label, AlgebraLabel::kNotSimple);
    // A chain ending in a sink: every orbit reaches the sink.
    auto chain = build_graph({"a", "b"}, {{"ab", "a", "b", 2, 1}});
    EXPECT_NE(dichotomy(chain).label, AlgebraLabel::kSimplePurelyInfinite);
}

TEST(Dichotomy, UnknownPropagates) {
    MinimalityVerdict unknown;
    unknown.status = MinimalityStatus::kUnknown;
    auto v = dichotomy_from(unknown, has_loop(one_vertex_graph(2, 3)));
    EXPECT_EQ(v.label, AlgebraLabel::kUnknown);
    EXPECT_FALSE(v.kirchberg);
}

TEST(Dichotomy, LabelsFollowLoops) {
    Rng rng(113);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_graph(rng, 3, 5, 4, 3);
        auto v = dichotomy(g);
        const bool loop = has_loop(g).has_value();
        if (loop) {
            ASSERT_NE(v.label, AlgebraLabel::kSimpleAT);
        } else {
            ASSERT_NE(v.label, AlgebraLabel::kSimplePurelyInfinite);
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        auto d = random_dag(rng, 5, 8, 4, 3);
        ASSERT_NE(dichotomy(d).label, AlgebraLabel::kSimplePurelyInfinite);
    }
}
