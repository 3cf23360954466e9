#include "support.hpp"

#include <gtest/gtest.h>

using namespace okgraph;
using namespace testing_support;

namespace {

bool is_diagonal_chain(const IntMatrix& d) {
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (i != j && d(i, j) != 0) return false;
    const std::size_t k = std::min(d.rows(), d.cols());
    for (std::size_t i = 0; i < k; ++i) {
        if (d(i, i) < 0) return false;
        if (i + 1 < k) {
            if (d(i, i) == 0 && d(i + 1, i + 1) != 0) return false;
            if (d(i, i) != 0 && d(i + 1, i + 1) % d(i, i) != 0) return false;
        }
    }
    return true;
}

}  // namespace

TEST(Snf, IdentityStaysIdentity) {
    auto s = smith_normal_form(IntMatrix::identity(2));
    EXPECT_EQ(s.d, IntMatrix::identity(2));
    EXPECT_EQ(s.u * IntMatrix::identity(2) * s.v, s.d);
}

TEST(Snf, NegativeOneByOneIsNormalized) {
    auto s = smith_normal_form(IntMatrix{{-3}});
    EXPECT_EQ(s.d, (IntMatrix{{3}}));
    EXPECT_EQ(s.u * IntMatrix{{-3}} * s.v, s.d);
}

TEST(Snf, ZeroDimensionalMatrices) {
    IntMatrix a(3, 0);
    auto s = smith_normal_form(a);
    EXPECT_EQ(s.u.rows(), 3u);
    EXPECT_EQ(s.v.rows(), 0u);
    EXPECT_EQ(cokernel_group(a), (AbelianGroup{3, {}}));
    EXPECT_EQ(kernel_basis(a).cols(), 0u);
    EXPECT_EQ(cokernel_group(IntMatrix(0, 2)), (AbelianGroup{0, {}}));
    EXPECT_EQ(kernel_group(IntMatrix(0, 2)).free_rank, 2u);
}

TEST(Snf, RandomThreeByThreeWitnesses) {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        IntMatrix a = random_matrix(rng, 3, 3, -9, 9);
        auto s = smith_normal_form(a);
        ASSERT_EQ(s.u * a * s.v, s.d) << a.str();
        ASSERT_EQ(abs_value(determinant(s.u)), 1);
        ASSERT_EQ(abs_value(determinant(s.v)), 1);
        ASSERT_TRUE(is_diagonal_chain(s.d)) << s.d.str();
    }
}

TEST(Snf, RectangularAndEliminationOrderIndependent) {
    Rng rng(11);
    const SnfOptions orders[] = {{PivotRule::kMinAbs, SweepOrder::kColumnFirst},
                                 {PivotRule::kFirstNonzero, SweepOrder::kRowFirst},
                                 {PivotRule::kFirstNonzero, SweepOrder::kColumnFirst},
                                 {PivotRule::kMinAbs, SweepOrder::kRowFirst}};
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t r = static_cast<std::size_t>(rng.uniform(1, 5)), c = static_cast<std::size_t>(rng.uniform(1, 5));
        IntMatrix a = random_matrix(rng, r, c, -6, 6);
        std::vector<IntVector> diags;
        for (const auto& o : orders) {
            auto s = smith_normal_form(a, o);
            ASSERT_EQ(s.u * a * s.v, s.d);
            ASSERT_TRUE(is_diagonal_chain(s.d));
            diags.push_back(s.diagonal());
        }
        for (const auto& d : diags) {
            ASSERT_EQ(d, diags.front());
        }
    }
}

TEST(Snf, AgreesWithDeterminantalDivisors) {
    Rng rng(13);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t r = static_cast<std::size_t>(rng.uniform(1, 4)), c = static_cast<std::size_t>(rng.uniform(1, 4));
        IntMatrix a = random_matrix(rng, r, c, -5, 5);
        if (rng.coin(0.3) && r > 1) a.set_block(r - 1, 0, IntMatrix(1, c));  // force rank drops sometimes
        ASSERT_EQ(cokernel_group(a), cokernel_by_minors(a)) << a.str();
    }
}

TEST(Snf, LargeEntriesStayExact) {
    IntMatrix a{{1, 0}, {0, 1}};
    a(0, 0) = Integer(1) << 80;
    a(1, 1) = (Integer(1) << 81) * 3;
    auto g = cokernel_group(a);
    ASSERT_EQ(g.torsion.size(), 2u);
    EXPECT_EQ(g.torsion[0], Integer(1) << 80);
    EXPECT_EQ(g.torsion[1], (Integer(1) << 81) * 3);
}

TEST(Cokernel, Examples) {
    EXPECT_EQ(cokernel_group(IntMatrix{{-3}}).str(), "Z/3");
    EXPECT_EQ(cokernel_group(IntMatrix{{0}}).str(), "Z");
    EXPECT_EQ(cokernel_group(IntMatrix{{-1, -6}, {-1, -4}}).str(), "Z/2");
    EXPECT_EQ(cokernel_group(IntMatrix{{2, 0}, {0, 3}}).str(), "Z/6");
    EXPECT_EQ(cokernel_group(IntMatrix{{2, 0, 0}, {0, 4, 0}}).str(), "Z/2 + Z/4");
}

TEST(Cokernel, OrderMatchesDeterminant) {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        IntMatrix a = random_matrix(rng, 3, 3, -7, 7);
        Integer det = determinant(a);
        if (det == 0) continue;
        auto g = cokernel_group(a);
        EXPECT_EQ(g.free_rank, 0u);
        EXPECT_EQ(g.torsion_order(), abs_value(det));
    }
}

TEST(Cokernel, TorsionProfileMatchesBruteForce) {
    Rng rng(19);
    int checked = 0;
    while (checked < 40) {
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        IntMatrix a = random_matrix(rng, n, n, -4, 4);
        Integer det = abs_value(determinant(a));
        if (det == 0 || det > 12) continue;
        ++checked;
        long long k = det.convert_to<long long>();
        auto brute = torsion_profile_brute(a, k);
        auto g = cokernel_group(a);
        for (const auto& [t, count] : brute) {
            Integer expected = 1;
            for (const auto& d : g.torsion) expected *= gcd(Integer(t), d);
            ASSERT_EQ(expected, count) << a.str() << " t=" << t;
        }
    }
}

TEST(Kernel, Examples) {
    EXPECT_EQ(kernel_basis(IntMatrix{{0}}), (IntMatrix{{1}}));
    EXPECT_EQ(kernel_basis(IntMatrix{{1, 0}}), (IntMatrix{{0}, {1}}));
    EXPECT_EQ(kernel_basis(IntMatrix{{0, -3}, {-1, 0}}).cols(), 0u);
}

TEST(Kernel, BasisIsSaturatedAndAnnihilated) {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t r = static_cast<std::size_t>(rng.uniform(1, 4)), c = static_cast<std::size_t>(rng.uniform(1, 5));
        IntMatrix a = random_matrix(rng, r, c, -4, 4);
        IntMatrix k = kernel_basis(a);
        ASSERT_EQ(k.cols(), c - smith_normal_form(a).rank());
        ASSERT_EQ(a * k, IntMatrix(r, k.cols()));
        // A basis of a saturated lattice has a free cokernel.
        ASSERT_TRUE(cokernel_group(k).torsion.empty());
    }
}

TEST(CosetClass, Examples) {
    auto c = coset_class(IntMatrix{{-3}}, {1});
    EXPECT_EQ(c.torsion_coords, (IntVector{1}));
    EXPECT_TRUE(coset_class(IntMatrix{{-1, -6}, {-1, -4}}, {1, 1}).is_zero());
    EXPECT_TRUE(coset_class(IntMatrix{{2, 1}, {0, 5}}, {0, 0}).is_zero());
    EXPECT_THROW(coset_class(IntMatrix{{1}}, {1, 2}), ValidationError);
}

TEST(SolveInImage, Examples) {
    EXPECT_EQ(solve_in_image(IntMatrix::identity(3), {4, -2, 7}), (IntVector{4, -2, 7}));
    EXPECT_EQ(solve_in_image(IntMatrix{{-1, -6}, {-1, -4}}, {1, 1}), (IntVector{-1, 0}));
    EXPECT_FALSE(solve_in_image(IntMatrix{{2}}, {1}).has_value());
}

TEST(SolveInImage, AgreesWithCosetClass) {
    Rng rng(29);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t r = static_cast<std::size_t>(rng.uniform(1, 4)), c = static_cast<std::size_t>(rng.uniform(1, 4));
        IntMatrix a = random_matrix(rng, r, c, -4, 4);
        IntVector x(r);
        for (auto& v : x) v = rng.uniform(-6, 6);
        if (rng.coin()) {
            IntVector y(c);
            for (auto& v : y) v = rng.uniform(-3, 3);
            x = a * y;
        }
        auto sol = solve_in_image(a, x);
        ASSERT_EQ(sol.has_value(), coset_class(a, x).is_zero());
        if (sol) {
            ASSERT_EQ(a * *sol, x);
        }
    }
}

TEST(CosetClass, IsAHomomorphism) {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        IntMatrix a = random_matrix(rng, 3, 2, -5, 5);
        CokernelMap map = cokernel_map(a);
        IntVector x(3), y(3), s(3);
        for (std::size_t i = 0; i < 3; ++i) {
            x[i] = rng.uniform(-9, 9);
            y[i] = rng.uniform(-9, 9);
            s[i] = x[i] + y[i];
        }
        GroupElement gx = map.apply(x), gy = map.apply(y), gs = map.apply(s);
        for (std::size_t i = 0; i < gs.free_coords.size(); ++i) {
            ASSERT_EQ(gs.free_coords[i], gx.free_coords[i] + gy.free_coords[i]);
        }
        for (std::size_t i = 0; i < gs.torsion_coords.size(); ++i) {
            ASSERT_EQ(gs.torsion_coords[i], floor_mod(gx.torsion_coords[i] + gy.torsion_coords[i], map.group.torsion[i]));
        }
    }
}

TEST(AbelianGroup, TextForm) {
    EXPECT_EQ((AbelianGroup{0, {}}).str(), "0");
    EXPECT_EQ((AbelianGroup{1, {}}).str(), "Z");
    EXPECT_EQ((AbelianGroup{2, {2, 6}}).str(), "Z^2 + Z/2 + Z/6");
}

TEST(AbelianGroup, FromFactorsCanonicalizes) {
    EXPECT_EQ(AbelianGroup::from_factors(0, {4, 2}), (AbelianGroup{0, {2, 4}}));
    EXPECT_EQ(AbelianGroup::from_factors(0, {2, 3}), (AbelianGroup{0, {6}}));
    EXPECT_EQ(AbelianGroup::from_factors(1, {1, 0}), (AbelianGroup{2, {}}));
}

TEST(AbelianGroup, Parse) {
    EXPECT_EQ(parse_group("Z^2+Z/4+Z/2"), (AbelianGroup{2, {2, 4}}));
    EXPECT_EQ(parse_group(" Z/3 + Z "), (AbelianGroup{1, {3}}));
    EXPECT_EQ(parse_group("0"), (AbelianGroup{0, {}}));
    EXPECT_EQ(parse_group("Z/1"), (AbelianGroup{0, {}}));
    EXPECT_THROW(parse_group("Q"), ValidationError);
    EXPECT_THROW(parse_group("Z/0"), ValidationError);
    EXPECT_THROW(parse_group("Z/x"), ValidationError);
    EXPECT_THROW(parse_group("Z++Z"), ValidationError);
    EXPECT_THROW(parse_group(""), ValidationError);
}
