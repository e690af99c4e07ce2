#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include <cechent/homology.hpp>
#include <cechent/nerve.hpp>
#include <cechent/systems.hpp>

#include "oracles.hpp"

using namespace cechent;

namespace {

Cover four_arcs() {
    auto m = circle_map(8, 1);
    return arc_cover(m, 4);
}

NerveComplex rp2() {
    return NerveComplex::from_named_simplices({{"1", "2", "3"}, {"1", "3", "4"}, {"1", "4", "5"}, {"1", "5", "6"}, {"1", "6", "2"},
                                               {"2", "3", "5"}, {"3", "4", "6"}, {"4", "5", "2"}, {"5", "6", "3"}, {"6", "2", "4"}});
}

HomologyGroup group(std::size_t rank, std::vector<Integer> torsion = {}) { return HomologyGroup{rank, std::move(torsion)}; }

// Betti numbers by rank-nullity over Q.
std::size_t betti_oracle(const ChainComplex& c, int p) {
    const std::size_t out = oracle::rank_oracle(c.boundary(p));
    const std::size_t in = p + 1 <= c.top_dimension() + 1 ? oracle::rank_oracle(c.boundary(p + 1)) : 0;
    return c.rank(p) - out - in;
}

} // namespace

TEST(Nerve, WholeSpaceGivesOneVertex) {
    auto m = circle_map(8, 1);
    NerveComplex k = build_nerve(whole_cover(m));
    EXPECT_EQ(k.top_dimension(), 0);
    EXPECT_EQ(k.count(0), 1u);
}

TEST(Nerve, FourArcsFormACycle) {
    NerveComplex k = build_nerve(four_arcs());
    EXPECT_EQ(k.count(0), 4u);
    EXPECT_EQ(k.count(1), 4u);
    EXPECT_EQ(k.top_dimension(), 1);
    EXPECT_EQ(k.simplex_set(), oracle::brute_nerve(four_arcs()));
}

TEST(Nerve, DisjointSingletonsGiveIsolatedVertices) {
    auto sys = exercise2(5);
    NerveComplex k = build_nerve(sys.covers.front().second);
    EXPECT_EQ(k.top_dimension(), 0);
    EXPECT_EQ(k.count(0), 5u);
}

TEST(Nerve, MatchesBruteForceOnRandomCovers) {
    std::mt19937 rng(7);
    for (int t = 0; t < 50; ++t) {
        Cover a = oracle::random_cover(rng, 3 + t % 10, 2 + t % 7);
        EXPECT_EQ(build_nerve(a).simplex_set(), oracle::brute_nerve(a));
    }
}

TEST(Nerve, RejectsNonCover) {
    auto m = circle_map(8, 1);
    Cover partial = Cover::family(m, {{"A", m->set_of({0, 1})}});
    EXPECT_THROW(build_nerve(partial), NotACoverError);
}

TEST(Boundary, DimensionZeroHasNoRows) {
    NerveComplex k = build_nerve(four_arcs());
    IntMatrix d0 = k.boundary(0);
    EXPECT_EQ(d0.rows(), 0u);
    EXPECT_EQ(d0.cols(), 4u);
}

TEST(Boundary, EdgeIsHeadMinusTail) {
    NerveComplex k = NerveComplex::from_named_simplices({{"A", "B"}});
    IntMatrix d1 = k.boundary(1);
    ASSERT_EQ(d1.rows(), 2u);
    EXPECT_EQ(d1(0, 0), -1);
    EXPECT_EQ(d1(1, 0), 1);
}

TEST(Boundary, CycleIncidenceColumnsSumToZero) {
    NerveComplex k = build_nerve(four_arcs());
    IntMatrix d1 = k.boundary(1);
    ASSERT_EQ(d1.rows(), 4u);
    ASSERT_EQ(d1.cols(), 4u);
    for (std::size_t j = 0; j < 4; ++j) {
        Integer s = 0;
        for (std::size_t i = 0; i < 4; ++i) s += d1(i, j);
        EXPECT_EQ(s, 0);
    }
    EXPECT_TRUE((k.boundary(0) * d1).is_zero());
}

TEST(Boundary, SquaresToZeroOnRandomCovers) {
    std::mt19937 rng(11);
    for (int t = 0; t < 100; ++t) {
        Cover a = oracle::random_cover(rng, 4 + t % 9, 2 + t % 7);
        ChainComplex c = build_nerve(a).chain_complex();
        for (int p = 1; p <= c.top_dimension() + 1; ++p) EXPECT_TRUE((c.boundary(p - 1) * c.boundary(p)).is_zero());
    }
}

TEST(Homology, SingleVertex) {
    NerveComplex k = NerveComplex::from_named_simplices({{"v"}});
    EXPECT_EQ(homology(k, 0), group(1));
    EXPECT_EQ(cohomology(k, 0), group(1));
}

TEST(Homology, FourCycle) {
    NerveComplex k = build_nerve(four_arcs());
    EXPECT_EQ(homology(k, 0), group(1));
    EXPECT_EQ(homology(k, 1), group(1));
    EXPECT_EQ(cohomology(k, 0), group(1));
    EXPECT_EQ(cohomology(k, 1), group(1));
    // invariant factors of the 4x4 incidence matrix: 1,1,1,0
    auto f = oracle::invariant_factors(k.boundary(1));
    EXPECT_EQ(f, (std::vector<Integer>{1, 1, 1}));
}

TEST(Homology, DisjointVerticesCountComponents) {
    auto sys = exercise2(4);
    EXPECT_EQ(homology(build_nerve(sys.covers.front().second), 0), group(4));
}

TEST(Homology, ProjectivePlaneTorsion) {
    NerveComplex k = rp2();
    ASSERT_EQ(k.count(0), 6u);
    ASSERT_EQ(k.count(1), 15u);
    ASSERT_EQ(k.count(2), 10u);
    // closed surface: every edge lies in exactly two triangles
    for (const auto& e : k.simplices(1)) {
        int n = 0;
        for (const auto& t : k.simplices(2)) n += std::includes(t.begin(), t.end(), e.begin(), e.end());
        EXPECT_EQ(n, 2);
    }
    EXPECT_EQ(homology(k, 0), group(1));
    EXPECT_EQ(homology(k, 1), group(0, {2}));
    EXPECT_EQ(homology(k, 2), group(0));
    EXPECT_EQ(cohomology(k, 0), group(1));
    EXPECT_EQ(cohomology(k, 1), group(0));
    EXPECT_EQ(cohomology(k, 2), group(0, {2}));
}

TEST(Homology, BettiNumbersMatchRankNullityOnRandomCovers) {
    std::mt19937 rng(13);
    for (int t = 0; t < 60; ++t) {
        Cover a = oracle::random_cover(rng, 4 + t % 9, 2 + t % 6);
        ChainComplex c = build_nerve(a).chain_complex();
        long long euler = 0;
        for (int p = 0; p <= c.top_dimension(); ++p) {
            const auto h = homology(c, p), co = cohomology(c, p);
            EXPECT_EQ(h.rank, betti_oracle(c, p));
            EXPECT_EQ(co.rank, h.rank);
            euler += (p % 2 ? -1 : 1) * (static_cast<long long>(c.rank(p)) - static_cast<long long>(h.rank));
        }
        EXPECT_EQ(euler, 0);
    }
}

TEST(Homology, InvariantUnderElementPermutation) {
    std::mt19937 rng(17);
    for (int t = 0; t < 30; ++t) {
        Cover a = oracle::random_cover(rng, 10, 6);
        std::vector<CoverElement> shuffled = a.elements();
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        Cover b = Cover::create(a.base(), shuffled);
        ChainComplex ca = build_nerve(a).chain_complex(), cb = build_nerve(b).chain_complex();
        ASSERT_EQ(ca.top_dimension(), cb.top_dimension());
        for (int p = 0; p <= ca.top_dimension(); ++p) {
            EXPECT_EQ(homology(ca, p), homology(cb, p));
            EXPECT_EQ(cohomology(ca, p), cohomology(cb, p));
        }
    }
}

TEST(Homology, RejectsOutOfRangeDegree) {
    ChainComplex c = build_nerve(four_arcs()).chain_complex();
    EXPECT_THROW(homology(c, 5), DimensionError);
    EXPECT_THROW(homology(c, -1), DimensionError);
}

TEST(Homology, CoefficientRankRepeatsGroups) {
    auto g = with_coefficient_rank(group(1, {2}), 3);
    EXPECT_EQ(g, group(3, {2, 2, 2}));
}

TEST(Complement, WholeSpaceVertexIsASimplex) {
    auto m = circle_map(8, 1);
    Cover x = whole_cover(m);
    auto d = complement_representation({0}, x);
    EXPECT_TRUE(d.complement_union.none());
    EXPECT_TRUE(d.represents_simplex);
}

TEST(Complement, ArcEdgeUnionMissesTheOverlap) {
    Cover a = four_arcs();
    auto d = complement_representation({0, 1}, a);
    EXPECT_TRUE(d.represents_simplex);
    EXPECT_EQ(~d.complement_union, a[0].points & a[1].points);
}

TEST(Complement, DisjointPairIsRejected) {
    auto m = circle_map(8, 1);
    Cover a = Cover::from_indices(m, {{"A", {0, 1, 2, 3}}, {"B", {4, 5, 6, 7}}});
    auto d = complement_representation({0, 1}, a);
    EXPECT_TRUE(d.complement_union.all());
    EXPECT_FALSE(d.represents_simplex);
}

TEST(Complement, AgreesWithNerveOnRandomCovers) {
    std::mt19937 rng(19);
    for (int t = 0; t < 30; ++t) {
        Cover a = oracle::random_cover(rng, 8, 5);
        const auto nerve = oracle::brute_nerve(a);
        for (std::uint64_t mask = 1; mask < 32; ++mask) {
            Simplex s;
            for (std::size_t i = 0; i < 5; ++i)
                if (mask & (1u << i)) s.push_back(i);
            EXPECT_EQ(complement_representation(s, a).represents_simplex, nerve.count(s) == 1);
        }
    }
}

TEST(PartialDimension, Examples) {
    auto m = circle_map(8, 1);
    EXPECT_EQ(partial_dimension(build_nerve(whole_cover(m))), 0);
    EXPECT_EQ(partial_dimension(build_nerve(four_arcs())), 1);
    std::vector<CoverElement> shared;
    for (int i = 0; i < 5; ++i) shared.push_back({"E" + std::to_string(i), m->set_of({0, static_cast<std::size_t>(i + 1)})});
    shared.back().points |= m->set_of({6, 7});
    EXPECT_EQ(partial_dimension(build_nerve(Cover::create(m, shared))), 4);
}

TEST(Purity, FullSimplexAndCycleAreFine) {
    EXPECT_TRUE(purity_audit(NerveComplex::from_named_simplices({{"a", "b", "c", "d"}})).holds());
    EXPECT_TRUE(purity_audit(build_nerve(four_arcs())).holds());
}

TEST(Purity, DanglingEdgeFails) {
    NerveComplex k = NerveComplex::from_named_simplices({{"a", "b", "c"}, {"c", "d"}});
    auto r = purity_audit(k);
    EXPECT_FALSE(r.holds());
    std::vector<std::string> labels;
    for (const auto& s : r.not_faces_of_top) labels.push_back(k.simplex_label(s));
    EXPECT_NE(std::find(labels.begin(), labels.end(), "{c,d}"), labels.end());
    EXPECT_NE(std::find(labels.begin(), labels.end(), "{d}"), labels.end());
}

TEST(Duality, HoldsOnVertexAndCycle) {
    EXPECT_TRUE(duality_audit(NerveComplex::from_named_simplices({{"v"}})).holds());
    auto r = duality_audit(build_nerve(four_arcs()));
    EXPECT_EQ(r.n, 1);
    EXPECT_TRUE(r.holds());
}

TEST(Duality, FailsOnDisjointPieces) {
    auto r = duality_audit(NerveComplex::from_named_simplices({{"a"}, {"b"}, {"c", "d"}}));
    EXPECT_EQ(r.n, 1);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.rows[0].homology, group(3));
    EXPECT_EQ(r.rows[0].cohomology, group(0));
    EXPECT_FALSE(r.holds());
}

TEST(Duality, FailsIntegrallyOnProjectivePlane) {
    // H_1 = Z/2 but H^1 = 0: integral duality fails on a non-orientable surface
    auto r = duality_audit(rp2());
    EXPECT_FALSE(r.holds());
}
