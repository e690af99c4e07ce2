#include <random>

#include <gtest/gtest.h>

#include <cechent/fiber.hpp>
#include <cechent/systems.hpp>

#include "oracles.hpp"

using namespace cechent;

namespace {

// Random total relation on `n` points with 1..3 successors each.
ModelPtr random_relation(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<std::size_t> pt(0, n - 1), deg(1, 3);
    std::vector<std::vector<std::size_t>> succ(n);
    for (auto& s : succ)
        for (std::size_t i = deg(rng); i > 0; --i) s.push_back(pt(rng));
    return Model::from_successors("random", numbered("p", n), succ);
}

Cover on_model(const ModelPtr& m, const Cover& shape) {
    std::vector<CoverElement> e;
    for (const auto& x : shape.elements()) e.push_back({x.name, x.points});
    return Cover::create(m, e);
}

// Largest number of pairwise disjoint cover elements inside `target`.
std::size_t disjoint_inside(const Cover& a, const PointSet& target) {
    std::vector<PointSet> inside;
    for (const auto& e : a.elements())
        if (e.points.is_subset_of(target)) inside.push_back(e.points);
    std::size_t best = 0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << inside.size()); ++mask) {
        PointSet used(target.size());
        bool ok = true;
        std::size_t n = 0;
        for (std::size_t i = 0; i < inside.size() && ok; ++i)
            if (mask & (std::uint64_t{1} << i)) {
                ok = (used & inside[i]).none();
                used |= inside[i];
                ++n;
            }
        if (ok) best = std::max(best, n);
    }
    return best;
}

} // namespace

TEST(OrbitFiber, IdentityKeepsEverySlice) {
    auto sys = identity_system(16);
    const PointSet& u = sys.covers.front().second[1].points;
    OrbitFiber f = orbit_fiber(*sys.model, u, 2);
    ASSERT_EQ(f.slices().size(), 5u);
    for (int i = -2; i <= 2; ++i) EXPECT_EQ(f.slice(i), u);
}

TEST(OrbitFiber, ShiftCylinder) {
    auto m = full_shift(2, 2);
    Cover c1 = cylinder_cover(m, 1);
    OrbitFiber f = orbit_fiber(*m, c1[*c1.find("[0]")].points, 1);
    // preimage of [0]: words whose second symbol is 0
    PointSet back = m->empty_set();
    for (std::size_t i = 0; i < m->size(); ++i)
        if (m->point_name(i)[1] == '0') back.set(i);
    EXPECT_EQ(f.slice(-1), back);
    EXPECT_TRUE(f.slice(1).all());
}

TEST(OrbitFiber, ConstantMapHasEmptyBackwardSlice) {
    auto sys = exercise2(3);
    const Model& m = *sys.model;
    OrbitFiber f = orbit_fiber(m, m.set_of({*m.index_of("2")}), 1);
    EXPECT_EQ(f.slice(1), m.set_of({*m.index_of("1")}));
    EXPECT_TRUE(f.slice(-1).none());
    EXPECT_FALSE(f.all_nonempty());
}

TEST(OrbitFiber, RejectsEmptySetAndNegativeWindow) {
    auto sys = exercise2(3);
    EXPECT_THROW(orbit_fiber(*sys.model, sys.model->empty_set(), 1), ValidationError);
    EXPECT_THROW(orbit_fiber(*sys.model, sys.model->full_set(), -1), ValidationError);
}

TEST(FiberIntersect, SelfIntersectionIsIdentity) {
    auto sys = circle_degree_system(2);
    OrbitFiber f = orbit_fiber(*sys.model, sys.covers.front().second[0].points, 2);
    auto g = fiber_intersect(f, f);
    ASSERT_TRUE(g.has_value());
    EXPECT_EQ(*g, f);
}

TEST(FiberIntersect, IdentityMeetsIffSetsMeet) {
    std::mt19937 rng(37);
    auto sys = identity_system(12);
    const Model& m = *sys.model;
    std::bernoulli_distribution coin(0.3);
    for (int t = 0; t < 100; ++t) {
        PointSet u = m.empty_set(), v = m.empty_set();
        for (std::size_t p = 0; p < m.size(); ++p) {
            if (coin(rng)) u.set(p);
            if (coin(rng)) v.set(p);
        }
        if (u.none() || v.none()) continue;
        auto meet = fiber_intersect(orbit_fiber(m, u, 2), orbit_fiber(m, v, 2));
        EXPECT_EQ(meet.has_value(), (u & v).any());
    }
}

TEST(FiberIntersect, DisjointShiftCylinders) {
    auto m = full_shift(2, 3);
    Cover c1 = cylinder_cover(m, 1);
    for (int n : {0, 1, 2}) {
        auto meet = fiber_intersect(orbit_fiber(*m, c1[0].points, n), orbit_fiber(*m, c1[1].points, n));
        EXPECT_FALSE(meet.has_value()) << "window " << n;
    }
    auto f1 = orbit_fiber(*m, c1[0].points, 1), g1 = orbit_fiber(*m, c1[1].points, 1);
    EXPECT_TRUE((f1.slice(1) & g1.slice(1)).all());
}

TEST(FiberIntersect, RejectsWindowMismatch) {
    auto sys = identity_system(8);
    const PointSet& u = sys.covers.front().second[0].points;
    EXPECT_THROW(fiber_intersect(orbit_fiber(*sys.model, u, 1), orbit_fiber(*sys.model, u, 2)), ValidationError);
}

TEST(FiberNerve, WindowZeroIsTheNerveOnRandomSystems) {
    std::mt19937 rng(41);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 5 + t % 8;
        auto m = random_relation(rng, n);
        Cover a = on_model(m, oracle::random_cover(rng, n, 2 + t % 6));
        EXPECT_EQ(build_fiber_nerve(a, *m, 0).complex.simplex_set(), oracle::brute_nerve(a));
    }
}

TEST(FiberNerve, IdentityDynamicsAtEveryWindow) {
    auto sys = identity_system(16);
    const Cover& a = sys.covers.front().second;
    const NerveComplex k = build_nerve(a);
    for (int n = 0; n <= 4; ++n) {
        FiberNerve fn = build_fiber_nerve(a, *sys.model, n);
        EXPECT_TRUE(embed_cech_chains(k, fn).equal());
        EXPECT_EQ(fiber_homology(fn, 0).rank, 1u);
        EXPECT_EQ(fiber_homology(fn, 1).rank, 1u);
    }
}

TEST(FiberNerve, ShrinksAsTheWindowGrows) {
    std::mt19937 rng(43);
    for (int t = 0; t < 40; ++t) {
        auto m = random_relation(rng, 9);
        Cover a = on_model(m, oracle::random_cover(rng, 9, 5));
        auto prev = build_fiber_nerve(a, *m, 0).complex.simplex_set();
        for (int n = 1; n <= 3; ++n) {
            auto cur = build_fiber_nerve(a, *m, n).complex.simplex_set();
            EXPECT_TRUE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
            prev = std::move(cur);
        }
    }
}

TEST(FiberNerve, ConstantMapKeepsOnlyTheFixedPoint) {
    const int k = 4;
    auto sys = exercise2(k);
    const Cover& a = sys.covers.front().second;
    FiberNerve fn = build_fiber_nerve(a, *sys.model, 1);
    ASSERT_EQ(fn.complex.total_simplices(), 1u);
    EXPECT_EQ(fn.complex.simplex_label(fn.complex.simplices(0).front()), "{{1}}");
    EXPECT_EQ(fiber_homology(fn, 0).rank, 1u);
    EmbeddingReport e = embed_cech_chains(build_nerve(a), fn);
    EXPECT_FALSE(e.nerve_in_fiber());
    EXPECT_TRUE(e.fiber_in_nerve());
    EXPECT_EQ(e.nerve_only.size(), static_cast<std::size_t>(k - 1));
}

TEST(FiberNerve, WindowZeroEmbeddingIsEquality) {
    auto sys = circle_degree_system(3);
    const Cover& a = sys.covers.front().second;
    EXPECT_TRUE(embed_cech_chains(build_nerve(a), build_fiber_nerve(a, *sys.model, 0)).equal());
}

TEST(FiberAxiom, HoldsForInjectiveDynamics) {
    auto sys = identity_system(16);
    auto r = fiber_axiom_audit(sys.covers.front().second, *sys.model, 3);
    EXPECT_TRUE(r.holds());
    EXPECT_EQ(r.pairs_checked, 6u);
}

TEST(FiberAxiom, FailsForTheDoublingMap) {
    // f(a0 ∩ a1) = {c8} but f(a0) ∩ f(a1) = {c0, c8}
    auto sys = circle_degree_system(2);
    auto r = fiber_axiom_audit(sys.covers.front().second, *sys.model, 1);
    EXPECT_FALSE(r.holds());
    ASSERT_FALSE(r.mismatches.empty());
    EXPECT_EQ(r.mismatches.front(), (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(Eigenvalue, ForcedSmallestSplit) {
    EXPECT_EQ(decompose_eigenvalue(3), (std::pair<long long, long long>{1, 2}));
    EXPECT_EQ(decompose_eigenvalue(4), (std::pair<long long, long long>{1, 3}));
    EXPECT_EQ(decompose_eigenvalue(100), (std::pair<long long, long long>{1, 99}));
    EXPECT_THROW(decompose_eigenvalue(2), DomainError);
}

TEST(Eigenchain, TrivialEigenvalues) {
    auto sys = exercise2(3);
    for (long long mval : {0, 1}) {
        auto w = eigenchain_analysis(*sys.model, sys.covers.front().second, 1, mval);
        EXPECT_EQ(w.status, WitnessStatus::Certified);
        EXPECT_EQ(w.branches.size(), static_cast<std::size_t>(mval));
    }
}

TEST(Eigenchain, ShiftBranchesMatchDisjointCylinders) {
    for (int k : {2, 3, 4}) {
        auto m = full_shift(k, 3);
        Cover c1 = cylinder_cover(m, 1);
        auto w = eigenchain_analysis(*m, c1, 0, k);
        EXPECT_EQ(w.status, WitnessStatus::Certified) << "k=" << k;
        EXPECT_EQ(disjoint_inside(c1, w.target), static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < w.branches.size(); ++i) {
            EXPECT_TRUE(w.branches[i].any());
            EXPECT_TRUE(w.branches[i].is_subset_of(w.target));
            for (std::size_t j = i + 1; j < w.branches.size(); ++j) EXPECT_TRUE((w.branches[i] & w.branches[j]).none());
        }
        if (k > 2) {
            ASSERT_TRUE(w.split.has_value());
            EXPECT_EQ(w.split->first + w.split->second, k);
        }
        EXPECT_EQ(eigenchain_analysis(*m, c1, 0, k + 1).status, WitnessStatus::Refuted);
    }
}

TEST(Eigenchain, ContractionMidIntervalFollowsGridEnumeration) {
    auto sys = contraction_system(Rational(1, 2), 32);
    const Cover& a = sys.covers.front().second;
    const std::size_t mid = *a.find("w15");
    auto w = eigenchain_analysis(*sys.model, a, mid, 2);
    // f^-1 f({15,16}) = cells 14..17, which hold the disjoint windows w14, w16
    PointSet expected = sys.model->set_of({14, 15, 16, 17});
    EXPECT_EQ(w.target, expected);
    EXPECT_EQ(disjoint_inside(a, w.target), 2u);
    EXPECT_EQ(w.status, WitnessStatus::Certified);
    EXPECT_EQ(eigenchain_analysis(*sys.model, a, mid, 5).status, WitnessStatus::Refuted);
}

TEST(Eigenchain, ConstantMapSingleBranch) {
    auto sys = exercise2(3);
    // f^-1 f({2}) = X holds all three singletons
    auto w = eigenchain_analysis(*sys.model, sys.covers.front().second, 1, 3);
    EXPECT_EQ(w.status, WitnessStatus::Certified);
    EXPECT_EQ(w.available_branches, 3u);
}
