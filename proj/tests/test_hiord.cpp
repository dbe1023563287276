#include "blowup/hiord.hpp"
#include "blowup/reference_tables.hpp"

#include <gtest/gtest.h>

using namespace blowup;

namespace {

RationalFn lam(Vertex v) { return RationalFn::var(v); }

const HigherBasisCandidate& find_sequence(const std::vector<HigherBasisCandidate>& cs, const std::string& s) {
    for (const auto& c : cs)
        if (c.sequence.to_string() == s) return c;
    throw std::runtime_error("no candidate " + s);
}

}  // namespace

TEST(HigherOrder, CensusForTriangleCubic) {
    auto cs = enumerate_experiments(VertexSet::range(3), 3);
    EXPECT_EQ(cs.size(), 19u);
    std::map<int, std::size_t> per_kind;  // by number of blocks
    std::map<Flag, std::size_t> per_flag;
    for (const auto& c : cs) ++per_flag[c.flag];
    for (const auto& [F, m] : per_flag) {
        EXPECT_EQ(m, F.block_count() == 2 ? 2u : 1u) << F.shorthand();
        per_kind[static_cast<int>(F.block_count())] += m;
    }
    EXPECT_EQ(per_kind[3], 6u);
    EXPECT_EQ(per_kind[2], 12u);
    EXPECT_EQ(per_kind[1], 1u);
}

TEST(HigherOrder, WorkedProbabilities) {
    auto cs = enumerate_experiments(VertexSet::range(3), 3);
    RationalFn a = (lam(0) * lam(0) * lam(1)).scaled(3).divided_by_subset_sum(VertexSet{0, 1, 2}, 3);
    EXPECT_EQ(find_sequence(cs, "001|222").probability, a);
    RationalFn b = (lam(0) * lam(1) * lam(2)).scaled(6).divided_by_subset_sum(VertexSet{0, 1, 2}, 3);
    EXPECT_EQ(find_sequence(cs, "012").probability, b);
    for (const auto& row : tabulated_higher_order()) {
        const auto& c = find_sequence(cs, row.sequence);
        EXPECT_EQ(c.flag.shorthand(), row.flag) << row.sequence;
        EXPECT_EQ(c.probability, row.value) << row.sequence;
    }
}

TEST(HigherOrder, ProbabilitiesSumToOne) {
    for (Vertex nv = 1; nv <= 4; ++nv)
        for (unsigned r = 1; r <= 3; ++r) {
            RationalFn total;
            auto cs = enumerate_experiments(VertexSet::range(nv), r);
            std::vector<Rational> bary(nv, Rational(1, nv));
            for (const auto& c : cs) {
                total = total + c.probability;
                Rational p = c.probability.evaluate(bary);
                EXPECT_GT(p, 0);
                EXPECT_LE(p, 1);
                EXPECT_TRUE(is_homogeneous(c.probability, 0));
            }
            EXPECT_EQ(total, RationalFn(1)) << "n=" << nv - 1 << " r=" << r;
        }
}

TEST(HigherOrder, LinearCaseIsTheShadowScalarSpace) {
    for (Vertex nv = 2; nv <= 4; ++nv) EXPECT_TRUE(r1_reduction_check(VertexSet::range(nv)));
    EXPECT_EQ(enumerate_experiments(VertexSet::range(2), 1).size(), 2u);
    EXPECT_EQ(enumerate_experiments(VertexSet::range(4), 1).size(), 24u);
}

TEST(HigherOrder, IndependenceRank) {
    EXPECT_EQ(independence_rank(enumerate_experiments(VertexSet::range(3), 1)), 6u);
    // two functions on an edge are the barycentric coordinates
    EXPECT_EQ(independence_rank(enumerate_experiments(VertexSet::range(2), 1)), 2u);
    // a dependent family: lambda_0/l_01, lambda_1/l_01 and their sum 1
    std::vector<RationalFn> dep = {lam(0).divided_by_subset_sum(VertexSet{0, 1}),
                                   lam(1).divided_by_subset_sum(VertexSet{0, 1}), RationalFn(1)};
    EXPECT_EQ(independence_rank(dep), 2u);
}

TEST(HigherOrder, FirstRoundSumsAreBernstein) {
    auto rows = pr_containment(VertexSet::range(3), 3);
    EXPECT_EQ(rows.size(), 10u);  // monomials of degree 3 in 3 variables
    bool seen = false;
    for (const auto& row : rows)
        if (row.first_round == std::map<Vertex, unsigned>{{0, 2}, {1, 1}, {2, 0}}) {
            seen = true;
            EXPECT_EQ(row.sum, (lam(0) * lam(0) * lam(1)).scaled(3).divided_by_subset_sum(VertexSet{0, 1, 2}, 3));
        }
    EXPECT_TRUE(seen);
    // r = 1 on a triangle: psi_012 + psi_021 = lambda_0 / l_012
    auto linear = pr_containment(VertexSet::range(3), 1);
    EXPECT_EQ(linear.size(), 3u);
    EXPECT_EQ(linear.back().sum, lam(0).divided_by_subset_sum(VertexSet{0, 1, 2}));
    auto edge = pr_containment(VertexSet{0, 1}, 1);
    ASSERT_EQ(edge.size(), 2u);
    EXPECT_EQ(edge[0].sum, lam(1).divided_by_subset_sum(VertexSet{0, 1}));
    EXPECT_NO_THROW(pr_containment(VertexSet::range(4), 2));
}

TEST(HigherOrder, FaceVanishing) {
    auto cs = enumerate_experiments(VertexSet::range(3), 3);
    EXPECT_FALSE(face_vanishing_check(find_sequence(cs, "001|222"), Flag::parse("{01}2")));
    EXPECT_TRUE(face_vanishing_check(find_sequence(cs, "012"), Flag::parse("{01}2")));
    Rational third(1, 3);
    std::vector<Rational> bary{third, third, third};
    for (const auto& c : cs) {
        RationalFn on_whole = sequential_flag_limit(c.probability, Flag::parse("0,1,2"));
        EXPECT_EQ(on_whole, c.probability);
        EXPECT_GT(on_whole.evaluate(bary), 0);
    }
    for (unsigned r = 1; r <= 3; ++r) {
        VanishingSummary s = face_vanishing_census(VertexSet::range(3), r);
        EXPECT_EQ(s.violations, 0u) << "r=" << r;
        EXPECT_GT(s.nonzero, 0u);
    }
}

TEST(HigherOrder, SequenceProbabilityLookup) {
    VertexSet V = VertexSet::range(3);
    EXPECT_EQ(experiment_probability(V, ArrivalSequence::parse("001|222")),
              find_sequence(enumerate_experiments(V, 3), "001|222").probability);
    // stops before silencing vertex 2
    EXPECT_TRUE(experiment_probability(V, ArrivalSequence::parse("001")).is_zero());
}
