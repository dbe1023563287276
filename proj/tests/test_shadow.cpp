#include "blowup/identities.hpp"
#include "blowup/reference_tables.hpp"

#include <gtest/gtest.h>

using namespace blowup;

namespace {

RationalFn l(Vertex v) { return RationalFn::var(v); }
RationalFn inv(std::initializer_list<Vertex> s, unsigned e = 1) { return RationalFn::inverse_subset_sum(VertexSet(s), e); }
RationalForm d(IndexSet w) { return RationalForm::dlambda(w); }

std::vector<Rational> barycenter(std::size_t nv) { return std::vector<Rational>(nv, make_rational(1, static_cast<long>(nv))); }

}  // namespace

TEST(Whitney, Examples) {
    EXPECT_EQ(whitney_form(VertexSet{0}), RationalForm::scalar(l(0)));
    EXPECT_EQ(whitney_form(VertexSet{1, 2}), l(1) * d({2}) - l(2) * d({1}));
    RationalForm expected = (l(0) * d({1, 2}) - l(1) * d({0, 2}) + l(2) * d({0, 1})).scaled(2);
    EXPECT_EQ(whitney_form(VertexSet{0, 1, 2}), expected);
}

TEST(Omega, Examples) {
    EXPECT_EQ(omega_form(VertexSet{0}), RationalForm::scalar(RationalFn(1)));
    EXPECT_EQ(omega_form(VertexSet{1, 2}), inv({1, 2}, 2) * whitney_form(VertexSet{1, 2}));
    EXPECT_EQ(omega_form(VertexSet{0, 1, 2}), inv({0, 1, 2}, 3) * whitney_form(VertexSet{0, 1, 2}));
}

TEST(Probability, WorkedExamples) {
    RationalFn p = poisson_probability(Flag::parse("01{23}"));
    RationalFn expected = l(0) * l(1) * RationalFn::subset_sum(VertexSet{2, 3}) * inv({0, 1, 2, 3}) * inv({1, 2, 3}) *
                          (inv({0, 1, 2, 3}) + inv({1, 2, 3}) + inv({2, 3}));
    EXPECT_EQ(p, expected);
    EXPECT_EQ(poisson_probability(Flag::parse("{0123}")), RationalFn(1));
    RationalFn l01 = RationalFn::subset_sum(VertexSet{0, 1});
    RationalFn q = l01 * l01 * RationalFn::subset_sum(VertexSet{2, 3}) * inv({0, 1, 2, 3}, 2) *
                   (inv({0, 1, 2, 3}).scaled(2) + inv({2, 3}));
    EXPECT_EQ(poisson_probability(Flag::parse("{01}{23}")), q);
}

TEST(Probability, HomogeneousAndProperAtBarycenter) {
    for (Vertex nv = 1; nv <= 4; ++nv)
        for (int k = 0; k < static_cast<int>(nv); ++k)
            for (const auto& F : enumerate_flags(VertexSet::range(nv), k)) {
                RationalFn p = poisson_probability(F);
                EXPECT_TRUE(is_homogeneous(p, 0)) << F.shorthand();
                Rational v = p.evaluate(barycenter(nv));
                EXPECT_GT(v, 0);
                EXPECT_TRUE(F.block_count() > 1 ? v < 1 : v == 1) << F.shorthand();
            }
}

TEST(Probability, OrderingsOfOnePartitionSumToOne) {
    for (Vertex nv = 2; nv <= 4; ++nv)
        for (int k = 0; k < static_cast<int>(nv); ++k) {
            std::map<std::vector<VertexSet>, RationalFn> sums;
            for (const auto& F : enumerate_flags(VertexSet::range(nv), k)) {
                auto key = F.blocks();
                std::sort(key.begin(), key.end());
                sums[key] += poisson_probability(F);
            }
            for (const auto& [key, s] : sums) EXPECT_EQ(s, RationalFn(1));
        }
}

TEST(ShadowBasis, TabulatedEntriesMatch) {
    for (int n : {2, 3}) {
        ShadowCache cache;
        for (const auto& entry : tabulated_shadow_forms(n)) {
            Flag F = Flag::parse(entry.flag);
            EXPECT_EQ(F.k(), entry.k);
            EXPECT_EQ(sign_match(cache.form(F), entry.form), 1) << entry.flag;
        }
    }
}

TEST(ShadowBasis, FormEqualsProbabilityTimesOmegaAndIsDilationInvariant) {
    for (Vertex nv = 1; nv <= 4; ++nv)
        for (int k = 0; k < static_cast<int>(nv); ++k)
            for (const auto& e : shadow_basis(VertexSet::range(nv), k)) {
                EXPECT_EQ(e.form, e.probability * e.omega);
                EXPECT_EQ(e.form.degree(), e.flag.k());
                for (const auto& [w, c] : e.form.terms()) EXPECT_TRUE(is_homogeneous(c, -k)) << e.flag.shorthand();
                // basic: annihilated by the tautological vector field
                EXPECT_TRUE(contract_tautological(e.form, VertexSet::range(nv)).is_zero());
            }
}

TEST(ShadowBasis, PartitionOfUnity) {
    for (Vertex nv = 1; nv <= 4; ++nv) {
        RationalForm sum(0);
        for (const auto& e : shadow_basis(VertexSet::range(nv), 0)) sum += e.form;
        EXPECT_EQ(sum, RationalForm::scalar(RationalFn(1)));
    }
}

TEST(DDecomposition, Examples) {
    EXPECT_TRUE(d_decomposition(Flag::parse("{012}")).empty());
    auto terms = d_decomposition(Flag::parse("012"));
    ASSERT_EQ(terms.size(), 2u);
    EXPECT_EQ(terms[0].flag, Flag::parse("{01}2"));
    EXPECT_EQ(terms[1].flag, Flag::parse("0{12}"));
    for (const auto& t : terms) EXPECT_TRUE(t.sign == 1 || t.sign == -1);

    ShadowCache cache;
    RationalForm s = cache.form(Flag::parse("012")) + cache.form(Flag::parse("021"));
    EXPECT_TRUE(equal_on_simplex(s, RationalForm::scalar(l(0)), VertexSet{0, 1, 2}));
    EXPECT_TRUE(equal_on_simplex(exterior_derivative(s), d({0}), VertexSet{0, 1, 2}));
}

TEST(DDecomposition, SignsComposeToZeroAndDSquaredVanishes) {
    for (Vertex nv = 2; nv <= 3; ++nv) {
        ShadowCache cache;
        for (int k = 0; k + 1 < static_cast<int>(nv); ++k)
            for (const auto& F : enumerate_flags(VertexSet::range(nv), k)) {
                EXPECT_TRUE(exterior_derivative(exterior_derivative(cache.form(F))).is_zero());
                std::map<Flag, int> twice;
                for (const auto& a : d_decomposition(F, cache))
                    for (const auto& b : d_decomposition(a.flag, cache)) twice[b.flag] += a.sign * b.sign;
                for (const auto& [G, c] : twice) EXPECT_EQ(c, 0) << F.shorthand() << " -> " << G.shorthand();
            }
    }
}

TEST(WhitneyContainment, Examples) {
    VertexSet V2{0, 1, 2};
    EXPECT_EQ(whitney_containment(V2, V2), std::vector<Flag>{Flag::parse("{012}")});
    EXPECT_EQ(whitney_containment(VertexSet{0}, V2), (std::vector<Flag>{Flag::parse("012"), Flag::parse("021")}));
    VertexSet V3 = VertexSet::range(4);
    auto flags = whitney_containment(VertexSet{0, 1}, V3);
    EXPECT_EQ(flags, (std::vector<Flag>{Flag::parse("{01}23"), Flag::parse("{01}32")}));
    EXPECT_THROW(whitney_containment(VertexSet{5}, V2), std::invalid_argument);
}

TEST(ReduceDimension, Examples) {
    auto [a, ok_a] = reduce_dimension(Flag::parse("01{23}"));
    EXPECT_EQ(a, Flag::parse("01"));
    EXPECT_TRUE(ok_a);
    auto [b, ok_b] = reduce_dimension(Flag::parse("0{12}"));
    EXPECT_EQ(b, Flag::parse("0"));
    EXPECT_TRUE(ok_b);
    auto [c, ok_c] = reduce_dimension(Flag::parse("{01}{23}"));
    EXPECT_EQ(c, Flag::parse("{01}"));
    EXPECT_TRUE(ok_c);
    for (Vertex nv = 2; nv <= 4; ++nv)
        for (int k = 0; k + 1 < static_cast<int>(nv); ++k)
            for (const auto& F : enumerate_flags(VertexSet::range(nv), k)) EXPECT_TRUE(reduce_dimension(F).second);
}
