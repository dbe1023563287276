#include "blowup/dof.hpp"
#include "blowup/identities.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace blowup;

namespace {

RationalFn l(Vertex v) { return RationalFn::var(v); }
RationalForm d(IndexSet w) { return RationalForm::dlambda(w); }

Rational binom(unsigned n, unsigned k) { return Rational(binomial(n, k)); }

// int_0^1 x^a (1-x)^b dx by binomial expansion
Rational beta_by_expansion(unsigned a, unsigned b) {
    Rational s = 0;
    for (unsigned j = 0; j <= b; ++j) {
        Rational t = binom(b, j) / Rational(a + j + 1);
        s += (j % 2) ? -t : t;
    }
    return s;
}

// 2 * int_{x+y<=1} x^a y^b (1-x-y)^c, iterated with elementary antiderivatives
Rational triangle_by_expansion(unsigned a, unsigned b, unsigned c) {
    Rational s = 0;
    for (unsigned i = 0; i <= c; ++i) {
        // inner integral over y contributes (1-x)^{b+c+1} / (b+i+1)
        Rational t = binom(c, i) / Rational(b + i + 1) * beta_by_expansion(a, b + c + 1);
        s += (i % 2) ? -t : t;
    }
    return 2 * s;
}

}  // namespace

TEST(Integration, MonomialSimplexExamples) {
    EXPECT_EQ(integrate_monomial_simplex(VertexSet{0, 1, 2}, {}), 1);
    EXPECT_EQ(integrate_monomial_simplex(VertexSet{0, 1, 2}, {{0, 1}}), make_rational(1, 3));
    EXPECT_EQ(integrate_monomial_simplex(VertexSet{0, 1}, {{0, 1}, {1, 1}}), make_rational(1, 6));
    EXPECT_THROW(integrate_monomial_simplex(VertexSet{0, 1}, {{2, 1}}), std::invalid_argument);
}

TEST(Integration, AgreesWithIteratedIntegrals) {
    for (unsigned a = 0; a <= 4; ++a)
        for (unsigned b = 0; b <= 4; ++b) {
            EXPECT_EQ(integrate_monomial_simplex(VertexSet{0, 1}, {{0, a}, {1, b}}), beta_by_expansion(a, b));
            for (unsigned c = 0; c <= 3; ++c)
                EXPECT_EQ(integrate_monomial_simplex(VertexSet{0, 1, 2}, {{0, a}, {1, b}, {2, c}}),
                          triangle_by_expansion(a, b, c));
        }
}

TEST(Restrict, ShadowFormRestrictsToVolumeForm) {
    for (Vertex nv = 2; nv <= 4; ++nv)
        for (int k = 0; k < static_cast<int>(nv); ++k)
            for (const auto& F : enumerate_flags(VertexSet::range(nv), k)) {
                ThetaIntegrand t = restrict_to_theta(shadow_form(F), F);
                EXPECT_EQ(t.density, Polynomial(1)) << F.shorthand();
            }
}

TEST(Restrict, ReorderedPartitionGivesZero) {
    ShadowCache cache;
    RationalForm psi = cache.form(Flag::parse("{01}23"));
    EXPECT_TRUE(restrict_to_theta(psi, Flag::parse("{01}32")).density.is_zero());
    EXPECT_TRUE(restrict_to_theta(psi, Flag::parse("2{01}3")).density.is_zero());
}

TEST(Restrict, VertexLimitsOfBarycentricCoordinate) {
    RationalForm f = RationalForm::scalar(l(0));
    EXPECT_TRUE(restrict_to_theta(f, Flag::parse("120")).density.is_zero());
    EXPECT_EQ(restrict_to_theta(f, Flag::parse("012")).density, Polynomial(1));
    EXPECT_THROW(restrict_to_theta(d({0}), Flag::parse("012")), std::invalid_argument);
}

TEST(Restrict, NonPolynomialResidueIsReported) {
    VertexSet V{0, 1};
    RationalForm omega = omega_form(V);
    // l_1 is a proper subset sum of the block {0,1}
    RationalForm bad = (l(0) * RationalFn::inverse_subset_sum(VertexSet{1})) * omega;
    EXPECT_THROW(dof_evaluate(Flag::parse("{01}"), bad), NonPolynomialResidue);
    RationalForm good = (l(0) * RationalFn::inverse_subset_sum(V)) * omega;
    EXPECT_EQ(dof_evaluate(Flag::parse("{01}"), good), make_rational(1, 2));
}

TEST(Dof, ClassicalEdgeFormHasUnitEdgeIntegral) {
    RationalForm phi01 = whitney_form(VertexSet{0, 1});
    EXPECT_EQ(dof_evaluate(Flag::parse("{01}2"), phi01), 1);
    // direct pullback to the edge lambda_0 = 1 - t, lambda_1 = t: (1-t) + t = 1 per dt
    Rational edge = beta_by_expansion(0, 1) + beta_by_expansion(1, 0);
    EXPECT_EQ(edge, 1);
    EXPECT_EQ(dof_evaluate(Flag::parse("{01}2"), phi01), edge);
    EXPECT_EQ(dof_evaluate(Flag::parse("2{01}"), phi01), 0);
    EXPECT_EQ(dof_evaluate(Flag::parse("{02}1"), phi01), 0);
}

TEST(Dof, GramMatrixIsIdentitySmall) {
    for (Vertex nv = 2; nv <= 3; ++nv)
        for (int k = 0; k < static_cast<int>(nv); ++k) {
            DofMatrix M = gram_matrix(VertexSet::range(nv), k);
            EXPECT_TRUE(M.is_identity()) << "n=" << nv - 1 << " k=" << k;
        }
    EXPECT_EQ(gram_matrix(VertexSet{0, 1}, 0).rows.size(), 2u);
    EXPECT_EQ(gram_matrix(VertexSet{0, 1, 2}, 1).rows.size(), 6u);
}

TEST(Dof, Linearity) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-5, 5);
    auto flags = enumerate_flags(VertexSet::range(3), 1);
    ShadowCache cache;
    for (int trial = 0; trial < 10; ++trial) {
        Rational a(coef(rng), 3), b(coef(rng), 7);
        a.canonicalize();
        b.canonicalize();
        const auto& g = flags[static_cast<std::size_t>(trial * 5 + 1) % flags.size()];
        RationalForm phi = whitney_form(VertexSet{0, 2});
        RationalForm combo = cache.form(g).scaled(a) + phi.scaled(b);
        for (const auto& F : flags)
            EXPECT_EQ(dof_evaluate(F, combo), a * dof_evaluate(F, cache.form(g)) + b * dof_evaluate(F, phi));
    }
}

TEST(Dof, TopDegreeMatchesSimplexIntegral) {
    VertexSet V{0, 1, 2};
    Flag top = Flag::parse("{012}");
    EXPECT_EQ(dof_evaluate(top, omega_form(V)), 1);
    // lambda_0^2 lambda_1 * omega integrates like the monomial on the simplex
    RationalForm weighted = (l(0) * l(0) * l(1) * RationalFn::inverse_subset_sum(V, 3)) * omega_form(V);
    EXPECT_EQ(dof_evaluate(top, weighted), integrate_monomial_simplex(V, {{0, 2}, {1, 1}}));
    EXPECT_EQ(dof_evaluate(top, weighted), triangle_by_expansion(2, 1, 0));
}

TEST(Dof, PermutationEquivariance) {
    VertexSet V{0, 1, 2};
    std::vector<Vertex> image{0, 1, 2};
    do {
        std::map<Vertex, Vertex> perm{{0, image[0]}, {1, image[1]}, {2, image[2]}};
        for (int k = 0; k < 3; ++k)
            for (const auto& F : enumerate_flags(V, k)) {
                Flag G = permute_flag(F, perm);
                // orientation of each block moves with the parity of the relabeling
                int sign = 1;
                for (const auto& b : F.blocks()) {
                    IndexSet moved;
                    for (Vertex v : b) moved.push_back(perm.at(v));
                    sign *= detail::sort_with_sign(moved);
                }
                RationalForm pulled = rename(shadow_form(F), perm);
                for (const auto& H : enumerate_flags(V, k)) {
                    Rational expected = H == G ? Rational(sign) : Rational(0);
                    EXPECT_EQ(dof_evaluate(H, pulled), expected) << F.shorthand() << " -> " << G.shorthand();
                }
            }
    } while (std::next_permutation(image.begin(), image.end()));
}
