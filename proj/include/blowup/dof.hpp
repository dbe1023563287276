#pragma once

#include "blowup/errors.hpp"
#include "blowup/flag.hpp"
#include "blowup/form.hpp"
#include "blowup/shadow.hpp"

#include <map>
#include <string>
#include <vector>

namespace blowup {

// int_{T_W} prod theta_i^{a_i} against the unit-mass volume form:
// n! prod a_i! / (n + sum a_i)!
inline Rational integrate_monomial_simplex(const VertexSet& W, const std::map<Vertex, unsigned>& exponents) {
    if (W.empty()) throw std::invalid_argument("integrate_monomial_simplex: empty simplex");
    const unsigned n = static_cast<unsigned>(W.size() - 1);
    Integer num = factorial(n);
    unsigned total = 0;
    for (const auto& [v, a] : exponents) {
        if (!W.contains(v)) throw std::invalid_argument("integrate_monomial_simplex: exponent outside simplex");
        num *= factorial(a);
        total += a;
    }
    Rational r(num, factorial(n + total));
    r.canonicalize();
    return r;
}

// Face Theta_F = prod_j T_{V_j}.
struct ThetaFace {
    Flag flag;
    std::vector<VertexSet> factors;
    int dimension = 0;

    explicit ThetaFace(Flag f) : flag(std::move(f)), factors(flag.blocks()), dimension(flag.k()) {}
};

// density(theta) * vol_Theta, vol_Theta the product of unit-mass block volume forms
struct ThetaIntegrand {
    Flag flag;
    Polynomial density;
};

// Scalar g with form|_Theta = g * vol_Theta before any limit, written as a
// degree-0 function of lambda (lambda_i = rho_j theta_i on block j).
inline RationalFn tangential_density(const RationalForm& form, const Flag& F) {
    if (form.degree() != F.k()) throw std::invalid_argument("tangential_density: degree does not match flag");
    const VertexSet V = F.parent();
    const std::size_t m = F.block_count();
    RationalFn g;
    for (const auto& [w, c] : form.terms()) {
        std::vector<IndexSet> parts(m);
        bool ok = true;
        for (Vertex v : w) {
            int j = F.block_of(v);
            if (j < 0) {
                ok = false;
                break;
            }
            parts[static_cast<std::size_t>(j)].push_back(v);
        }
        if (!ok) continue;
        Rational factor = 1;
        Polynomial radial(1);
        for (std::size_t j = 0; j < m && ok; ++j) {
            const auto& b = F.block(j);
            if (parts[j].size() + 1 != b.size()) {
                ok = false;
                break;
            }
            // dtheta_{V_j minus v_p} = (-1)^p vol_j / n_j!
            std::size_t p = 0;
            while (p < parts[j].size() && parts[j][p] == b[p]) ++p;
            if (p % 2) factor = -factor;
            factor /= Rational(factorial(static_cast<unsigned>(parts[j].size())));
            radial *= detail::subset_sum_power(b, static_cast<unsigned>(parts[j].size()));
        }
        if (!ok) continue;
        IndexSet grouped;
        for (const auto& p : parts) grouped.insert(grouped.end(), p.begin(), p.end());
        int s = detail::sort_with_sign(grouped);
        if (s < 0) factor = -factor;
        g += (c * RationalFn(radial)).scaled(factor);
    }
    return homogenize(g, V);
}

// Sequential limits rho_last -> 0, ..., rho_1 -> 0, then rho_j -> 1 per block.
inline ThetaIntegrand restrict_to_theta(const RationalForm& form, const Flag& F) {
    RationalFn f = sequential_flag_limit(tangential_density(form, F), F);
    for (const auto& [s, e] : f.denominator()) {
        bool is_block = false;
        for (const auto& b : F.blocks())
            if (b == s) is_block = true;
        if (!is_block)
            throw NonPolynomialResidue("restricted density keeps denominator l_" + s.label() + " on flag " +
                                       F.shorthand());
    }
    return ThetaIntegrand{F, f.numerator()};
}

inline Rational integrate_theta(const ThetaIntegrand& t) {
    Rational total = 0;
    for (const auto& [m, c] : t.density.terms()) {
        Rational term = c;
        for (const auto& b : t.flag.blocks()) {
            std::map<Vertex, unsigned> ex;
            for (const auto& [v, e] : m.factors())
                if (b.contains(v)) ex[v] = e;
            term *= integrate_monomial_simplex(b, ex);
        }
        total += term;
    }
    return total;
}

inline Rational dof_evaluate(const Flag& F, const RationalForm& form) {
    if (form.is_zero()) return 0;
    return integrate_theta(restrict_to_theta(form, F));
}

struct DofMatrix {
    std::vector<Flag> rows;  // functionals
    std::vector<Flag> cols;  // forms
    std::vector<std::vector<Rational>> entries;

    bool is_identity() const {
        if (rows != cols) return false;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < cols.size(); ++j)
                if (entries[i][j] != (i == j ? 1 : 0)) return false;
        return true;
    }
};

inline DofMatrix gram_matrix(const VertexSet& V, int k) {
    DofMatrix M;
    M.rows = enumerate_flags(V, k);
    M.cols = M.rows;
    std::vector<RationalForm> forms;
    for (const auto& F : M.cols) forms.push_back(shadow_form(F));
    M.entries.assign(M.rows.size(), std::vector<Rational>(M.cols.size(), Rational(0)));
    for (std::size_t i = 0; i < M.rows.size(); ++i)
        for (std::size_t j = 0; j < M.cols.size(); ++j) M.entries[i][j] = dof_evaluate(M.rows[i], forms[j]);
    return M;
}

}  // namespace blowup
