#pragma once

#include "blowup/flag.hpp"
#include "blowup/form.hpp"

#include <vector>

namespace blowup {

// phi_W = n! i_X dlambda_W, n = |W| - 1
inline RationalForm whitney_form(const VertexSet& W) {
    if (W.empty()) throw std::invalid_argument("whitney_form: empty set");
    const Integer nf = factorial(static_cast<unsigned>(W.size() - 1));
    return contract_tautological(RationalForm::dlambda(W), W).scaled(Rational(nf));
}

// omega_W = phi_W / l_W^{|W|}
inline RationalForm omega_form(const VertexSet& W) {
    return RationalFn::inverse_subset_sum(W, static_cast<unsigned>(W.size())) * whitney_form(W);
}

// omega_F = omega_{V_0} ^ ... ^ omega_{V_last}
inline RationalForm omega_form(const Flag& F) {
    RationalForm r = RationalForm::scalar(RationalFn(1));
    for (const auto& b : F.blocks()) r = wedge(r, omega_form(b));
    return r;
}

// Probability that the |V_j|-th arrivals of Poisson processes with rates
// rho_j = l_{V_j} come in flag order, summed over arrival words.
inline RationalFn poisson_probability(const Flag& F) {
    const std::size_t m = F.block_count();
    RationalFn total;
    for (const auto& word : enumerate_arrival_sequences(F)) {
        std::vector<int> remaining;
        for (const auto& b : F.blocks()) remaining.push_back(static_cast<int>(b.size()));
        Polynomial num(1);
        RationalFn::Denominator den;
        for (int label : word.labels) {
            VertexSet active;
            std::size_t active_blocks = 0;
            for (std::size_t j = 0; j < m; ++j)
                if (remaining[j] > 0) {
                    active = active | F.block(j);
                    ++active_blocks;
                }
            if (active_blocks > 1) {
                num *= Polynomial::subset_sum(F.block(static_cast<std::size_t>(label)));
                den[active] += 1;
            }
            --remaining[static_cast<std::size_t>(label)];
        }
        total += RationalFn(std::move(num), std::move(den));
    }
    return total;
}

struct ShadowBasisElement {
    Flag flag;
    RationalForm form;
    RationalFn probability;
    RationalForm omega;
};

inline ShadowBasisElement shadow_element(const Flag& F) {
    ShadowBasisElement e{F, RationalForm(F.k()), poisson_probability(F), omega_form(F)};
    e.form = e.probability * e.omega;
    return e;
}

inline RationalForm shadow_form(const Flag& F) { return shadow_element(F).form; }

inline std::vector<ShadowBasisElement> shadow_basis(const VertexSet& V, int k) {
    std::vector<ShadowBasisElement> out;
    for (const auto& F : enumerate_flags(V, k)) out.push_back(shadow_element(F));
    return out;
}

}  // namespace blowup
