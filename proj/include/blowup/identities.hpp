#pragma once

#include "blowup/dof.hpp"
#include "blowup/errors.hpp"
#include "blowup/shadow.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace blowup {

// Memoized psi_F; not thread-safe.
class ShadowCache {
public:
    const RationalForm& form(const Flag& F) {
        auto it = forms_.find(F);
        if (it != forms_.end()) return it->second;
        return forms_.emplace(F, shadow_form(F)).first->second;
    }

private:
    std::map<Flag, RationalForm> forms_;
};

struct SignedFlag {
    int sign;
    Flag flag;
};

// d psi_F = sum_j c_j psi_{coarsen(F, j)}, c_j read off with the DOFs and
// then checked as a form identity (homogeneous first, simplex otherwise).
inline std::vector<SignedFlag> d_decomposition(const Flag& F, ShadowCache& cache) {
    const VertexSet V = F.parent();
    const RationalForm dpsi = exterior_derivative(cache.form(F));
    std::vector<SignedFlag> out;
    RationalForm rhs(F.k() + 1);
    for (int j = 1; j < static_cast<int>(F.block_count()); ++j) {
        Flag Fj = coarsen(F, j);
        Rational c = dof_evaluate(Fj, dpsi);
        if (c != 1 && c != -1)
            throw DecompositionFailed("d psi_" + F.shorthand() + ": coefficient of psi_" + Fj.shorthand() + " is " +
                                      c.get_str());
        const int s = c > 0 ? 1 : -1;
        out.push_back({s, Fj});
        rhs += cache.form(Fj).scaled(Rational(s));
    }
    if (!(dpsi == rhs) && !equal_on_simplex(dpsi, rhs, V))
        throw DecompositionFailed("d psi_" + F.shorthand() + " differs from the signed sum of coarsenings");
    return out;
}

inline std::vector<SignedFlag> d_decomposition(const Flag& F) {
    ShadowCache cache;
    return d_decomposition(F, cache);
}

// Flags (W, v_1, ..., v_m) over all orders of V \ W; their psi sum to phi_W on the simplex.
inline std::vector<Flag> whitney_containment(const VertexSet& W, const VertexSet& V, ShadowCache& cache) {
    if (W.empty() || !W.is_subset_of(V)) throw std::invalid_argument("whitney_containment: need nonempty W within V");
    std::vector<Vertex> rest = (V - W).ids();
    std::vector<Flag> flags;
    do {
        std::vector<VertexSet> blocks{W};
        for (Vertex v : rest) blocks.push_back(VertexSet{v});
        flags.emplace_back(std::move(blocks));
    } while (std::next_permutation(rest.begin(), rest.end()));
    RationalForm sum(static_cast<int>(W.size()) - 1);
    for (const auto& F : flags) sum += cache.form(F);
    if (!equal_on_simplex(sum, whitney_form(W), V))
        throw IdentityFailed("sum of psi over containment flags differs from phi_" + W.label());
    std::sort(flags.begin(), flags.end());
    return flags;
}

inline std::vector<Flag> whitney_containment(const VertexSet& W, const VertexSet& V) {
    ShadowCache cache;
    return whitney_containment(W, V, cache);
}

// lim_{rho_last -> 0} p_F == p_{F minus last block}
inline std::pair<Flag, bool> reduce_dimension(const Flag& F) {
    if (F.block_count() < 2) throw std::invalid_argument("reduce_dimension: flag has a single block");
    Flag reduced = F.without_last();
    RationalFn lim = flag_limit(poisson_probability(F), F, static_cast<int>(F.block_count()) - 1);
    return {reduced, lim == poisson_probability(reduced)};
}

// +1 / -1 if a == +-b exactly, 0 otherwise
inline int sign_match(const RationalForm& a, const RationalForm& b) {
    if (a == b) return 1;
    if (a == -b) return -1;
    return 0;
}

}  // namespace blowup
