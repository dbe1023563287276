#pragma once

#include "blowup/errors.hpp"
#include "blowup/flag.hpp"
#include "blowup/linalg.hpp"
#include "blowup/rational_fn.hpp"
#include "blowup/shadow.hpp"

#include <map>
#include <string>
#include <vector>

namespace blowup {

struct HigherBasisCandidate {
    ArrivalSequence sequence;
    Flag flag;
    RationalFn probability;
};

namespace detail {

// all (r_i)_{i in A} with sum r, in lexicographic order of the count vector (descending first entry)
inline void compositions(const std::vector<Vertex>& A, unsigned r, std::size_t i, std::map<Vertex, unsigned>& cur,
                         std::vector<std::map<Vertex, unsigned>>& out) {
    if (i + 1 == A.size()) {
        cur[A[i]] = r;
        out.push_back(cur);
        return;
    }
    for (unsigned c = r + 1; c-- > 0;) {
        cur[A[i]] = c;
        compositions(A, r - c, i + 1, cur, out);
    }
}

// (r! / prod r_i!) prod (lambda_i / ell_A)^{r_i}
inline RationalFn round_probability(const VertexSet& A, const std::map<Vertex, unsigned>& counts, unsigned r) {
    Integer coef = factorial(r);
    Polynomial num(1);
    for (const auto& [v, c] : counts) {
        coef /= factorial(c);
        if (c) num = num * Polynomial::var(v).pow(c);
    }
    return RationalFn(num.scaled(Rational(coef))).divided_by_subset_sum(A, r);
}

inline void enumerate_rounds(const VertexSet& active, unsigned r, ArrivalSequence& seq, const RationalFn& p,
                             std::vector<HigherBasisCandidate>& out) {
    if (active.empty()) {
        out.push_back({seq, seq.flag(), p});
        return;
    }
    std::vector<std::map<Vertex, unsigned>> outcomes;
    std::map<Vertex, unsigned> cur;
    compositions(active.ids(), r, 0, cur, outcomes);
    for (auto& counts : outcomes) {
        std::vector<Vertex> hit;
        std::map<Vertex, unsigned> nonzero;
        for (const auto& [v, c] : counts)
            if (c) {
                hit.push_back(v);
                nonzero[v] = c;
            }
        VertexSet silenced(hit);
        RationalFn q = p * round_probability(active, nonzero, r);
        seq.rounds.push_back(nonzero);
        seq.silenced.push_back(silenced);
        enumerate_rounds(active - silenced, r, seq, q, out);
        seq.rounds.pop_back();
        seq.silenced.pop_back();
    }
}

}  // namespace detail

inline std::vector<HigherBasisCandidate> enumerate_experiments(const VertexSet& V, unsigned r) {
    if (r < 1) throw std::invalid_argument("enumerate_experiments: r must be at least 1");
    if (V.empty()) throw std::invalid_argument("enumerate_experiments: empty vertex set");
    std::vector<HigherBasisCandidate> out;
    ArrivalSequence seq;
    seq.degree = r;
    detail::enumerate_rounds(V, r, seq, RationalFn(1), out);
    return out;
}

// The experiment probability of one recorded sequence (zero if it cannot occur).
inline RationalFn experiment_probability(const VertexSet& V, const ArrivalSequence& seq) {
    VertexSet active = V;
    RationalFn p = RationalFn(1);
    for (std::size_t i = 0; i < seq.rounds.size(); ++i) {
        if (!seq.silenced[i].is_subset_of(active)) return RationalFn();
        p = p * detail::round_probability(active, seq.rounds[i], seq.degree);
        active = active - seq.silenced[i];
    }
    return active.empty() ? p : RationalFn();
}

inline bool r1_reduction_check(const VertexSet& V) {
    auto candidates = enumerate_experiments(V, 1);
    auto flags = enumerate_flags(V, 0);
    if (candidates.size() != flags.size()) return false;
    for (const auto& c : candidates)
        if (c.probability != shadow_form(c.flag).coefficient({})) return false;
    return true;
}

// Exact rank of a family of rational functions, cleared to a common denominator.
inline std::size_t independence_rank(const std::vector<RationalFn>& fns) {
    RationalFn::Denominator common;
    for (const auto& f : fns)
        for (const auto& [S, e] : f.denominator()) common[S] = std::max(common[S], e);
    std::map<Monomial, std::size_t> columns;
    std::vector<Polynomial> lifted;
    for (const auto& f : fns) {
        Polynomial p = f.numerator();
        for (const auto& [S, e] : common) {
            auto it = f.denominator().find(S);
            unsigned have = it == f.denominator().end() ? 0 : it->second;
            if (e > have) p = p * detail::subset_sum_power(S, e - have);
        }
        for (const auto& [m, c] : p.terms()) columns.emplace(m, columns.size());
        lifted.push_back(std::move(p));
    }
    SparseMatrix M(lifted.size(), columns.size());
    for (std::size_t i = 0; i < lifted.size(); ++i)
        for (const auto& [m, c] : lifted[i].terms()) M.set(i, columns.at(m), c);
    return rank(M);
}

inline std::size_t independence_rank(const std::vector<HigherBasisCandidate>& candidates) {
    std::vector<RationalFn> fns;
    for (const auto& c : candidates) fns.push_back(c.probability);
    return independence_rank(fns);
}

struct ContainmentRow {
    std::map<Vertex, unsigned> first_round;
    RationalFn sum;
    RationalFn expected;
};

// Summing candidates over the first round recovers the degree-r Bernstein polynomials.
inline std::vector<ContainmentRow> pr_containment(const VertexSet& V, unsigned r) {
    std::map<std::map<Vertex, unsigned>, RationalFn> groups;
    for (const auto& c : enumerate_experiments(V, r)) {
        auto key = c.sequence.rounds.front();
        for (Vertex v : V) key.emplace(v, 0);
        auto it = groups.find(key);
        if (it == groups.end()) groups.emplace(key, c.probability);
        else it->second = it->second + c.probability;
    }
    std::vector<ContainmentRow> rows;
    for (const auto& [counts, sum] : groups) {
        std::map<Vertex, unsigned> nonzero;
        for (const auto& [v, c] : counts)
            if (c) nonzero[v] = c;
        RationalFn expected = detail::round_probability(V, nonzero, r);
        if (sum != expected) throw IdentityFailed("first-round sum differs from the Bernstein polynomial");
        rows.push_back({counts, sum, expected});
    }
    return rows;
}

// True when the candidate's probability vanishes on the face of the blow-up indexed by F2.
inline bool face_vanishing_check(const HigherBasisCandidate& c, const Flag& F2) {
    return sequential_flag_limit(c.probability, F2).is_zero();
}

struct VanishingSummary {
    std::size_t pairs = 0;
    std::size_t nonzero = 0;
    std::size_t violations = 0;   // nonzero on a face whose flag the candidate does not refine
    std::size_t converse_gaps = 0;  // zero although the candidate refines the face flag
};

inline VanishingSummary face_vanishing_census(const VertexSet& V, unsigned r) {
    VanishingSummary s;
    auto candidates = enumerate_experiments(V, r);
    const int n = static_cast<int>(V.size()) - 1;
    for (int k = 0; k <= n; ++k)
        for (const auto& F2 : enumerate_flags(V, k))
            for (const auto& c : candidates) {
                ++s.pairs;
                bool zero = face_vanishing_check(c, F2);
                bool sub = refines(c.flag, F2);
                if (!zero) ++s.nonzero;
                if (!zero && !sub) ++s.violations;
                if (zero && sub) ++s.converse_gaps;
            }
    return s;
}

}  // namespace blowup
