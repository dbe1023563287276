#pragma once

#include "blowup/budget.hpp"
#include "blowup/dof.hpp"
#include "blowup/errors.hpp"
#include "blowup/identities.hpp"
#include "blowup/linalg.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace blowup {

// Signs of d psi_F for every flag on {0, ..., n}. The signs only depend on the
// flag up to monotone relabeling, so one table serves every n-simplex.
class CoboundaryTable {
public:
    static const CoboundaryTable& get(int n, const Deadline& deadline = {}) {
        static std::mutex mu;
        static std::map<int, std::unique_ptr<CoboundaryTable>> tables;
        std::lock_guard<std::mutex> lock(mu);
        auto it = tables.find(n);
        if (it != tables.end()) return *it->second;
        auto t = std::unique_ptr<CoboundaryTable>(new CoboundaryTable(n, deadline));
        return *tables.emplace(n, std::move(t)).first->second;
    }

    int n() const { return n_; }
    const std::vector<SignedFlag>& terms(const Flag& canonical) const { return signs_.at(canonical); }

private:
    CoboundaryTable(int n, const Deadline& deadline) : n_(n) {
        ShadowCache cache;
        const VertexSet V = VertexSet::range(static_cast<Vertex>(n + 1));
        for (int k = 0; k <= n; ++k)
            for (const auto& F : enumerate_flags(V, k)) {
                if (deadline.expired()) throw BudgetExceeded("coboundary table for n=" + std::to_string(n));
                signs_.emplace(F, d_decomposition(F, cache));
            }
    }

    int n_;
    std::map<Flag, std::vector<SignedFlag>> signs_;
};

// monotone relabelings between V and {0, ..., |V|-1}
inline std::map<Vertex, Vertex> to_canonical(const VertexSet& V) {
    std::map<Vertex, Vertex> m;
    for (std::size_t i = 0; i < V.size(); ++i) m[V[i]] = static_cast<Vertex>(i);
    return m;
}
inline std::map<Vertex, Vertex> from_canonical(const VertexSet& V) {
    std::map<Vertex, Vertex> m;
    for (std::size_t i = 0; i < V.size(); ++i) m[static_cast<Vertex>(i)] = V[i];
    return m;
}

// d psi_F = sum sign * psi_G for a flag on any vertex set
inline std::vector<SignedFlag> coboundary_terms(const Flag& F, const Deadline& deadline = {}) {
    const VertexSet V = F.parent();
    const auto& table = CoboundaryTable::get(static_cast<int>(V.size()) - 1, deadline);
    auto out = table.terms(relabel_flag(F, to_canonical(V)));
    const auto back = from_canonical(V);
    for (auto& t : out) t.flag = relabel_flag(t.flag, back);
    return out;
}

struct BlowupComplex {
    VertexSet vertices;
    std::vector<std::vector<Flag>> cells;   // cells[k]: k-dimensional faces
    std::vector<SparseMatrix> coboundary;   // coboundary[k]: cells[k+1] x cells[k]

    std::vector<std::size_t> f_vector() const {
        std::vector<std::size_t> f;
        for (const auto& c : cells) f.push_back(c.size());
        return f;
    }
    std::size_t index_of(int k, const Flag& F) const {
        const auto& c = cells.at(static_cast<std::size_t>(k));
        auto it = std::lower_bound(c.begin(), c.end(), F);
        if (it == c.end() || *it != F) throw std::invalid_argument("BlowupComplex: unknown cell " + F.shorthand());
        return static_cast<std::size_t>(it - c.begin());
    }
};

inline BlowupComplex build_blowup_complex(const VertexSet& V, const Deadline& deadline = {}) {
    if (V.empty() || V.size() > 6) throw std::invalid_argument("build_blowup_complex: need 1 <= |V| <= 6");
    BlowupComplex cx;
    cx.vertices = V;
    const int n = static_cast<int>(V.size()) - 1;
    for (int k = 0; k <= n; ++k) cx.cells.push_back(enumerate_flags(V, k));
    for (int k = 0; k < n; ++k) {
        SparseMatrix d(cx.cells[static_cast<std::size_t>(k + 1)].size(), cx.cells[static_cast<std::size_t>(k)].size());
        for (std::size_t j = 0; j < cx.cells[static_cast<std::size_t>(k)].size(); ++j)
            for (const auto& t : coboundary_terms(cx.cells[static_cast<std::size_t>(k)][j], deadline))
                d.set(cx.index_of(k + 1, t.flag), j, Rational(t.sign));
        cx.coboundary.push_back(std::move(d));
    }
    return cx;
}

inline std::vector<std::size_t> betti_numbers(const BlowupComplex& cx) {
    std::vector<std::size_t> ranks;
    for (const auto& d : cx.coboundary) ranks.push_back(rank(d));
    std::vector<std::size_t> b;
    for (std::size_t k = 0; k < cx.cells.size(); ++k) {
        std::size_t out = k < ranks.size() ? ranks[k] : 0;
        std::size_t in = k > 0 ? ranks[k - 1] : 0;
        b.push_back(cx.cells[k].size() - out - in);
    }
    return b;
}

inline bool coboundary_squares_to_zero(const BlowupComplex& cx) {
    for (std::size_t k = 0; k + 1 < cx.coboundary.size(); ++k)
        if (!(cx.coboundary[k + 1] * cx.coboundary[k]).is_zero()) return false;
    return true;
}

// nonzero (G, F) exactly when G is a one-merge coarsening of F
inline bool support_matches_coarsening(const BlowupComplex& cx) {
    for (std::size_t k = 0; k < cx.coboundary.size(); ++k)
        for (std::size_t j = 0; j < cx.cells[k].size(); ++j) {
            const Flag& F = cx.cells[k][j];
            std::vector<std::size_t> expected;
            for (int m = 1; m < static_cast<int>(F.block_count()); ++m)
                expected.push_back(cx.index_of(static_cast<int>(k) + 1, coarsen(F, m)));
            std::sort(expected.begin(), expected.end());
            std::vector<std::size_t> actual;
            for (std::size_t i = 0; i < cx.coboundary[k].rows(); ++i)
                if (sgn(cx.coboundary[k].get(i, j)) != 0) actual.push_back(i);
            if (actual != expected) return false;
            for (std::size_t i : actual) {
                Rational v = cx.coboundary[k].get(i, j);
                if (v != 1 && v != -1) return false;
            }
        }
    return true;
}

// (Psi_G(d psi_F))_G equals column F of the coboundary, for every F.
inline bool verify_cochain_isomorphism(const BlowupComplex& cx, const Deadline& deadline = {}) {
    ShadowCache cache;
    for (std::size_t k = 0; k < cx.coboundary.size(); ++k)
        for (std::size_t j = 0; j < cx.cells[k].size(); ++j) {
            if (deadline.expired()) throw BudgetExceeded("cochain isomorphism check");
            RationalForm dpsi = exterior_derivative(cache.form(cx.cells[k][j]));
            for (std::size_t i = 0; i < cx.cells[k + 1].size(); ++i)
                if (dof_evaluate(cx.cells[k + 1][i], dpsi) != cx.coboundary[k].get(i, j)) return false;
        }
    return true;
}

}  // namespace blowup
