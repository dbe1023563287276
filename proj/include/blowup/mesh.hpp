#pragma once

#include "blowup/blowcx.hpp"
#include "blowup/errors.hpp"
#include "blowup/flag.hpp"
#include "blowup/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace blowup {

enum class ManifoldMode { Closed, Boundary, None };

inline std::string to_string(ManifoldMode m) {
    switch (m) {
        case ManifoldMode::Closed: return "closed";
        case ManifoldMode::Boundary: return "boundary";
        case ManifoldMode::None: return "none";
    }
    return "?";
}

class Triangulation {
public:
    Triangulation(int dimension, std::vector<VertexSet> cells, std::vector<int> orientation = {},
                  ManifoldMode mode = ManifoldMode::Boundary)
        : n_(dimension), cells_(std::move(cells)), orientation_(std::move(orientation)), mode_(mode) {
        validate();
        build_faces();
        check_manifold();
        if (orientation_.empty()) orient();
        else if (orientation_.size() != cells_.size()) throw MeshError("orientation length does not match cell count");
        for (int o : orientation_)
            if (o != 1 && o != -1) throw MeshError("orientation entries must be +1 or -1");
    }

    int dimension() const { return n_; }
    const std::vector<VertexSet>& cells() const { return cells_; }
    const VertexSet& cell(std::size_t i) const { return cells_.at(i); }
    int orientation(std::size_t i) const { return orientation_.at(i); }
    const std::vector<int>& orientations() const { return orientation_; }
    ManifoldMode mode() const { return mode_; }
    bool orientation_was_computed() const { return computed_orientation_; }

    std::vector<Vertex> vertices() const {
        std::vector<Vertex> v;
        for (const auto& f : faces_[0]) v.push_back(f.front());
        return v;
    }
    // faces of dimension d, sorted
    const std::vector<VertexSet>& faces(int d) const { return faces_.at(static_cast<std::size_t>(d)); }
    std::vector<std::size_t> f_vector() const {
        std::vector<std::size_t> f;
        for (const auto& x : faces_) f.push_back(x.size());
        return f;
    }
    long euler_characteristic() const {
        long chi = 0;
        for (std::size_t d = 0; d < faces_.size(); ++d) chi += (d % 2 ? -1 : 1) * static_cast<long>(faces_[d].size());
        return chi;
    }

    // cells containing K, ascending cell index
    const std::vector<std::size_t>& cofaces(const VertexSet& K) const {
        static const std::vector<std::size_t> none;
        auto it = incident_.find(K);
        return it == incident_.end() ? none : it->second;
    }

    // K lies in a facet that borders exactly one cell
    bool on_boundary(const VertexSet& K) const {
        for (const auto& F : boundary_facets_)
            if (K.is_subset_of(F)) return true;
        return false;
    }
    const std::vector<VertexSet>& boundary_facets() const { return boundary_facets_; }

    // components of the cell adjacency graph through shared facets
    std::size_t connected_components() const {
        std::vector<std::size_t> parent(cells_.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        if (n_ == 0) return cells_.size();
        for (const auto& F : faces_[static_cast<std::size_t>(n_ - 1)]) {
            const auto& inc = cofaces(F);
            for (std::size_t i = 1; i < inc.size(); ++i) parent[find(inc[i])] = find(inc[0]);
        }
        std::set<std::size_t> roots;
        for (std::size_t i = 0; i < cells_.size(); ++i) roots.insert(find(i));
        return roots.size();
    }

    static Triangulation from_json(const nlohmann::json& doc) {
        if (!doc.is_object()) throw MeshError("mesh document must be a JSON object");
        if (!doc.contains("dimension") || !doc["dimension"].is_number_integer()) throw MeshError("mesh: missing integer 'dimension'");
        if (!doc.contains("cells") || !doc["cells"].is_array()) throw MeshError("mesh: missing array 'cells'");
        int n = doc["dimension"].get<int>();
        std::vector<VertexSet> cells;
        for (const auto& c : doc["cells"]) {
            if (!c.is_array()) throw MeshError("mesh: each cell must be an array of vertex ids");
            std::vector<Vertex> ids;
            for (const auto& v : c) {
                if (!v.is_number_integer() || v.get<long>() < 0) throw MeshError("mesh: vertex ids must be non-negative integers");
                ids.push_back(static_cast<Vertex>(v.get<long>()));
            }
            try {
                cells.emplace_back(std::move(ids));
            } catch (const std::invalid_argument&) {
                throw MeshError("mesh: cell with repeated vertex");
            }
        }
        std::vector<int> orientation;
        if (doc.contains("orientation") && !doc["orientation"].is_null()) {
            if (!doc["orientation"].is_array()) throw MeshError("mesh: 'orientation' must be an array");
            for (const auto& o : doc["orientation"]) {
                if (!o.is_number_integer()) throw MeshError("mesh: orientation entries must be +1 or -1");
                orientation.push_back(o.get<int>());
            }
        }
        ManifoldMode mode = ManifoldMode::Boundary;
        if (doc.contains("manifold")) {
            if (!doc["manifold"].is_string()) throw MeshError("mesh: 'manifold' must be a string");
            std::string m = doc["manifold"].get<std::string>();
            if (m == "closed") mode = ManifoldMode::Closed;
            else if (m == "boundary") mode = ManifoldMode::Boundary;
            else if (m == "none") mode = ManifoldMode::None;
            else throw MeshError("mesh: 'manifold' must be closed, boundary or none");
        }
        return Triangulation(n, std::move(cells), std::move(orientation), mode);
    }

    static Triangulation from_string(const std::string& text) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw MeshError(std::string("mesh: invalid JSON: ") + e.what());
        }
        return from_json(doc);
    }

    static Triangulation load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw MeshError("mesh: cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return from_string(ss.str());
    }

    nlohmann::json to_json() const {
        nlohmann::json doc;
        doc["dimension"] = n_;
        doc["cells"] = nlohmann::json::array();
        for (const auto& c : cells_) doc["cells"].push_back(c.ids());
        doc["orientation"] = orientation_;
        doc["manifold"] = to_string(mode_);
        return doc;
    }

private:
    void validate() {
        if (n_ < 0) throw MeshError("mesh: negative dimension");
        if (cells_.empty()) throw MeshError("mesh: no cells");
        for (const auto& c : cells_)
            if (static_cast<int>(c.size()) != n_ + 1)
                throw MeshError("mesh: cell " + c.label() + " does not have dimension+1 vertices");
        std::set<VertexSet> seen;
        for (const auto& c : cells_)
            if (!seen.insert(c).second) throw MeshError("mesh: duplicate cell " + c.label());
    }

    void build_faces() {
        faces_.assign(static_cast<std::size_t>(n_ + 1), {});
        std::vector<std::set<VertexSet>> sets(static_cast<std::size_t>(n_ + 1));
        for (std::size_t t = 0; t < cells_.size(); ++t) {
            const auto& ids = cells_[t].ids();
            const std::size_t m = ids.size();
            for (unsigned mask = 1; mask < (1u << m); ++mask) {
                std::vector<Vertex> sub;
                for (std::size_t i = 0; i < m; ++i)
                    if (mask & (1u << i)) sub.push_back(ids[i]);
                VertexSet K(std::move(sub));
                sets[K.size() - 1].insert(K);
                incident_[K].push_back(t);
            }
        }
        for (std::size_t d = 0; d < sets.size(); ++d) faces_[d].assign(sets[d].begin(), sets[d].end());
        if (n_ >= 1)
            for (const auto& F : faces_[static_cast<std::size_t>(n_ - 1)])
                if (cofaces(F).size() == 1) boundary_facets_.push_back(F);
    }

    void check_manifold() {
        if (mode_ == ManifoldMode::None || n_ == 0) return;
        for (const auto& F : faces_[static_cast<std::size_t>(n_ - 1)]) {
            std::size_t c = cofaces(F).size();
            if (c > 2) throw MeshError("mesh: facet " + F.label() + " borders " + std::to_string(c) + " cells (non-manifold)");
            if (mode_ == ManifoldMode::Closed && c != 2)
                throw MeshError("mesh: facet " + F.label() + " is on the boundary of a mesh declared closed");
        }
        if (n_ == 2) {
            // vertex links must be connected (a path or a cycle)
            for (const auto& P : faces_[0]) {
                std::map<Vertex, std::vector<Vertex>> adj;
                for (std::size_t t : cofaces(P)) {
                    VertexSet e = cells_[t] - P;
                    adj[e[0]].push_back(e[1]);
                    adj[e[1]].push_back(e[0]);
                }
                std::set<Vertex> seen{adj.begin()->first};
                std::deque<Vertex> q{adj.begin()->first};
                while (!q.empty()) {
                    Vertex v = q.front();
                    q.pop_front();
                    for (Vertex w : adj[v])
                        if (seen.insert(w).second) q.push_back(w);
                }
                if (seen.size() != adj.size())
                    throw MeshError("mesh: link of vertex " + P.label() + " is disconnected (non-manifold)");
            }
        }
    }

    // sign of the facet orientation induced by cell t (all cells ascending)
    int induced(std::size_t t, const VertexSet& facet) const {
        VertexSet missing = cells_[t] - facet;
        int pos = cells_[t].index_of(missing.front());
        return pos % 2 ? -1 : 1;
    }

    void orient() {
        computed_orientation_ = true;
        orientation_.assign(cells_.size(), 0);
        if (n_ == 0) {
            std::fill(orientation_.begin(), orientation_.end(), 1);
            return;
        }
        std::map<std::size_t, std::vector<std::pair<std::size_t, int>>> adj;  // neighbour, relative sign
        for (const auto& F : faces_[static_cast<std::size_t>(n_ - 1)]) {
            const auto& inc = cofaces(F);
            if (inc.size() != 2) continue;
            // coherent iff induced orientations are opposite: o_a * s_a = -o_b * s_b
            int rel = -induced(inc[0], F) * induced(inc[1], F);
            adj[inc[0]].emplace_back(inc[1], rel);
            adj[inc[1]].emplace_back(inc[0], rel);
        }
        bool orientable = true;
        for (std::size_t s = 0; s < cells_.size(); ++s) {
            if (orientation_[s]) continue;
            orientation_[s] = 1;
            std::deque<std::size_t> q{s};
            while (!q.empty()) {
                std::size_t a = q.front();
                q.pop_front();
                for (auto [b, rel] : adj[a]) {
                    int want = orientation_[a] * rel;
                    if (!orientation_[b]) {
                        orientation_[b] = want;
                        q.push_back(b);
                    } else if (orientation_[b] != want) {
                        orientable = false;
                    }
                }
            }
        }
        if (!orientable) {
            if (mode_ != ManifoldMode::None) throw MeshError("mesh: triangulation is not orientable");
            std::fill(orientation_.begin(), orientation_.end(), 1);
            orientable_ = false;
        }
    }

public:
    bool orientable() const { return orientable_; }

private:
    int n_;
    std::vector<VertexSet> cells_;
    std::vector<int> orientation_;
    ManifoldMode mode_;
    bool computed_orientation_ = false;
    bool orientable_ = true;
    std::vector<std::vector<VertexSet>> faces_;
    std::map<VertexSet, std::vector<std::size_t>> incident_;
    std::vector<VertexSet> boundary_facets_;
};

enum class GluingRule { EdgeIdentified, EdgeConstant, VertexIdentified, CellDiscontinuous, General };

inline std::string to_string(GluingRule r) {
    switch (r) {
        case GluingRule::EdgeIdentified: return "edge-identified";
        case GluingRule::EdgeConstant: return "edge-constant";
        case GluingRule::VertexIdentified: return "vertex-identified";
        case GluingRule::CellDiscontinuous: return "cell-discontinuous";
        case GluingRule::General: return "general";
    }
    return "?";
}

inline GluingRule parse_gluing_rule(const std::string& s) {
    if (s == "edge-identified") return GluingRule::EdgeIdentified;
    if (s == "edge-constant") return GluingRule::EdgeConstant;
    if (s == "vertex-identified") return GluingRule::VertexIdentified;
    if (s == "cell-discontinuous") return GluingRule::CellDiscontinuous;
    if (s == "general" || s == "general-continuity") return GluingRule::General;
    throw std::invalid_argument("unknown gluing rule '" + s + "'");
}

inline bool rule_applies(GluingRule r, int n) { return r == GluingRule::General || n == 2; }

struct LocalDof {
    std::size_t cell;
    Flag flag;
    friend auto operator<=>(const LocalDof&, const LocalDof&) = default;
    friend bool operator==(const LocalDof&, const LocalDof&) = default;
};

// Per-cell flags relabeled to global ids.
inline std::vector<LocalDof> global_flags(const Triangulation& T, int k) {
    std::vector<LocalDof> out;
    for (std::size_t t = 0; t < T.cells().size(); ++t)
        for (auto& F : enumerate_flags(T.cell(t), k)) out.push_back({t, std::move(F)});
    return out;
}

// s(T, K) = o_T * parity of (V_K ascending, V_T minus V_K ascending)
inline int relative_sign(const Triangulation& T, std::size_t t, const VertexSet& K) {
    IndexSet order = K.ids();
    for (Vertex v : T.cell(t) - K) order.push_back(v);
    return T.orientation(t) * detail::sort_with_sign(order);
}

struct GlobalSpace {
    int k = 0;
    GluingRule rule = GluingRule::General;
    std::vector<LocalDof> local;
    SparseMatrix constraints;
    std::size_t constraint_rank = 0;
    Kernel basis;  // kernel of the constraints, free columns are the global DOFs
    std::vector<VertexSet> skipped_boundary_faces;
    std::size_t sum_zero_constraints = 0;     // codimension >= 2 groups
    std::size_t identification_constraints = 0;

    std::size_t dimension() const { return basis.basis.size(); }
    std::size_t index_of(const LocalDof& d) const {
        auto it = std::lower_bound(local.begin(), local.end(), d);
        if (it == local.end() || !(*it == d)) throw std::invalid_argument("GlobalSpace: unknown local dof");
        return static_cast<std::size_t>(it - local.begin());
    }
};

inline GlobalSpace assemble(const Triangulation& T, int k, GluingRule rule) {
    const int n = T.dimension();
    if (!rule_applies(rule, n))
        throw std::invalid_argument("gluing rule " + to_string(rule) + " only applies to 2D meshes");
    if (k < 0 || k > n) throw std::invalid_argument("assemble: degree out of range");
    GlobalSpace S;
    S.k = k;
    S.rule = rule;
    S.local = global_flags(T, k);
    std::sort(S.local.begin(), S.local.end());
    std::vector<SparseVector> rows;
    std::set<std::size_t> base;

    const bool scalar_variant = k == 0 && rule != GluingRule::General && rule != GluingRule::EdgeIdentified;
    const bool general_groups = !(rule == GluingRule::CellDiscontinuous);

    if (general_groups && !(scalar_variant && rule == GluingRule::VertexIdentified)) {
        // group by (K, F): K = V_T minus the last block, F = flag minus the last block
        std::map<std::pair<VertexSet, Flag>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < S.local.size(); ++i) {
            const auto& d = S.local[i];
            if (d.flag.block_count() < 2) continue;
            groups[{T.cell(d.cell) - d.flag.last_block(), d.flag.without_last()}].push_back(i);
        }
        std::set<VertexSet> skipped;
        for (const auto& [key, members] : groups) {
            const VertexSet& K = key.first;
            const bool codim1 = static_cast<int>(K.size()) == n;
            if (codim1 ? members.size() < 2 : T.on_boundary(K)) {
                if (!codim1) skipped.insert(K);
                continue;
            }
            SparseVector row;
            for (std::size_t i : members) row[i] = Rational(relative_sign(T, S.local[i].cell, K));
            // base element: the incident cell with the smallest vertex tuple
            std::size_t b = *std::min_element(members.begin(), members.end(), [&](std::size_t a, std::size_t c) {
                return T.cell(S.local[a].cell) < T.cell(S.local[c].cell);
            });
            base.insert(b);
            rows.push_back(std::move(row));
            if (codim1) ++S.identification_constraints;
            else ++S.sum_zero_constraints;
        }
        S.skipped_boundary_faces.assign(skipped.begin(), skipped.end());
    }

    auto equate = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        SparseVector row;
        row[a] = 1;
        row[b] = -1;
        rows.push_back(std::move(row));
        base.insert(std::max(a, b));
    };

    if (scalar_variant) {
        // flags (P, x, y) on triangle {P, x, y}
        if (rule == GluingRule::EdgeConstant) {
            for (std::size_t i = 0; i < S.local.size(); ++i) {
                const auto& f = S.local[i].flag;
                Flag swapped(std::vector<VertexSet>{f.block(1), f.block(0), f.block(2)});
                std::size_t j = S.index_of({S.local[i].cell, swapped});
                if (i < j) equate(i, j);
            }
        } else if (rule == GluingRule::VertexIdentified) {
            std::map<Vertex, std::vector<std::size_t>> at_vertex;
            for (std::size_t i = 0; i < S.local.size(); ++i) at_vertex[S.local[i].flag.block(0).front()].push_back(i);
            for (const auto& [v, members] : at_vertex)
                for (std::size_t m = 1; m < members.size(); ++m) equate(members[0], members[m]);
        } else if (rule == GluingRule::CellDiscontinuous) {
            std::map<std::pair<std::size_t, Vertex>, std::vector<std::size_t>> at_corner;
            for (std::size_t i = 0; i < S.local.size(); ++i)
                at_corner[{S.local[i].cell, S.local[i].flag.block(0).front()}].push_back(i);
            for (const auto& [key, members] : at_corner)
                for (std::size_t m = 1; m < members.size(); ++m) equate(members[0], members[m]);
        }
    }

    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    S.constraints = SparseMatrix(0, S.local.size());
    for (auto& r : rows) S.constraints.append_row(std::move(r));

    // base dofs pivot first so they are the eliminated ones
    std::vector<std::size_t> order(base.begin(), base.end());
    for (std::size_t i = 0; i < S.local.size(); ++i)
        if (!base.count(i)) order.push_back(i);
    S.basis = kernel(S.constraints, order);
    S.constraint_rank = S.local.size() - S.basis.basis.size();
    return S;
}

// Block-diagonal local coboundary: rows local (k+1)-dofs, cols local k-dofs.
inline SparseMatrix local_coboundary(const GlobalSpace& from, const GlobalSpace& to, const Triangulation& T) {
    (void)T;
    SparseMatrix D(to.local.size(), from.local.size());
    for (std::size_t j = 0; j < from.local.size(); ++j) {
        const auto& d = from.local[j];
        for (const auto& t : coboundary_terms(d.flag)) D.set(to.index_of({d.cell, t.flag}), j, Rational(t.sign));
    }
    return D;
}

struct GlobalComplex {
    std::vector<GlobalSpace> spaces;
    std::vector<SparseMatrix> coboundary;  // in global coordinates
    bool well_defined = true;              // constraints preserved by d
    bool dd_zero = true;
    std::vector<std::size_t> betti;

    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> d;
        for (const auto& s : spaces) d.push_back(s.dimension());
        return d;
    }
};

inline GlobalComplex assemble_complex(const Triangulation& T, GluingRule rule) {
    GlobalComplex G;
    const int n = T.dimension();
    for (int k = 0; k <= n; ++k) {
        // the scalar variants only differ in degree 0; higher degrees use the general rule,
        // except the discontinuous gluing which leaves them unconstrained
        GluingRule r = rule;
        if (k > 0 && rule != GluingRule::CellDiscontinuous) r = GluingRule::General;
        if (k > 0 && rule == GluingRule::CellDiscontinuous) {
            GlobalSpace S;
            S.k = k;
            S.rule = rule;
            S.local = global_flags(T, k);
            std::sort(S.local.begin(), S.local.end());
            S.constraints = SparseMatrix(0, S.local.size());
            S.basis = kernel(S.constraints);
            G.spaces.push_back(std::move(S));
            continue;
        }
        G.spaces.push_back(assemble(T, k, r));
    }
    for (int k = 0; k < n; ++k) {
        const auto& A = G.spaces[static_cast<std::size_t>(k)];
        const auto& B = G.spaces[static_cast<std::size_t>(k + 1)];
        SparseMatrix D = local_coboundary(A, B, T);
        SparseMatrix DB = D * from_columns(A.basis.basis, A.local.size());
        if (!(B.constraints * DB).is_zero()) G.well_defined = false;
        SparseMatrix glob(B.dimension(), A.dimension());
        for (std::size_t i = 0; i < B.basis.free_columns.size(); ++i)
            for (const auto& [j, v] : DB.row(B.basis.free_columns[i])) glob.set(i, j, v);
        G.coboundary.push_back(std::move(glob));
    }
    for (std::size_t k = 0; k + 1 < G.coboundary.size(); ++k)
        if (!(G.coboundary[k + 1] * G.coboundary[k]).is_zero()) G.dd_zero = false;
    std::vector<std::size_t> ranks;
    for (const auto& d : G.coboundary) ranks.push_back(rank(d));
    for (std::size_t k = 0; k < G.spaces.size(); ++k) {
        std::size_t out = k < ranks.size() ? ranks[k] : 0;
        std::size_t in = k > 0 ? ranks[k - 1] : 0;
        G.betti.push_back(G.spaces[k].dimension() - out - in);
    }
    return G;
}

// Betti numbers of the ordinary simplicial cochain complex.
inline std::vector<std::size_t> simplicial_cohomology(const Triangulation& T) {
    const int n = T.dimension();
    std::vector<std::size_t> ranks;
    for (int d = 0; d < n; ++d) {
        const auto& lo = T.faces(d);
        const auto& hi = T.faces(d + 1);
        SparseMatrix D(hi.size(), lo.size());
        for (std::size_t i = 0; i < hi.size(); ++i)
            for (std::size_t m = 0; m < hi[i].size(); ++m) {
                VertexSet f = hi[i].without(hi[i][m]);
                std::size_t j = static_cast<std::size_t>(std::lower_bound(lo.begin(), lo.end(), f) - lo.begin());
                D.set(i, j, Rational(m % 2 ? -1 : 1));
            }
        ranks.push_back(rank(D));
    }
    std::vector<std::size_t> b;
    for (int d = 0; d <= n; ++d) {
        std::size_t out = d < n ? ranks[static_cast<std::size_t>(d)] : 0;
        std::size_t in = d > 0 ? ranks[static_cast<std::size_t>(d - 1)] : 0;
        b.push_back(T.faces(d).size() - out - in);
    }
    return b;
}

struct CohomologyReport {
    std::vector<std::size_t> dims;
    std::vector<std::size_t> betti_blowup;
    std::vector<std::size_t> betti_simplicial;
    bool match = false;
    bool dd_zero = false;
    bool well_defined = false;
    std::size_t components = 0;
    bool h0_matches_components = false;
    std::vector<VertexSet> skipped_boundary_faces;
};

inline CohomologyReport global_cohomology(const Triangulation& T, GluingRule rule) {
    GlobalComplex G = assemble_complex(T, rule);
    CohomologyReport r;
    r.dims = G.dims();
    r.betti_blowup = G.betti;
    r.betti_simplicial = simplicial_cohomology(T);
    r.match = r.betti_blowup == r.betti_simplicial;
    r.dd_zero = G.dd_zero;
    r.well_defined = G.well_defined;
    r.components = T.connected_components();
    r.h0_matches_components = !r.betti_blowup.empty() && r.betti_blowup[0] == r.components;
    std::set<VertexSet> skipped;
    for (const auto& s : G.spaces) skipped.insert(s.skipped_boundary_faces.begin(), s.skipped_boundary_faces.end());
    r.skipped_boundary_faces.assign(skipped.begin(), skipped.end());
    if (!r.dd_zero) throw IdentityFailed("global coboundary does not square to zero under rule " + to_string(rule));
    return r;
}

}  // namespace blowup
