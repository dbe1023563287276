#pragma once

#include "blowup/rational_fn.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blowup {

// sorted indices of dlambda_{w1} ^ ... ^ dlambda_{wk}
using IndexSet = std::vector<Vertex>;

namespace detail {

// Sort w in place; returns the permutation sign, or 0 on a repeated index.
inline int sort_with_sign(IndexSet& w) {
    int sign = 1;
    for (std::size_t i = 1; i < w.size(); ++i)
        for (std::size_t j = i; j > 0 && w[j - 1] >= w[j]; --j) {
            if (w[j - 1] == w[j]) return 0;
            std::swap(w[j - 1], w[j]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i - 1] == w[i]) return 0;
    return sign;
}

}  // namespace detail

// Differential form of fixed degree with RationalFn coefficients.
class RationalForm {
public:
    using Terms = std::map<IndexSet, RationalFn>;

    explicit RationalForm(int degree = 0) : degree_(degree) {}

    static RationalForm scalar(const RationalFn& f) {
        RationalForm r(0);
        r.add_term({}, f);
        return r;
    }
    static RationalForm dlambda(const IndexSet& w) {
        RationalForm r(static_cast<int>(w.size()));
        r.add_term(w, RationalFn(1));
        return r;
    }
    static RationalForm dlambda(const VertexSet& w) { return dlambda(w.ids()); }

    int degree() const { return degree_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    RationalFn coefficient(const IndexSet& w) const {
        auto it = t_.find(w);
        return it == t_.end() ? RationalFn{} : it->second;
    }

    // indices in any order; the sign of the sort is absorbed
    void add_term(IndexSet w, const RationalFn& c) {
        if (static_cast<int>(w.size()) != degree_) throw std::invalid_argument("RationalForm: term degree mismatch");
        if (c.is_zero()) return;
        int s = detail::sort_with_sign(w);
        if (s == 0) return;
        auto it = t_.find(w);
        if (it == t_.end()) {
            t_.emplace(std::move(w), s > 0 ? c : -c);
            return;
        }
        it->second = s > 0 ? it->second + c : it->second - c;
        if (it->second.is_zero()) t_.erase(it);
    }

    RationalForm& operator+=(const RationalForm& o) {
        if (o.is_zero()) return *this;
        if (is_zero()) degree_ = o.degree_;
        if (o.degree_ != degree_) throw std::invalid_argument("RationalForm: adding forms of different degree");
        for (const auto& [w, c] : o.t_) add_term(w, c);
        return *this;
    }
    RationalForm operator-() const {
        RationalForm r = *this;
        for (auto& [w, c] : r.t_) c = -c;
        return r;
    }
    RationalForm& operator-=(const RationalForm& o) { return *this += -o; }
    friend RationalForm operator+(RationalForm a, const RationalForm& b) { return a += b; }
    friend RationalForm operator-(RationalForm a, const RationalForm& b) { return a -= b; }

    // coefficientwise product with a function
    friend RationalForm operator*(const RationalFn& f, const RationalForm& a) {
        RationalForm r(a.degree_);
        if (f.is_zero()) return r;
        for (const auto& [w, c] : a.t_) r.add_term(w, f * c);
        return r;
    }
    RationalForm scaled(const Rational& s) const {
        RationalForm r(degree_);
        for (const auto& [w, c] : t_) r.add_term(w, c.scaled(s));
        return r;
    }

    template <class Fn>
    RationalForm map_coefficients(Fn&& fn) const {
        RationalForm r(degree_);
        for (const auto& [w, c] : t_) r.add_term(w, fn(c));
        return r;
    }

    std::string to_string() const {
        if (t_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [w, c] : t_) {
            if (!first) s += " + ";
            first = false;
            s += "[" + c.to_string() + "]";
            for (Vertex v : w) s += " dl" + std::to_string(v);
        }
        return s;
    }

    friend bool operator==(const RationalForm& a, const RationalForm& b) {
        if (a.is_zero() && b.is_zero()) return true;
        return a.degree_ == b.degree_ && a.t_ == b.t_;
    }

private:
    int degree_;
    Terms t_;
};

inline RationalForm wedge(const RationalForm& a, const RationalForm& b) {
    RationalForm r(a.degree() + b.degree());
    for (const auto& [wa, ca] : a.terms())
        for (const auto& [wb, cb] : b.terms()) {
            IndexSet w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            r.add_term(std::move(w), ca * cb);
        }
    return r;
}

inline RationalForm exterior_derivative(const RationalForm& a) {
    RationalForm r(a.degree() + 1);
    for (const auto& [w, c] : a.terms())
        for (Vertex v : c.variables()) {
            if (std::binary_search(w.begin(), w.end(), v)) continue;
            IndexSet wv;
            wv.reserve(w.size() + 1);
            wv.push_back(v);
            wv.insert(wv.end(), w.begin(), w.end());
            r.add_term(std::move(wv), c.derivative(v));
        }
    return r;
}

// Interior product with X = sum_{i in S} lambda_i d/dlambda_i.
inline RationalForm contract_tautological(const RationalForm& a, const VertexSet& S) {
    if (a.degree() == 0) return RationalForm(0);
    RationalForm r(a.degree() - 1);
    for (const auto& [w, c] : a.terms())
        for (std::size_t m = 0; m < w.size(); ++m) {
            if (!S.contains(w[m])) continue;
            IndexSet rest = w;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(m));
            RationalFn coeff = c * RationalFn::var(w[m]);
            r.add_term(std::move(rest), m % 2 ? -coeff : coeff);
        }
    return r;
}

inline RationalForm flag_limit(const RationalForm& a, const Flag& F, int j) {
    return a.map_coefficients([&](const RationalFn& c) { return flag_limit(c, F, j); });
}

// Pull back to the simplex l_V = 1: eliminate dlambda_{max V}, then write each
// coefficient as a degree-0 function of lambda / l_V.
inline RationalForm pullback_to_simplex(const RationalForm& a, const VertexSet& V) {
    const Vertex top = V.back();
    RationalForm r(a.degree());
    for (const auto& [w, c] : a.terms()) {
        auto pos = std::find(w.begin(), w.end(), top);
        if (pos == w.end()) {
            r.add_term(w, c);
            continue;
        }
        for (Vertex i : V) {
            if (i == top) continue;
            IndexSet wi = w;
            wi[static_cast<std::size_t>(pos - w.begin())] = i;
            r.add_term(std::move(wi), -c);
        }
    }
    return r.map_coefficients([&](const RationalFn& c) { return homogenize(c, V); });
}

inline bool equal_on_simplex(const RationalForm& a, const RationalForm& b, const VertexSet& V) {
    return pullback_to_simplex(a - b, V).is_zero();
}

// Relabel variables (a bijection); dlambda indices and coefficients both move.
inline RationalForm rename(const RationalForm& a, const std::map<Vertex, Vertex>& m) {
    RationalForm r(a.degree());
    for (const auto& [w, c] : a.terms()) {
        IndexSet w2;
        for (Vertex v : w) {
            auto it = m.find(v);
            w2.push_back(it == m.end() ? v : it->second);
        }
        r.add_term(std::move(w2), c.rename(m));
    }
    return r;
}

}  // namespace blowup
