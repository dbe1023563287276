#pragma once

#include "blowup/flag.hpp"
#include "blowup/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace blowup {

// Product of powers of lambda variables, stored as sorted (var, exponent) pairs.
class Monomial {
public:
    using Factor = std::pair<Vertex, unsigned>;

    Monomial() = default;
    static Monomial var(Vertex v, unsigned e = 1) {
        Monomial m;
        if (e) m.f_.emplace_back(v, e);
        return m;
    }
    static Monomial from_factors(std::vector<Factor> f) {
        Monomial m;
        std::sort(f.begin(), f.end());
        for (auto& [v, e] : f) {
            if (!e) continue;
            if (!m.f_.empty() && m.f_.back().first == v) m.f_.back().second += e;
            else m.f_.emplace_back(v, e);
        }
        return m;
    }

    const std::vector<Factor>& factors() const { return f_; }
    bool is_one() const { return f_.empty(); }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [v, e] : f_) d += e;
        return d;
    }
    unsigned degree_in(const VertexSet& s) const {
        unsigned d = 0;
        for (const auto& [v, e] : f_)
            if (s.contains(v)) d += e;
        return d;
    }
    unsigned exponent(Vertex v) const {
        for (const auto& [w, e] : f_)
            if (w == v) return e;
        return 0;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.f_.reserve(f_.size() + o.f_.size());
        auto a = f_.begin();
        auto b = o.f_.begin();
        while (a != f_.end() || b != o.f_.end()) {
            if (b == o.f_.end() || (a != f_.end() && a->first < b->first)) r.f_.push_back(*a++);
            else if (a == f_.end() || b->first < a->first) r.f_.push_back(*b++);
            else {
                r.f_.emplace_back(a->first, a->second + b->second);
                ++a;
                ++b;
            }
        }
        return r;
    }

    // this / v^e, assuming exponent(v) >= e
    Monomial reduced(Vertex v, unsigned e = 1) const {
        Monomial r;
        for (const auto& [w, x] : f_) {
            if (w != v) r.f_.emplace_back(w, x);
            else if (x > e) r.f_.emplace_back(w, x - e);
        }
        return r;
    }

    std::string to_string() const {
        if (f_.empty()) return "1";
        std::string s;
        for (std::size_t i = 0; i < f_.size(); ++i) {
            if (i) s += '*';
            s += "l" + std::to_string(f_[i].first);
            if (f_[i].second > 1) s += "^" + std::to_string(f_[i].second);
        }
        return s;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;

private:
    std::vector<Factor> f_;
};

// Sparse polynomial in the lambda variables with exact rational coefficients.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational>;

    Polynomial() = default;
    Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
        if (sgn(c) != 0) t_.emplace(Monomial{}, c);
    }
    Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    Polynomial(const Monomial& m, const Rational& c = 1) {
        if (sgn(c) != 0) t_.emplace(m, c);
    }

    static Polynomial var(Vertex v) { return Polynomial(Monomial::var(v)); }

    // l_S = sum of lambda_i over S
    static Polynomial subset_sum(const VertexSet& s) {
        Polynomial p;
        for (Vertex v : s) p.t_.emplace(Monomial::var(v), Rational(1));
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one()); }
    Rational constant_term() const {
        auto it = t_.find(Monomial{});
        return it == t_.end() ? Rational(0) : it->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (sgn(c) == 0) return;
        auto [it, inserted] = t_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) t_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& [m, c] : r.t_) c = -c;
        return r;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial scaled(const Rational& s) const {
        if (sgn(s) == 0) return {};
        Polynomial r = *this;
        for (auto& [m, c] : r.t_) c *= s;
        return r;
    }

    Polynomial pow(unsigned e) const {
        Polynomial r(1);
        Polynomial base = *this;
        while (e) {
            if (e & 1u) r *= base;
            e >>= 1u;
            if (e) base *= base;
        }
        return r;
    }

    Polynomial derivative(Vertex v) const {
        Polynomial r;
        for (const auto& [m, c] : t_) {
            unsigned e = m.exponent(v);
            if (e) r.add_term(m.reduced(v), c * e);
        }
        return r;
    }

    // max total degree, -1 for zero
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : t_) d = std::max(d, static_cast<int>(m.degree()));
        return d;
    }
    int min_degree() const {
        int d = -1;
        for (const auto& [m, c] : t_) {
            int x = static_cast<int>(m.degree());
            if (d < 0 || x < d) d = x;
        }
        return d;
    }
    bool is_homogeneous() const { return degree() == min_degree(); }

    std::vector<Vertex> variables() const {
        std::vector<Vertex> vs;
        for (const auto& [m, c] : t_)
            for (const auto& [v, e] : m.factors()) vs.push_back(v);
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    // Exact division by l_S, treating l_S as monic in its smallest variable.
    std::optional<Polynomial> divide_by_subset_sum(const VertexSet& s) const {
        if (s.empty()) return std::nullopt;
        if (t_.empty()) return Polynomial{};
        const Vertex lead = s.front();
        Polynomial rem = *this;
        Polynomial quot;
        while (true) {
            const Monomial* best = nullptr;
            unsigned best_e = 0;
            for (const auto& [m, c] : rem.t_) {
                unsigned e = m.exponent(lead);
                if (e > best_e) {
                    best_e = e;
                    best = &m;
                }
            }
            if (!best) break;
            const Monomial q = best->reduced(lead);
            const Rational c = rem.t_.at(*best);
            quot.add_term(q, c);
            for (Vertex v : s) rem.add_term(q * Monomial::var(v), -c);
        }
        if (!rem.is_zero()) return std::nullopt;
        return quot;
    }

    // replace lambda_v by value for every v present in the map
    Polynomial substitute(const std::map<Vertex, Polynomial>& values) const {
        Polynomial r;
        for (const auto& [m, c] : t_) {
            Polynomial term(c);
            Monomial rest;
            for (const auto& [v, e] : m.factors()) {
                auto it = values.find(v);
                if (it == values.end()) rest = rest * Monomial::var(v, e);
                else term *= it->second.pow(e);
            }
            r += term * Polynomial(rest);
        }
        return r;
    }

    // sum of the terms whose degree in s equals d
    Polynomial part_of_degree_in(const VertexSet& s, unsigned d) const {
        Polynomial r;
        for (const auto& [m, c] : t_)
            if (m.degree_in(s) == d) r.t_.emplace(m, c);
        return r;
    }
    int min_degree_in(const VertexSet& s) const {
        int d = -1;
        for (const auto& [m, c] : t_) {
            int x = static_cast<int>(m.degree_in(s));
            if (d < 0 || x < d) d = x;
        }
        return d;
    }

    // values indexed by vertex id
    Rational evaluate(std::span<const Rational> x) const {
        Rational s = 0;
        for (const auto& [m, c] : t_) {
            Rational p = c;
            for (const auto& [v, e] : m.factors())
                for (unsigned i = 0; i < e; ++i) p *= x[v];
            s += p;
        }
        return s;
    }
    double evaluate(std::span<const double> x) const {
        double s = 0;
        for (const auto& [m, c] : t_) {
            double p = c.get_d();
            for (const auto& [v, e] : m.factors())
                for (unsigned i = 0; i < e; ++i) p *= x[v];
            s += p;
        }
        return s;
    }

    std::string to_string() const {
        if (t_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [m, c] : t_) {
            if (!first) s += " + ";
            first = false;
            if (m.is_one()) s += c.get_str();
            else if (c == 1) s += m.to_string();
            else s += c.get_str() + "*" + m.to_string();
        }
        return s;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    Terms t_;
};

}  // namespace blowup
