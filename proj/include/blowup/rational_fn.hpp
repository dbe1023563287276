#pragma once

#include "blowup/errors.hpp"
#include "blowup/flag.hpp"
#include "blowup/polynomial.hpp"

#include <map>
#include <span>
#include <string>
#include <utility>

namespace blowup {

namespace detail {

inline const Polynomial& subset_sum_power(const VertexSet& s, unsigned e) {
    thread_local std::map<std::pair<VertexSet, unsigned>, Polynomial> cache;
    auto key = std::make_pair(s, e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, Polynomial::subset_sum(s).pow(e)).first->second;
}

}  // namespace detail

// N / prod_S l_S^{e_S}; canonical once no l_S in the denominator divides N.
class RationalFn {
public:
    using Denominator = std::map<VertexSet, unsigned>;

    RationalFn() = default;
    RationalFn(const Polynomial& num) : num_(num) {}  // NOLINT(google-explicit-constructor)
    RationalFn(long c) : num_(c) {}                  // NOLINT(google-explicit-constructor)
    RationalFn(Polynomial num, Denominator den) : num_(std::move(num)), den_(std::move(den)) { canonicalize(); }

    static RationalFn var(Vertex v) { return RationalFn(Polynomial::var(v)); }
    static RationalFn subset_sum(const VertexSet& s) { return RationalFn(Polynomial::subset_sum(s)); }
    // 1 / l_S^e
    static RationalFn inverse_subset_sum(const VertexSet& s, unsigned e = 1) {
        if (s.empty()) throw std::invalid_argument("inverse_subset_sum: empty set");
        return RationalFn(Polynomial(1), Denominator{{s, e}});
    }

    const Polynomial& numerator() const { return num_; }
    const Denominator& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }

    unsigned denominator_degree() const {
        unsigned d = 0;
        for (const auto& [s, e] : den_) d += e;
        return d;
    }
    Polynomial denominator_polynomial() const {
        Polynomial p(1);
        for (const auto& [s, e] : den_) p *= detail::subset_sum_power(s, e);
        return p;
    }

    RationalFn operator-() const {
        RationalFn r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            RationalFn r;
            r.num_ = a.num_ + b.num_;
            r.den_ = a.den_;
            r.canonicalize();
            return r;
        }
        Denominator d = a.den_;
        for (const auto& [s, e] : b.den_) {
            auto& x = d[s];
            x = std::max(x, e);
        }
        RationalFn r;
        r.num_ = a.num_ * a.lift_to(d) + b.num_ * b.lift_to(d);
        r.den_ = std::move(d);
        r.canonicalize();
        return r;
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }
    RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
    RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }

    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        if (a.is_zero() || b.is_zero()) return {};
        RationalFn r;
        r.num_ = a.num_ * b.num_;
        r.den_ = a.den_;
        for (const auto& [s, e] : b.den_) r.den_[s] += e;
        r.canonicalize();
        return r;
    }
    RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }

    RationalFn scaled(const Rational& c) const {
        RationalFn r = *this;
        r.num_ = r.num_.scaled(c);
        if (r.num_.is_zero()) r.den_.clear();
        return r;
    }

    RationalFn divided_by_subset_sum(const VertexSet& s, unsigned e = 1) const {
        if (is_zero() || e == 0) return *this;
        RationalFn r = *this;
        r.den_[s] += e;
        r.canonicalize();
        return r;
    }

    RationalFn derivative(Vertex v) const {
        // d/dv (N/D) = N_v/D - sum_{S ∋ v} e_S N / (l_S D)
        RationalFn r(num_.derivative(v), den_);
        for (const auto& [s, e] : den_) {
            if (!s.contains(v)) continue;
            Denominator d = den_;
            d[s] += 1;
            r -= RationalFn(num_.scaled(Rational(e)), std::move(d));
        }
        return r;
    }

    std::vector<Vertex> variables() const {
        std::vector<Vertex> vs = num_.variables();
        for (const auto& [s, e] : den_) vs.insert(vs.end(), s.begin(), s.end());
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    // replace lambda_v by a polynomial; denominators must stay subset sums,
    // so only renamings v -> lambda_w are allowed in den
    RationalFn rename(const std::map<Vertex, Vertex>& m) const {
        std::map<Vertex, Polynomial> sub;
        for (const auto& [a, b] : m) sub.emplace(a, Polynomial::var(b));
        Denominator d;
        for (const auto& [s, e] : den_) {
            std::vector<Vertex> ids;
            for (Vertex v : s) {
                auto it = m.find(v);
                ids.push_back(it == m.end() ? v : it->second);
            }
            d[VertexSet(std::move(ids))] += e;
        }
        return RationalFn(num_.substitute(sub), std::move(d));
    }

    Rational evaluate(std::span<const Rational> x) const {
        Rational den = 1;
        for (const auto& [s, e] : den_) {
            Rational l = 0;
            for (Vertex v : s) l += x[v];
            for (unsigned i = 0; i < e; ++i) den *= l;
        }
        if (sgn(den) == 0) throw std::domain_error("RationalFn::evaluate: zero denominator");
        return num_.evaluate(x) / den;
    }
    double evaluate(std::span<const double> x) const {
        double den = 1;
        for (const auto& [s, e] : den_) {
            double l = 0;
            for (Vertex v : s) l += x[v];
            for (unsigned i = 0; i < e; ++i) den *= l;
        }
        return num_.evaluate(x) / den;
    }

    std::string to_string() const {
        if (den_.empty()) return num_.to_string();
        std::string s = "(" + num_.to_string() + ")/(";
        bool first = true;
        for (const auto& [v, e] : den_) {
            if (!first) s += '*';
            first = false;
            s += "l" + v.label();
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s + ")";
    }

    friend bool operator==(const RationalFn&, const RationalFn&) = default;

private:
    // prod l_S^{d_S - e_S}
    Polynomial lift_to(const Denominator& d) const {
        Polynomial p(1);
        for (const auto& [s, e] : d) {
            auto it = den_.find(s);
            unsigned have = it == den_.end() ? 0 : it->second;
            if (e > have) p *= detail::subset_sum_power(s, e - have);
        }
        return p;
    }

    void canonicalize() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        for (auto it = den_.begin(); it != den_.end();) {
            while (it->second > 0) {
                auto q = num_.divide_by_subset_sum(it->first);
                if (!q) break;
                num_ = std::move(*q);
                --it->second;
            }
            if (it->second == 0) it = den_.erase(it);
            else ++it;
        }
    }

    Polynomial num_;
    Denominator den_;
};

// lim_{eps->0+} f(lambda_B <- eps*lambda_B)
inline RationalFn dilation_limit(const RationalFn& f, const VertexSet& B) {
    if (f.is_zero()) return f;
    const int t_min = f.numerator().min_degree_in(B);
    int order = 0;
    RationalFn::Denominator lead;
    for (const auto& [s, e] : f.denominator()) {
        if (s.is_subset_of(B)) {
            order += static_cast<int>(e);
            lead[s] += e;
        } else {
            lead[s - B] += e;
        }
    }
    if (t_min > order) return {};
    if (t_min < order)
        throw DivergentLimit("dilation limit diverges: numerator order " + std::to_string(t_min) +
                             " < denominator order " + std::to_string(order) + " for " + f.to_string());
    return RationalFn(f.numerator().part_of_degree_in(B, static_cast<unsigned>(t_min)), std::move(lead));
}

// Single step lim_{rho_j -> 0}: dilate blocks j, j+1, ..., last.
inline RationalFn flag_limit(const RationalFn& f, const Flag& F, int j) {
    if (j < 1 || j >= static_cast<int>(F.block_count())) throw std::invalid_argument("flag_limit: j out of range");
    return dilation_limit(f, F.tail(static_cast<std::size_t>(j)));
}

// Limits for j = last, ..., 1 in that order.
inline RationalFn sequential_flag_limit(const RationalFn& f, const Flag& F) {
    RationalFn r = f;
    for (int j = static_cast<int>(F.block_count()) - 1; j >= 1; --j) r = flag_limit(r, F, j);
    return r;
}

// f(t*lambda) == t^d f(lambda) with t a fresh variable.
inline bool is_homogeneous(const RationalFn& f, int d) {
    if (f.is_zero()) return true;
    auto vars = f.variables();
    const Vertex t = vars.empty() ? 0 : vars.back() + 1;
    std::map<Vertex, Polynomial> sub;
    for (Vertex v : vars) sub.emplace(v, Polynomial(Monomial::var(v) * Monomial::var(t)));
    RationalFn::Denominator den = f.denominator();
    const VertexSet tset{t};
    if (f.denominator_degree()) den[tset] += f.denominator_degree();
    RationalFn scaled(f.numerator().substitute(sub), std::move(den));
    RationalFn expected = d >= 0 ? f * RationalFn(Polynomial(Monomial::var(t, static_cast<unsigned>(d))))
                                 : f.divided_by_subset_sum(tset, static_cast<unsigned>(-d));
    return scaled == expected;
}

// f(lambda / l_V): equal to f on the simplex l_V = 1 and homogeneous of degree 0.
inline RationalFn homogenize(const RationalFn& f, const VertexSet& V) {
    if (f.is_zero()) return f;
    const int top = f.numerator().degree();
    const int e = static_cast<int>(f.denominator_degree());
    Polynomial num;
    for (const auto& [m, c] : f.numerator().terms()) {
        Polynomial term(m, c);
        unsigned pad = static_cast<unsigned>(top - static_cast<int>(m.degree()));
        if (pad) term *= detail::subset_sum_power(V, pad);
        num += term;
    }
    RationalFn::Denominator den = f.denominator();
    if (top > e) den[V] += static_cast<unsigned>(top - e);
    else if (e > top) num *= detail::subset_sum_power(V, static_cast<unsigned>(e - top));
    return RationalFn(std::move(num), std::move(den));
}

}  // namespace blowup
