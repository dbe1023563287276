#pragma once

#include "blowup/flag.hpp"
#include "blowup/form.hpp"
#include "blowup/rational_fn.hpp"

#include <json.hpp>

#include <string>

namespace blowup {

inline nlohmann::json to_json(const Polynomial& p) {
    auto out = nlohmann::json::array();
    for (const auto& [m, c] : p.terms()) {
        auto mono = nlohmann::json::array();
        for (const auto& [v, e] : m.factors()) mono.push_back({v, e});
        out.push_back({{"c", c.get_str()}, {"m", mono}});
    }
    return out;
}

inline nlohmann::json to_json(const RationalFn& f) {
    auto den = nlohmann::json::array();
    for (const auto& [S, e] : f.denominator()) den.push_back({{"S", S.ids()}, {"e", e}});
    return {{"num", to_json(f.numerator())}, {"den", den}};
}

inline nlohmann::json to_json(const RationalForm& a) {
    auto terms = nlohmann::json::array();
    for (const auto& [w, c] : a.terms()) terms.push_back({{"dlambda", w}, {"coef", to_json(c)}});
    return {{"degree", a.degree()}, {"terms", terms}};
}

inline Polynomial polynomial_from_json(const nlohmann::json& j) {
    Polynomial p;
    for (const auto& t : j) {
        std::vector<Monomial::Factor> f;
        for (const auto& x : t.at("m")) f.emplace_back(x.at(0).get<Vertex>(), x.at(1).get<unsigned>());
        p += Polynomial(Monomial::from_factors(std::move(f)), Rational(t.at("c").get<std::string>()));
    }
    return p;
}

inline RationalFn rational_fn_from_json(const nlohmann::json& j) {
    RationalFn::Denominator den;
    for (const auto& d : j.at("den")) den[VertexSet(d.at("S").get<std::vector<Vertex>>())] = d.at("e").get<unsigned>();
    return RationalFn(polynomial_from_json(j.at("num")), std::move(den));
}

inline RationalForm form_from_json(const nlohmann::json& j) {
    RationalForm a(j.at("degree").get<int>());
    for (const auto& t : j.at("terms")) a.add_term(t.at("dlambda").get<IndexSet>(), rational_fn_from_json(t.at("coef")));
    return a;
}

namespace latex {

inline std::string subset_sum(const VertexSet& S) {
    std::string s = S.label();
    return S.size() == 1 && s.size() == 1 ? "\\lambda_" + s : "\\lambda_{" + s + "}";
}

inline std::string rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return "\\tfrac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

inline std::string monomial(const Monomial& m) {
    std::string s;
    for (const auto& [v, e] : m.factors()) {
        s += subset_sum(VertexSet{v});
        if (e > 1) s += "^{" + std::to_string(e) + "}";
    }
    return s;
}

inline std::string polynomial(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        Rational a = abs(c);
        if (!first) s += sgn(c) < 0 ? " - " : " + ";
        else if (sgn(c) < 0) s += "-";
        first = false;
        if (m.is_one()) s += rational(a);
        else s += (a == 1 ? "" : rational(a)) + monomial(m);
    }
    return s;
}

inline std::string fn(const RationalFn& f) {
    std::string num = polynomial(f.numerator());
    if (f.denominator().empty()) return num;
    std::string den;
    for (const auto& [S, e] : f.denominator()) {
        den += subset_sum(S);
        if (e > 1) den += "^{" + std::to_string(e) + "}";
    }
    return "\\frac{" + num + "}{" + den + "}";
}

inline std::string form(const RationalForm& a) {
    if (a.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : a.terms()) {
        if (!first) s += " + ";
        first = false;
        s += "\\left(" + fn(c) + "\\right)";
        for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " \\wedge d\\lambda_" : " \\, d\\lambda_") + std::to_string(w[i]);
    }
    return s;
}

// 0|1,2 -> 0\{12\}; single vertices stay bare, larger blocks are braced
inline std::string flag(const Flag& F) {
    std::string s;
    for (const auto& b : F.blocks()) s += b.size() == 1 ? b.label() : "\\{" + b.label() + "\\}";
    return s;
}

}  // namespace latex

}  // namespace blowup
