#pragma once

// Hand-written closed forms for representative flags, built from primitives
// independently of the arrival-word machinery. Used as regression oracles.

#include "blowup/shadow.hpp"

#include <string>
#include <vector>

namespace blowup {

struct TabulatedForm {
    std::string flag;  // shorthand
    int k;
    RationalForm form;
};

struct TabulatedScalar {
    std::string flag;
    std::string sequence;
    RationalFn value;
};

namespace detail {

inline RationalFn lam(Vertex v) { return RationalFn::var(v); }
inline RationalFn inv(std::initializer_list<Vertex> s, unsigned e = 1) {
    return RationalFn::inverse_subset_sum(VertexSet(s), e);
}
inline RationalForm phi(std::initializer_list<Vertex> s) { return whitney_form(VertexSet(s)); }
inline RationalForm scalar(const RationalFn& f) { return RationalForm::scalar(f); }

}  // namespace detail

// n = 2 or 3
inline std::vector<TabulatedForm> tabulated_shadow_forms(int n) {
    using namespace detail;
    std::vector<TabulatedForm> t;
    if (n == 2) {
        t.push_back({"012", 0, scalar(lam(0) * lam(1) * inv({0, 1, 2}) * inv({1, 2}))});
        t.push_back({"{01}2", 1, inv({0, 1, 2}, 2) * phi({0, 1})});
        t.push_back({"0{12}", 1,
                     (lam(0) * inv({0, 1, 2}) * inv({1, 2}) * (inv({0, 1, 2}) + inv({1, 2}))) * phi({1, 2})});
        t.push_back({"{012}", 2, inv({0, 1, 2}, 3) * phi({0, 1, 2})});
    } else if (n == 3) {
        t.push_back({"0123", 0, scalar(lam(0) * lam(1) * lam(2) * inv({0, 1, 2, 3}) * inv({1, 2, 3}) * inv({2, 3}))});
        t.push_back({"{01}23", 1, (lam(2) * inv({0, 1, 2, 3}, 2) * inv({2, 3})) * phi({0, 1})});
        t.push_back({"0{12}3", 1,
                     (lam(0) * inv({0, 1, 2, 3}) * inv({1, 2, 3}) * (inv({0, 1, 2, 3}) + inv({1, 2, 3}))) *
                         phi({1, 2})});
        t.push_back({"01{23}", 1,
                     (lam(0) * lam(1) * inv({0, 1, 2, 3}) * inv({1, 2, 3}) * inv({2, 3}) *
                      (inv({0, 1, 2, 3}) + inv({1, 2, 3}) + inv({2, 3}))) *
                         phi({2, 3})});
        t.push_back({"{01}{23}", 2,
                     (inv({0, 1, 2, 3}, 2) * inv({2, 3}) * (inv({0, 1, 2, 3}).scaled(2) + inv({2, 3}))) *
                         wedge(phi({0, 1}), phi({2, 3}))});
        t.push_back({"{012}3", 2, inv({0, 1, 2, 3}, 3) * phi({0, 1, 2})});
        t.push_back({"0{123}", 2,
                     (lam(0) * inv({0, 1, 2, 3}) * inv({1, 2, 3}) *
                      (inv({0, 1, 2, 3}, 2) + inv({0, 1, 2, 3}) * inv({1, 2, 3}) + inv({1, 2, 3}, 2))) *
                         phi({1, 2, 3})});
        t.push_back({"{0123}", 3, inv({0, 1, 2, 3}, 4) * phi({0, 1, 2, 3})});
    } else {
        throw std::invalid_argument("tabulated_shadow_forms: only n = 2 and n = 3 are tabulated");
    }
    return t;
}

// degree r = 3 scalars on {0,1,2}
inline std::vector<TabulatedScalar> tabulated_higher_order() {
    using namespace detail;
    auto cube = [](const RationalFn& f) { return f * f * f; };
    std::vector<TabulatedScalar> t;
    t.push_back({"012", "000|111|222",
                 cube(lam(0)) * inv({0, 1, 2}, 3) * cube(lam(1)) * inv({1, 2}, 3) * cube(lam(2)) * inv({2}, 3)});
    t.push_back({"{01}2", "001|222", (lam(0) * lam(0) * lam(1) * inv({0, 1, 2}, 3)).scaled(3) * cube(lam(2)) * inv({2}, 3)});
    t.push_back({"{01}2", "011|222", (lam(0) * lam(1) * lam(1) * inv({0, 1, 2}, 3)).scaled(3) * cube(lam(2)) * inv({2}, 3)});
    t.push_back({"0{12}", "000|112",
                 (cube(lam(0)) * inv({0, 1, 2}, 3) * lam(1) * lam(1) * lam(2) * inv({1, 2}, 3)).scaled(3)});
    t.push_back({"0{12}", "000|122",
                 (cube(lam(0)) * inv({0, 1, 2}, 3) * lam(1) * lam(2) * lam(2) * inv({1, 2}, 3)).scaled(3)});
    t.push_back({"{012}", "012", (lam(0) * lam(1) * lam(2) * inv({0, 1, 2}, 3)).scaled(6)});
    return t;
}

}  // namespace blowup
