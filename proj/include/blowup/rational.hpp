#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace blowup {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Integer factorial(unsigned n) {
    Integer r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

// binomial(n, k) as an exact integer, 0 when k > n
inline Integer binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Stirling number of the second kind S(n, m)
inline Integer stirling2(unsigned n, unsigned m) {
    std::vector<std::vector<Integer>> s(n + 1, std::vector<Integer>(n + 1, 0));
    s[0][0] = 1;
    for (unsigned i = 1; i <= n; ++i)
        for (unsigned j = 1; j <= i; ++j) s[i][j] = s[i - 1][j - 1] + Integer(j) * s[i - 1][j];
    return m <= n ? s[n][m] : Integer(0);
}

}  // namespace blowup
