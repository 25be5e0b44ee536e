#pragma once

// Exact integer/rational scalars and the few combinatorial numbers the
// generating functions are built from.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// C(n, k) with out-of-range arguments evaluating to 0 (also for n < 0),
// so that sum bounds like "n >= p" in the series formulas are automatic.
inline Int binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline Int catalan(long long n) {
    if (n < 0) return 0;
    return binomial(2 * n, n) / (n + 1);
}

inline Int factorial(long long n) {
    Int r = 1;
    for (long long i = 2; i <= n; ++i) r *= i;
    return r;
}

inline std::string to_string(const Rat& q) { return q.str(); }

} // namespace rq
