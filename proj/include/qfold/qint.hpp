#pragma once

// Quantum integers [n]_i, factorials and Gaussian binomials at q_i = q^d.

#include "qfold/laurent.hpp"

namespace qfold {

// [n]_d = (q_d^n - q_d^{-n}) / (q_d - q_d^{-1}),  q_d = q^d
inline Laurent quantum_int(long n, long d = 1) {
    if (d <= 0) throw domain_error("quantum_int: d must be positive");
    bool neg = n < 0;
    if (neg) n = -n;
    Laurent r;
    for (long k = 0; k < n; ++k) r.add_term(d * (n - 1 - 2 * k), 1);
    return neg ? -r : r;
}

inline Laurent quantum_factorial(long n, long d = 1) {
    if (n < 0) throw domain_error("quantum_factorial: undefined for n < 0");
    Laurent r = Laurent::one();
    for (long k = 2; k <= n; ++k) r *= quantum_int(k, d);
    return r;
}

// Gaussian binomial [m; k]_d = [m]! / ([k]! [m-k]!), exact in Z[q, q^{-1}]
inline Laurent gauss_binomial(long m, long k, long d = 1) {
    if (k < 0 || m < 0 || k > m) return Laurent();
    Laurent num = Laurent::one();
    for (long j = 0; j < k; ++j) num *= quantum_int(m - j, d);
    return exact_div(num, quantum_factorial(k, d));
}

}  // namespace qfold
