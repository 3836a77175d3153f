#pragma once

// Fraction-free linear algebra over Z[q,q^-1] and F_ell[q,q^-1]:
// Bareiss forward elimination with row pivoting, fraction-free back
// substitution, determinants, ranks, and adjugate columns via solves.

#include <vector>

#include "qfold/laurent.hpp"

namespace qfold {

using LaurentMatrix = std::vector<std::vector<Laurent>>;

inline LaurentMatrix identity_matrix(size_t n, unsigned long mod = 0) {
    LaurentMatrix m(n, std::vector<Laurent>(n, Laurent(mod)));
    for (size_t i = 0; i < n; ++i) m[i][i] = Laurent::one(mod);
    return m;
}

inline LaurentMatrix matmul(const LaurentMatrix& a, const LaurentMatrix& b) {
    size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    unsigned long mod = n && !a[0].empty() ? a[0][0].modulus() : 0;
    LaurentMatrix r(n, std::vector<Laurent>(m, Laurent(mod)));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero()) continue;
            for (size_t j = 0; j < m; ++j)
                if (!b[t][j].is_zero()) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

inline bool matrix_equal(const LaurentMatrix& a, const LaurentMatrix& b) { return a == b; }

// Forward Bareiss elimination of a square matrix, keeping the row-operation
// image of an identity block so that repeated right-hand sides are cheap.
struct Elimination {
    size_t n = 0;
    LaurentMatrix upper;       // U upper triangular with U = ops * A
    LaurentMatrix ops;         // accumulated row operations (swaps included)
    std::vector<Laurent> piv;  // pivots p_1..p_n, p_n = sign * det(A)
    int sign = 1;
    const Laurent& det_up_to_sign() const { return piv.back(); }
    Laurent det() const { return sign > 0 ? piv.back() : -piv.back(); }
};

// Throws verify_error when the matrix is singular.
inline Elimination bareiss_decompose(const LaurentMatrix& a) {
    size_t n = a.size();
    Elimination e;
    e.n = n;
    unsigned long mod = n ? (a[0].empty() ? 0 : a[0][0].modulus()) : 0;
    LaurentMatrix m = a;
    LaurentMatrix aug = identity_matrix(n, mod);
    Laurent prev = Laurent::one(mod);
    for (size_t k = 0; k < n; ++k) {
        size_t piv_row = k;
        while (piv_row < n && m[piv_row][k].is_zero()) ++piv_row;
        if (piv_row == n) throw verify_error("bareiss: singular matrix");
        if (piv_row != k) {
            std::swap(m[piv_row], m[k]);
            std::swap(aug[piv_row], aug[k]);
            e.sign = -e.sign;
        }
        const Laurent pivot = m[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            const Laurent mik = m[i][k];
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = exact_div(pivot * m[i][j] - mik * m[k][j], prev);
            for (size_t j = 0; j < n; ++j)
                aug[i][j] = exact_div(pivot * aug[i][j] - mik * aug[k][j], prev);
            m[i][k] = Laurent(mod);
        }
        e.piv.push_back(pivot);
        prev = pivot;
    }
    e.upper = std::move(m);
    e.ops = std::move(aug);
    return e;
}

// Solves A x = p_n * b exactly with p_n = e.det_up_to_sign();
// x has entries in the coefficient domain (fraction-free back substitution).
inline std::vector<Laurent> ff_solve(const Elimination& e, const std::vector<Laurent>& b) {
    size_t n = e.n;
    unsigned long mod = n ? e.piv[0].modulus() : 0;
    std::vector<Laurent> bp(n, Laurent(mod));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!e.ops[i][j].is_zero() && !b[j].is_zero()) bp[i] += e.ops[i][j] * b[j];
    std::vector<Laurent> x(n, Laurent(mod));
    const Laurent& d = e.det_up_to_sign();
    for (size_t ii = n; ii-- > 0;) {
        Laurent acc = d * bp[ii];
        for (size_t j = ii + 1; j < n; ++j)
            if (!e.upper[ii][j].is_zero() && !x[j].is_zero()) acc -= e.upper[ii][j] * x[j];
        x[ii] = exact_div(acc, e.piv[ii]);
    }
    return x;
}

inline Laurent bareiss_det(const LaurentMatrix& a) {
    if (a.empty()) return Laurent::one();
    try {
        return bareiss_decompose(a).det();
    } catch (const verify_error&) {
        return Laurent(a[0].empty() ? 0 : a[0][0].modulus());
    }
}

// Rank of a rectangular Laurent matrix by fraction-free elimination with
// full pivoting. Exact; intended for small matrices.
inline size_t laurent_rank(LaurentMatrix m) {
    size_t rows = m.size();
    if (rows == 0) return 0;
    size_t cols = m[0].size();
    unsigned long mod = m[0].empty() ? 0 : m[0][0].modulus();
    Laurent prev = Laurent::one(mod);
    size_t r = 0, c = 0;
    while (r < rows && c < cols) {
        size_t pr = rows, pc = cols;
        for (size_t j = c; j < cols && pr == rows; ++j)
            for (size_t i = r; i < rows; ++i)
                if (!m[i][j].is_zero()) {
                    pr = i;
                    pc = j;
                    break;
                }
        if (pr == rows) break;
        std::swap(m[pr], m[r]);
        if (pc != c)
            for (size_t i = 0; i < rows; ++i) std::swap(m[i][pc], m[i][c]);
        const Laurent pivot = m[r][c];
        for (size_t i = r + 1; i < rows; ++i) {
            const Laurent mic = m[i][c];
            for (size_t j = c + 1; j < cols; ++j)
                m[i][j] = exact_div(pivot * m[i][j] - mic * m[r][j], prev);
            m[i][c] = Laurent(mod);
        }
        prev = pivot;
        ++r;
        ++c;
    }
    return r;
}

// Is x in the row space of m? Exact membership test.
inline bool in_row_space(const LaurentMatrix& m, const std::vector<Laurent>& x) {
    size_t base = laurent_rank(m);
    LaurentMatrix ext = m;
    ext.push_back(x);
    return laurent_rank(ext) == base;
}

// Adjugate and determinant: adj(A) * A = A * adj(A) = det(A) * I.
inline std::pair<LaurentMatrix, Laurent> adjugate(const LaurentMatrix& a) {
    size_t n = a.size();
    unsigned long mod = n ? (a[0].empty() ? 0 : a[0][0].modulus()) : 0;
    Elimination e = bareiss_decompose(a);
    Laurent d = e.det();
    LaurentMatrix adj(n, std::vector<Laurent>(n, Laurent(mod)));
    std::vector<Laurent> unit(n, Laurent(mod));
    for (size_t j = 0; j < n; ++j) {
        unit[j] = Laurent::one(mod);
        auto col = ff_solve(e, unit);  // A col = det_up_to_sign * e_j
        unit[j] = Laurent(mod);
        for (size_t i = 0; i < n; ++i) adj[i][j] = e.sign > 0 ? col[i] : -col[i];
    }
    return {adj, d};
}

}  // namespace qfold
