#pragma once

// Truncated power series at q = 0 with exact rational coefficients, used for
// the membership tests in Z[[q]] and 1 + qZ[[q]] and for symmetric rounding.
// Every value records its truncation order; arithmetic refuses to mix orders.

#include <vector>

#include <gmpxx.h>

#include "qfold/laurent.hpp"
#include "qfold/rational.hpp"

namespace qfold {

class Series {
  public:
    // coefficients for exponents low .. order-1, low <= 0
    Series(long order, long low, std::vector<mpq_class> coeffs)
        : order_(order), low_(low), c_(std::move(coeffs)) {
        if (order_ < 1) throw domain_error("series order must be >= 1");
        if (low_ > 0) throw internal_error("series storage must start at exponent <= 0");
        if (static_cast<long>(c_.size()) != order_ - low_)
            throw internal_error("series coefficient count mismatch");
    }

    long order() const { return order_; }
    long low() const { return low_; }

    mpq_class coeff(long e) const {
        if (e >= order_) throw internal_error("series coefficient beyond truncation order");
        if (e < low_) return 0;
        return c_[static_cast<size_t>(e - low_)];
    }

    // leading exponent of the nonzero part, or order() when zero to truncation
    long leading_exp() const {
        for (long e = low_; e < order_; ++e)
            if (coeff(e) != 0) return e;
        return order_;
    }

    bool has_negative_part() const { return leading_exp() < 0; }

    Series& operator-=(const Laurent& p) {
        if (p.modulus() != 0) throw domain_error("series arithmetic is over Z");
        for (auto& [e, v] : p.terms()) {
            if (e >= order_) continue;
            if (e < low_) {
                c_.insert(c_.begin(), static_cast<size_t>(low_ - e), mpq_class(0));
                low_ = e;
            }
            c_[static_cast<size_t>(e - low_)] -= mpq_class(v);
        }
        return *this;
    }

    friend Series operator-(Series s, const Laurent& p) { return s -= p; }

    Series& operator-=(const Series& o) {
        if (o.order_ != order_)
            throw domain_error("mixing series of different truncation orders");
        for (long e = o.low_; e < order_; ++e) {
            if (e < low_) {
                c_.insert(c_.begin(), static_cast<size_t>(low_ - e), mpq_class(0));
                low_ = e;
            }
            c_[static_cast<size_t>(e - low_)] -= o.coeff(e);
        }
        return *this;
    }

    bool all_integral() const {
        for (auto& v : c_)
            if (v.get_den() != 1) return false;
        return true;
    }

    // member of q Z[[q]] up to truncation: integral, zero at exponents <= 0
    bool in_qZ() const {
        if (!all_integral()) return false;
        for (long e = low_; e <= 0; ++e)
            if (coeff(e) != 0) return false;
        return true;
    }

    // member of 1 + q Z[[q]] up to truncation
    bool in_one_plus_qZ() const {
        if (!all_integral()) return false;
        for (long e = low_; e < 0; ++e)
            if (coeff(e) != 0) return false;
        return coeff(0) == 1;
    }

    // member of Z[[q]] up to truncation
    bool in_Z() const {
        if (!all_integral()) return false;
        for (long e = low_; e < 0; ++e)
            if (coeff(e) != 0) return false;
        return true;
    }

  private:
    long order_;
    long low_;
    std::vector<mpq_class> c_;  // exponents low_ .. order_-1
};

// Exact expansion of num/den at q = 0 to the requested order.
inline Series expand_quotient(const Laurent& num, const Laurent& den, long order) {
    if (num.modulus() != 0 || den.modulus() != 0)
        throw domain_error("series expansion is over Z coefficients");
    if (den.is_zero()) throw domain_error("series expansion: zero denominator");
    if (order < 1) throw domain_error("series order must be >= 1");
    if (num.is_zero()) return Series(order, 0, std::vector<mpq_class>(static_cast<size_t>(order)));

    long vn = num.low_exp(), vd = den.low_exp();
    long lead = vn - vd;
    long low = lead < 0 ? lead : 0;
    // u(q) = den / q^vd has invertible constant term d0
    mpq_class d0{den.coeff(vd)};
    long count = order - lead;  // coefficients of the shifted series m/u at 0..count-1
    std::vector<mpq_class> t(static_cast<size_t>(count));
    for (long k = 0; k < count; ++k) {
        mpq_class acc{num.coeff(vn + k)};
        for (auto& [e, v] : den.terms()) {
            long j = e - vd;
            if (j < 1) continue;
            if (j > k) break;
            acc -= mpq_class(v) * t[static_cast<size_t>(k - j)];
        }
        acc /= d0;
        acc.canonicalize();
        t[static_cast<size_t>(k)] = acc;
    }
    std::vector<mpq_class> out(static_cast<size_t>(order - low));
    for (long e = low; e < order; ++e)
        if (e >= lead) out[static_cast<size_t>(e - low)] = t[static_cast<size_t>(e - lead)];
    return Series(order, low, std::move(out));
}

inline Series series_expand(const Rational& r, long order) {
    return expand_quotient(r.num(), r.den(), order);
}

// The unique bar-invariant Laurent polynomial c with s - c in q Z[[q]]:
// c = a_0 + sum_{n>0} a_{-n} (q^n + q^{-n}) where a_k = coeff of q^k in s, k <= 0.
inline Laurent symmetric_round(const Series& s) {
    if (-s.low() >= s.order())
        throw domain_error("symmetric_round: negative support reaches the truncation boundary");
    Laurent c;
    for (long e = s.low(); e <= 0; ++e) {
        mpq_class a = s.coeff(e);
        if (a == 0) continue;
        if (a.get_den() != 1)
            throw verify_error("symmetric_round: non-integral coefficient at q^" +
                               std::to_string(e));
        c.add_term(e, a.get_num());
        if (e < 0) c.add_term(-e, a.get_num());
    }
    return c;
}

}  // namespace qfold
