#pragma once

// Exact Laurent polynomials in q with big-integer coefficients, over Z or F_ell.
// The coefficient domain is carried at runtime: mod == 0 means Z, a prime value
// means F_ell with coefficients stored as residues in [0, ell).

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qfold/errors.hpp"

namespace qfold {

using Int = mpz_class;

class Laurent {
  public:
    // exponent -> nonzero coefficient, keys strictly increasing
    using Terms = std::map<long, Int>;

    Laurent() = default;
    explicit Laurent(unsigned long mod) : mod_(mod) {}
    Laurent(const Int& c, long e = 0, unsigned long mod = 0) : mod_(mod) {
        Int v = reduce(c);
        if (v != 0) terms_[e] = v;
    }
    Laurent(long c, long e = 0, unsigned long mod = 0) : Laurent(Int(c), e, mod) {}

    static Laurent zero(unsigned long mod = 0) { return Laurent(mod); }
    static Laurent one(unsigned long mod = 0) { return Laurent(Int(1), 0, mod); }
    static Laurent q_power(long e, unsigned long mod = 0) { return Laurent(Int(1), e, mod); }

    unsigned long modulus() const { return mod_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1;
    }
    const Terms& terms() const { return terms_; }
    size_t term_count() const { return terms_.size(); }

    long low_exp() const {
        if (terms_.empty()) throw internal_error("low_exp of zero polynomial");
        return terms_.begin()->first;
    }
    long high_exp() const {
        if (terms_.empty()) throw internal_error("high_exp of zero polynomial");
        return terms_.rbegin()->first;
    }
    long max_exp_abs() const {
        if (terms_.empty()) return 0;
        long lo = low_exp() < 0 ? -low_exp() : low_exp();
        long hi = high_exp() < 0 ? -high_exp() : high_exp();
        return lo > hi ? lo : hi;
    }

    Int coeff(long e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Int(0) : it->second;
    }

    void set_coeff(long e, const Int& c) {
        Int v = reduce(c);
        if (v == 0)
            terms_.erase(e);
        else
            terms_[e] = v;
    }

    void add_term(long e, const Int& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            Int v = reduce(c);
            if (v != 0) terms_.emplace(e, std::move(v));
        } else {
            it->second += c;
            it->second = reduce(it->second);
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend bool operator==(const Laurent& a, const Laurent& b) {
        return a.mod_ == b.mod_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }
    friend bool operator<(const Laurent& a, const Laurent& b) {
        if (a.mod_ != b.mod_) return a.mod_ < b.mod_;
        return a.terms_ < b.terms_;
    }

    Laurent operator-() const {
        Laurent r(mod_);
        for (auto& [e, c] : terms_) r.terms_[e] = reduce(-c);
        return r;
    }

    Laurent& operator+=(const Laurent& o) {
        check_domain(o);
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Laurent& operator-=(const Laurent& o) {
        check_domain(o);
        for (auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }

    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        a.check_domain(b);
        Laurent r(a.mod_);
        if (a.is_zero() || b.is_zero()) return r;
        Int tmp;
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                tmp = ca * cb;
                r.add_term(ea + eb, tmp);
            }
        return r;
    }
    Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

    Laurent scaled(const Int& c) const {
        Laurent r(mod_);
        for (auto& [e, v] : terms_) {
            Int t = reduce(v * c);
            if (t != 0) r.terms_[e] = t;
        }
        return r;
    }

    Laurent shifted(long e) const {
        Laurent r(mod_);
        for (auto& [k, v] : terms_) r.terms_[k + e] = v;
        return r;
    }

    // bar involution: q -> q^{-1}
    Laurent bar() const {
        Laurent r(mod_);
        for (auto& [e, c] : terms_) r.terms_[-e] = c;
        return r;
    }

    bool bar_invariant() const { return *this == bar(); }

    // every coefficient nonnegative (meaningful over Z)
    bool coeffs_nonnegative() const {
        for (auto& [e, c] : terms_)
            if (c < 0) return false;
        return true;
    }

    // is this c * q^k with c a unit of the coefficient domain?
    bool is_unit_monomial() const {
        if (terms_.size() != 1) return false;
        const Int& c = terms_.begin()->second;
        if (mod_ == 0) return c == 1 || c == -1;
        return c != 0;
    }

    // gcd of coefficients, positive; 0 for the zero polynomial
    Int content() const {
        Int g = 0;
        for (auto& [e, c] : terms_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }

    // exact division; throws internal_error when not divisible
    friend Laurent exact_div(const Laurent& a, const Laurent& b) {
        a.check_domain(b);
        if (b.is_zero()) throw internal_error("division by zero polynomial");
        if (a.is_zero()) return Laurent(a.mod_);
        // shift both to ordinary polynomials, divide, shift back
        long sa = a.low_exp(), sb = b.low_exp();
        Laurent num = a.shifted(-sa);
        Laurent den = b.shifted(-sb);
        Laurent quot(a.mod_);
        const Int& lead = den.terms_.rbegin()->second;
        long dden = den.high_exp();
        while (!num.is_zero()) {
            long dn = num.high_exp();
            if (dn < dden) throw internal_error("exact_div: not divisible");
            Int c = num.terms_.rbegin()->second;
            Int qc;
            if (a.mod_ == 0) {
                Int rem;
                mpz_tdiv_qr(qc.get_mpz_t(), rem.get_mpz_t(), c.get_mpz_t(), lead.get_mpz_t());
                if (rem != 0) throw internal_error("exact_div: not divisible");
            } else {
                qc = mod_inverse(lead, a.mod_) * c;
                qc = a.reduce(qc);
            }
            long sh = dn - dden;
            quot.add_term(sh, qc);
            for (auto& [e, cc] : den.terms_) num.add_term(e + sh, -(cc * qc));
        }
        return quot.shifted(sa - sb);
    }

    friend bool divides(const Laurent& b, const Laurent& a) {
        try {
            exact_div(a, b);
            return true;
        } catch (const internal_error&) {
            return false;
        }
    }

    // evaluation at q = x modulo prime p (used for modular rank probes)
    uint64_t eval_mod(uint64_t x, uint64_t p) const {
        if (terms_.empty()) return 0;
        uint64_t acc = 0;
        long lo = low_exp();
        uint64_t xl = pow_mod(x, lo, p);
        long prev = lo;
        for (auto& [e, c] : terms_) {
            for (long k = prev; k < e; ++k) xl = mul_mod(xl, x, p);
            prev = e;
            Int cm = c % Int(static_cast<unsigned long>(p));
            if (cm < 0) cm += Int(static_cast<unsigned long>(p));
            acc = (acc + mul_mod(cm.get_ui(), xl, p)) % p;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [e, c] : terms_) {
            if (!s.empty() && c > 0) s += "+";
            if (c == -1 && e != 0)
                s += "-";
            else if (c != 1 || e == 0)
                s += c.get_str();
            if (e != 0) {
                if (c != 1 && c != -1) s += "*";
                s += "q";
                if (e != 1) s += "^" + std::to_string(e);
            }
        }
        return s;
    }

    static uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t p) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    static uint64_t pow_mod(uint64_t x, long e, uint64_t p) {
        bool inv = e < 0;
        uint64_t ee = inv ? static_cast<uint64_t>(-e) : static_cast<uint64_t>(e);
        uint64_t r = 1, base = x % p;
        while (ee) {
            if (ee & 1) r = mul_mod(r, base, p);
            base = mul_mod(base, base, p);
            ee >>= 1;
        }
        if (inv) r = pow_mod(r, static_cast<long>(p - 2), p);  // p prime
        return r;
    }

  private:
    void check_domain(const Laurent& o) const {
        if (mod_ != o.mod_)
            throw domain_error("coefficient domain mismatch (Z vs F_ell or distinct ell)");
    }

    Int reduce(const Int& c) const {
        if (mod_ == 0) return c;
        Int r = c % Int(mod_);
        if (r < 0) r += Int(mod_);
        return r;
    }

    static Int mod_inverse(const Int& a, unsigned long mod) {
        Int inv, m(mod);
        if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
            throw internal_error("noninvertible leading coefficient mod ell");
        return inv;
    }

    Terms terms_;
    unsigned long mod_ = 0;
};

inline Laurent bar(const Laurent& a) { return a.bar(); }

// coefficientwise reduction Z -> F_ell
inline Laurent mod_ell(const Laurent& a, unsigned long ell) {
    if (a.modulus() != 0) throw domain_error("mod_ell expects a polynomial over Z");
    Int l(ell);
    if (ell < 2 || mpz_probab_prime_p(l.get_mpz_t(), 32) == 0)
        throw domain_error("mod_ell: modulus is not prime");
    Laurent r(ell);
    for (auto& [e, c] : a.terms()) r.add_term(e, c);
    return r;
}

// gcd over Z[q, q^{-1}], primitive with positive leading coefficient.
// Subresultant-free primitive PRS; sizes here stay small.
inline Laurent laurent_gcd(Laurent a, Laurent b) {
    if (a.modulus() != 0 || b.modulus() != 0)
        throw internal_error("laurent_gcd implemented over Z only");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    a = a.shifted(-a.low_exp());
    b = b.shifted(-b.low_exp());
    auto primitive = [](Laurent& p) {
        Int c = p.content();
        if (c > 1) p = exact_div(p, Laurent(c));
    };
    Int cont_a = a.content(), cont_b = b.content();
    Int cont_g;
    mpz_gcd(cont_g.get_mpz_t(), cont_a.get_mpz_t(), cont_b.get_mpz_t());
    primitive(a);
    primitive(b);
    while (!b.is_zero()) {
        // pseudo-remainder of a by b
        long da = a.is_zero() ? -1 : a.high_exp();
        long db = b.high_exp();
        if (da < db) {
            std::swap(a, b);
            continue;
        }
        Laurent r = a;
        const Int lead_b = b.coeff(db);
        while (!r.is_zero() && r.high_exp() >= db) {
            long d = r.high_exp();
            Int lead_r = r.coeff(d);
            Int g;
            mpz_gcd(g.get_mpz_t(), lead_r.get_mpz_t(), lead_b.get_mpz_t());
            Int mul_r = lead_b / g, mul_lead = lead_r / g;
            r = r.scaled(mul_r) - b.scaled(mul_lead).shifted(d - db);
        }
        a = b;
        b = r;
        if (!b.is_zero()) {
            b = b.shifted(-b.low_exp());
            primitive(b);
        }
    }
    primitive(a);
    if (!a.is_zero() && a.coeff(a.high_exp()) < 0) a = -a;
    if (cont_g > 1) a = a.scaled(cont_g);
    return a;
}

}  // namespace qfold
