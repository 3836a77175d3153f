#pragma once

// Rational functions in q over Z, kept in a reduced normal form so that
// equality is structural: gcd(num, den) = 1 (polynomial factors and integer
// content), den has lowest exponent 0 and positive lowest coefficient.

#include "qfold/laurent.hpp"

namespace qfold {

class Rational {
  public:
    Rational() : num_(), den_(Laurent::one()) {}
    Rational(const Laurent& num, const Laurent& den) : num_(num), den_(den) { normalize(); }
    explicit Rational(const Laurent& num) : num_(num), den_(Laurent::one()) {}
    Rational(long c) : num_(Laurent(c)), den_(Laurent::one()) {}

    const Laurent& num() const { return num_; }
    const Laurent& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_.is_unit_monomial(); }

    // valid when is_laurent(); den is then +q^k by normalization
    Laurent as_laurent() const {
        if (!is_laurent()) throw internal_error("rational value is not a Laurent polynomial");
        return num_.shifted(-den_.low_exp());
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw domain_error("division by zero rational function");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    Rational bar() const {
        Rational r;
        r.num_ = num_.bar();
        r.den_ = den_.bar();
        r.normalize();
        return r;
    }

    std::string str() const {
        if (den_.is_one()) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

  private:
    void normalize() {
        if (num_.modulus() != 0 || den_.modulus() != 0)
            throw internal_error("Rational is supported over Z coefficients only");
        if (den_.is_zero()) throw domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = Laurent::one();
            return;
        }
        Laurent g = laurent_gcd(num_, den_);
        if (!g.is_one()) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
        long v = den_.low_exp();
        if (v != 0) {
            num_ = num_.shifted(-v);
            den_ = den_.shifted(-v);
        }
        if (den_.coeff(0) < 0) {
            num_ = -num_;
            den_ = -den_;
        }
    }

    Laurent num_, den_;
};

}  // namespace qfold
