#pragma once

// Weight-homogeneous linear combinations of words: the universal
// representation of elements of the negative half, together with the
// operators that act on it (multiplication, e_i', the twisted coproduct r,
// bar, sigma, word reversal, orbit sums).

#include <map>

#include "qfold/rational.hpp"
#include "qfold/word.hpp"

namespace qfold {

class FreeElement {
  public:
    using Terms = std::map<Word, Rational>;

    FreeElement() = default;
    explicit FreeElement(Weight w) : weight_(std::move(w)) {}

    static FreeElement unit(size_t rank) {
        FreeElement e{Weight(rank)};
        e.terms_[Word{}] = Rational(1);
        return e;
    }

    static FreeElement generator(const CartanDatum& d, size_t i) {
        FreeElement e{Weight(d.rank()).plus(i)};
        e.terms_[Word({static_cast<uint8_t>(i)})] = Rational(1);
        return e;
    }

    static FreeElement from_word(const CartanDatum& d, const Word& w,
                                 Rational coeff = Rational(1)) {
        FreeElement e{w.weight(d.rank())};
        if (!coeff.is_zero()) e.terms_[w] = std::move(coeff);
        return e;
    }

    // homogeneous weight; formal mixed sums (orbit sums of non-stable
    // elements) have no weight and refuse to enter weight-graded operations
    const Weight& weight() const {
        if (mixed_) throw domain_error("element is not weight-homogeneous");
        return weight_;
    }
    bool is_homogeneous() const { return !mixed_; }
    const Terms& terms() const { return terms_; }
    bool is_zero_element() const { return terms_.empty(); }  // zero as a free element

    void add_term(const Word& w, const Rational& c) {
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_[w] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    FreeElement& operator+=(const FreeElement& o) {
        if (terms_.empty() && !mixed_)
            weight_ = o.weight_;
        else if (!o.terms_.empty() && (o.mixed_ || !(o.weight_ == weight_)))
            mixed_ = true;
        for (auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    FreeElement& operator-=(const FreeElement& o) { return *this += o.scaled(Rational(-1)); }
    friend FreeElement operator+(FreeElement a, const FreeElement& b) { return a += b; }
    friend FreeElement operator-(FreeElement a, const FreeElement& b) { return a -= b; }

    FreeElement scaled(const Rational& c) const {
        FreeElement r{weight_};
        r.mixed_ = mixed_;
        if (c.is_zero()) return r;
        for (auto& [w, v] : terms_) r.terms_[w] = v * c;
        return r;
    }

    friend bool operator==(const FreeElement& a, const FreeElement& b) {
        return a.terms_ == b.terms_;
    }

    std::string str(const CartanDatum& d) const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [w, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")*[" + w.str(d) + "]";
        }
        return s;
    }

  private:
    Weight weight_;
    Terms terms_;
    bool mixed_ = false;
};

// Bilinear extension of word concatenation; weights add.
inline FreeElement multiply(const FreeElement& x, const FreeElement& y, size_t rank) {
    Weight w(rank);
    if (!x.terms().empty() && !y.terms().empty()) {
        w = x.weight();
        for (size_t i = 0; i < rank; ++i) w[i] += y.weight()[i];
    }
    FreeElement r{w};
    for (auto& [wx, cx] : x.terms())
        for (auto& [wy, cy] : y.terms()) r.add_term(wx.concat(wy), cx * cy);
    return r;
}

// e_i' on a word deletes one letter i at a time with the q-boson twist:
// each occurrence at position k contributes q^{-(alpha_i, weight of prefix)}.
inline FreeElement e_prime(const CartanDatum& d, size_t i, const FreeElement& x) {
    if (x.terms().empty() || x.weight()[i] == 0) return FreeElement{Weight(d.rank())};
    FreeElement r{x.weight().minus(i)};
    for (auto& [w, c] : x.terms()) {
        long twist = 0;  // (alpha_i, alpha_{w_0} + ... + alpha_{w_{k-1}})
        for (size_t k = 0; k < w.size(); ++k) {
            if (w[k] == i)
                r.add_term(w.without(k), c * Rational(Laurent::q_power(-twist)));
            twist += d.pair(i, w[k]);
        }
    }
    return r;
}

inline FreeElement bar_element(const FreeElement& x) {
    FreeElement r{x.weight()};
    for (auto& [w, c] : x.terms()) r.add_term(w, c.bar());
    return r;
}

inline FreeElement sigma_element(const DiagramAutomorphism& s, const FreeElement& x) {
    FreeElement r{sigma_on_weight(s, x.weight())};
    for (auto& [w, c] : x.terms()) r.add_term(w.mapped(s), c);
    return r;
}

inline FreeElement star_element(const FreeElement& x) {
    FreeElement r{x.weight()};
    for (auto& [w, c] : x.terms()) r.add_term(w.reversed(), c);
    return r;
}

// O(x) = sum of sigma^i(x) over the orbit of x.
inline FreeElement orbit_sum(const DiagramAutomorphism& s, const FreeElement& x) {
    FreeElement acc = x;
    FreeElement cur = x;
    for (long i = 1; i < s.order; ++i) {
        cur = sigma_element(s, cur);
        if (cur == x) break;
        acc += cur;
    }
    return acc;
}

// Bi-homogeneous element of the twisted tensor square.
class TensorElement {
  public:
    using Key = std::pair<Word, Word>;
    using Terms = std::map<Key, Rational>;

    TensorElement(Weight lw, Weight rw) : lweight_(std::move(lw)), rweight_(std::move(rw)) {}

    const Terms& terms() const { return terms_; }
    const Weight& left_weight() const { return lweight_; }
    const Weight& right_weight() const { return rweight_; }

    void add_term(const Word& a, const Word& b, const Rational& c) {
        Key k{a, b};
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_[k] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

  private:
    Weight lweight_, rweight_;
    Terms terms_;
};

// The coproduct r as an algebra map into the twisted tensor square:
// on a word, each subset of positions goes left, its complement right, and
// the coefficient is q^{-sum of (alpha_l, alpha_k)} over pairs l < k with
// l sent right and k sent left.
inline std::vector<TensorElement> coproduct_r(const CartanDatum& d, const FreeElement& x) {
    size_t rank = d.rank();
    // bucket by left weight; right weight is the complement
    std::map<Weight, TensorElement> buckets;
    for (auto& [w, c] : x.terms()) {
        size_t n = w.size();
        if (n > 20) throw internal_error("coproduct on too long a word");
        for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
            Word left, right;
            long twist = 0;
            for (size_t k = 0; k < n; ++k) {
                if (mask & (uint64_t(1) << k)) {
                    left.letters.push_back(w[k]);
                    for (size_t l = 0; l < k; ++l)
                        if (!(mask & (uint64_t(1) << l))) twist += d.pair(w[l], w[k]);
                } else {
                    right.letters.push_back(w[k]);
                }
            }
            Weight lw = left.weight(rank);
            auto it = buckets.find(lw);
            if (it == buckets.end())
                it = buckets.emplace(lw, TensorElement(lw, right.weight(rank))).first;
            it->second.add_term(left, right, c * Rational(Laurent::q_power(-twist)));
        }
    }
    std::vector<TensorElement> out;
    out.reserve(buckets.size());
    for (auto& [lw, t] : buckets) out.push_back(std::move(t));
    return out;
}

}  // namespace qfold
