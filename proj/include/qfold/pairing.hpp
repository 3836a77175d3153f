#pragma once

// The bilinear form on words, computed by the peel-one-letter recursion
//   (f_i u, v) = (1 - q_i^2)^{-1} sum_k q^{-(alpha_i, prefix)} (u, v - k-th letter)
// over occurrences v_k = i. Values are held in cleared form: the pairing of
// two words of weight beta is  numerator / prod_i (1 - q^{2 d_i})^{n_i},
// and only the Laurent numerator is stored. A parallel evaluation modulo a
// word-size prime at a fixed point backs the basis-selection rank probes.

#include <mutex>
#include <unordered_map>

#include "qfold/free_element.hpp"
#include "qfold/linalg.hpp"

namespace qfold {

class PairingTable {
  public:
    // two fixed evaluation points for modular rank probes
    static constexpr uint64_t kPrime[2] = {9223372036854775783ull, 4611686018427387847ull};
    static constexpr uint64_t kPoint[2] = {1234577ull, 7654321ull};

    explicit PairingTable(const CartanDatum& d, size_t memo_len_cap = 5)
        : d_(&d), memo_cap_(memo_len_cap) {
        for (int pt = 0; pt < 2; ++pt) {
            for (size_t i = 0; i < d_->rank(); ++i) {
                long di = d_->d(i);
                uint64_t q2d = Laurent::pow_mod(kPoint[pt], 2 * di, kPrime[pt]);
                if (q2d == 1)
                    throw internal_error("modular evaluation point degenerates");
            }
        }
    }

    const CartanDatum& datum() const { return *d_; }
    void set_memo_cap(size_t cap) { memo_cap_ = cap; }

    // denominator prod_i (1 - q^{2 d_i})^{n_i} for a weight
    Laurent denominator(const Weight& b) const {
        Laurent r = Laurent::one();
        for (size_t i = 0; i < d_->rank(); ++i) {
            if (b[i] == 0) continue;
            Laurent f;
            f.add_term(0, 1);
            f.add_term(2 * d_->d(i), -1);
            for (long k = 0; k < b[i]; ++k) r *= f;
        }
        return r;
    }

    // pairing numerator of two words of equal weight
    Laurent num(const Word& u, const Word& v) {
        if (u.size() != v.size()) return Laurent();
        return num_rec(u, v);
    }

    // the same value evaluated at q = kPoint[pt] modulo kPrime[pt]
    uint64_t num_mod(const Word& u, const Word& v, int pt) {
        if (u.size() != v.size()) return 0;
        return num_mod_rec(u, v, pt);
    }

  private:
    struct Key {
        uint64_t a, b;
        bool operator==(const Key& o) const { return a == o.a && b == o.b; }
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            uint64_t h = k.a * 0x9e3779b97f4a7c15ull;
            h ^= k.b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            return static_cast<size_t>(h);
        }
    };

    Laurent num_rec(const Word& u, const Word& v) {
        if (u.empty()) return Laurent::one();
        Key key{u.pack(), v.pack()};
        bool use_memo = u.size() <= memo_cap_;
        if (use_memo) {
            std::lock_guard<std::mutex> lk(mtx_);
            auto it = exact_.find(key);
            if (it != exact_.end()) return it->second;
        }
        uint8_t i = u[0];
        Word u1 = u.without(0);
        Laurent acc;
        long twist = 0;
        for (size_t k = 0; k < v.size(); ++k) {
            if (v[k] == i) acc += num_rec(u1, v.without(k)).shifted(-twist);
            twist += d_->pair(i, v[k]);
        }
        if (use_memo) {
            std::lock_guard<std::mutex> lk(mtx_);
            exact_.emplace(key, acc);
        }
        return acc;
    }

    uint64_t num_mod_rec(const Word& u, const Word& v, int pt) {
        if (u.empty()) return 1;
        Key key{u.pack(), v.pack()};
        bool use_memo = u.size() <= memo_cap_;
        if (use_memo) {
            std::lock_guard<std::mutex> lk(mtx_);
            auto it = modular_[pt].find(key);
            if (it != modular_[pt].end()) return it->second;
        }
        uint64_t p = kPrime[pt], q0 = kPoint[pt];
        uint8_t i = u[0];
        Word u1 = u.without(0);
        uint64_t acc = 0;
        long twist = 0;
        for (size_t k = 0; k < v.size(); ++k) {
            if (v[k] == i) {
                uint64_t sub = num_mod_rec(u1, v.without(k), pt);
                acc = (acc + Laurent::mul_mod(sub, Laurent::pow_mod(q0, -twist, p), p)) % p;
            }
            twist += d_->pair(i, v[k]);
        }
        if (use_memo) {
            std::lock_guard<std::mutex> lk(mtx_);
            modular_[pt].emplace(key, acc);
        }
        return acc;
    }

    const CartanDatum* d_;
    size_t memo_cap_;
    std::mutex mtx_;
    std::unordered_map<Key, Laurent, KeyHash> exact_;
    std::unordered_map<Key, uint64_t, KeyHash> modular_[2];
};

}  // namespace qfold
