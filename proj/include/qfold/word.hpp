#pragma once

// Words in the generators f_i, indexed by node position.

#include <cstdint>
#include <vector>

#include "qfold/cartan.hpp"

namespace qfold {

struct Word {
    std::vector<uint8_t> letters;

    Word() = default;
    explicit Word(std::vector<uint8_t> l) : letters(std::move(l)) {}

    size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    uint8_t operator[](size_t k) const { return letters[k]; }

    Weight weight(size_t rank) const {
        Weight w(rank);
        for (uint8_t l : letters) ++w[l];
        return w;
    }

    Word without(size_t k) const {
        Word r;
        r.letters.reserve(letters.size() - 1);
        for (size_t i = 0; i < letters.size(); ++i)
            if (i != k) r.letters.push_back(letters[i]);
        return r;
    }

    Word prepend(uint8_t l, size_t count = 1) const {
        Word r;
        r.letters.assign(count, l);
        r.letters.insert(r.letters.end(), letters.begin(), letters.end());
        return r;
    }

    Word concat(const Word& o) const {
        Word r = *this;
        r.letters.insert(r.letters.end(), o.letters.begin(), o.letters.end());
        return r;
    }

    Word reversed() const {
        Word r = *this;
        std::reverse(r.letters.begin(), r.letters.end());
        return r;
    }

    Word mapped(const DiagramAutomorphism& s) const {
        Word r = *this;
        for (auto& l : r.letters) l = static_cast<uint8_t>(s.perm[l]);
        return r;
    }

    // packed key; supports length <= 15 over <= 15 nodes
    uint64_t pack() const {
        if (letters.size() > 15) throw internal_error("word too long to pack");
        uint64_t k = letters.size();
        for (size_t i = 0; i < letters.size(); ++i)
            k |= static_cast<uint64_t>(letters[i] + 1) << (4 * (i + 1));
        return k;
    }

    friend bool operator==(const Word& a, const Word& b) { return a.letters == b.letters; }
    friend bool operator<(const Word& a, const Word& b) { return a.letters < b.letters; }

    std::string str(const CartanDatum& d) const {
        std::string s;
        for (uint8_t l : letters) s += "f" + d.labels[l] + " ";
        if (!s.empty()) s.pop_back();
        return s;
    }
};

}  // namespace qfold
