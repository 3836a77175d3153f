#pragma once

// JSON serialization: Laurent polynomials as [exponent, coefficient-string]
// pairs with strictly ascending exponents, rational functions as num/den,
// free elements as [word, rationalfn] lists, plus the datum hash used for
// cache keys and report context blocks.

#include "qfold/free_element.hpp"
#include "qfold/rational.hpp"

namespace qfold {

inline json laurent_to_json(const Laurent& p) {
    json a = json::array();
    for (auto& [e, c] : p.terms()) a.push_back(json::array({e, c.get_str()}));
    return a;
}

inline Laurent laurent_from_json(const json& a, unsigned long mod = 0) {
    Laurent p(mod);
    long prev = 0;
    bool first = true;
    for (auto& t : a) {
        long e = t.at(0).get<long>();
        if (!first && e <= prev) throw domain_error("laurent json: exponents not ascending");
        first = false;
        prev = e;
        p.add_term(e, Int(t.at(1).get<std::string>()));
    }
    return p;
}

inline json rational_to_json(const Rational& r) {
    json j;
    j["num"] = laurent_to_json(r.num());
    j["den"] = laurent_to_json(r.den());
    return j;
}

inline json free_element_to_json(const FreeElement& x) {
    json a = json::array();
    for (auto& [w, c] : x.terms()) {
        json word = json::array();
        for (uint8_t l : w.letters) word.push_back(static_cast<int>(l));
        a.push_back(json::array({word, rational_to_json(c)}));
    }
    return a;
}

inline json weight_to_json(const Weight& w) {
    json a = json::array();
    for (long m : w.mults) a.push_back(m);
    return a;
}

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

inline std::string datum_hash(const CartanDatum& d, const std::vector<size_t>& sigma) {
    json j;
    j["labels"] = d.labels;
    j["form"] = d.form;
    json sg = json::array();
    for (size_t x : sigma) sg.push_back(x);
    j["sigma"] = sg;
    return hex64(fnv1a(j.dump()));
}

}  // namespace qfold
