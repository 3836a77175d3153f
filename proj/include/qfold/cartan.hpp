#pragma once

// Cartan data, admissible diagram automorphisms, and folding.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfold/errors.hpp"

namespace qfold {

using json = nlohmann::ordered_json;

// Element of Q_+ as a multiplicity vector over the node list.
struct Weight {
    std::vector<long> mults;

    Weight() = default;
    explicit Weight(size_t rank) : mults(rank, 0) {}
    explicit Weight(std::vector<long> m) : mults(std::move(m)) {}

    size_t rank() const { return mults.size(); }
    long height() const { return std::accumulate(mults.begin(), mults.end(), 0L); }
    bool is_zero() const { return height() == 0; }

    long operator[](size_t i) const { return mults[i]; }
    long& operator[](size_t i) { return mults[i]; }

    friend bool operator==(const Weight& a, const Weight& b) { return a.mults == b.mults; }
    friend bool operator!=(const Weight& a, const Weight& b) { return !(a == b); }

    // (height, lexicographic) order used for all weight traversals
    friend bool operator<(const Weight& a, const Weight& b) {
        long ha = a.height(), hb = b.height();
        if (ha != hb) return ha < hb;
        return a.mults < b.mults;
    }

    Weight plus(size_t i, long n = 1) const {
        Weight w = *this;
        w.mults[i] += n;
        return w;
    }
    Weight minus(size_t i, long n = 1) const {
        Weight w = *this;
        w.mults[i] -= n;
        if (w.mults[i] < 0) throw internal_error("weight multiplicity below zero");
        return w;
    }
    bool can_subtract(size_t i, long n) const { return mults[i] >= n; }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < mults.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(mults[i]);
        }
        return s + ")";
    }

    std::string key() const {
        std::string s;
        for (size_t i = 0; i < mults.size(); ++i) {
            if (i) s += "_";
            s += std::to_string(mults[i]);
        }
        return s;
    }
};

struct WeightHash {
    size_t operator()(const Weight& w) const {
        size_t h = 1469598103934665603ull;
        for (long m : w.mults) {
            h ^= static_cast<size_t>(m) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct ValidationIssue {
    std::string code;
    std::string message;
};

struct CartanDatum {
    std::string name;
    std::vector<std::string> labels;
    std::vector<std::vector<long>> form;  // symmetric matrix ((alpha_i, alpha_j))

    size_t rank() const { return labels.size(); }

    long pair(size_t i, size_t j) const { return form[i][j]; }
    long d(size_t i) const { return form[i][i] / 2; }
    // Cartan matrix entry a_{ij} = 2(alpha_i, alpha_j)/(alpha_i, alpha_i)
    long cartan(size_t i, size_t j) const { return 2 * form[i][j] / form[i][i]; }

    long pair_weights(const Weight& a, const Weight& b) const {
        long s = 0;
        for (size_t i = 0; i < rank(); ++i)
            for (size_t j = 0; j < rank(); ++j) s += a[i] * form[i][j] * b[j];
        return s;
    }
    long pair_node_weight(size_t i, const Weight& b) const {
        long s = 0;
        for (size_t j = 0; j < rank(); ++j) s += form[i][j] * b[j];
        return s;
    }

    size_t label_index(const std::string& l) const {
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return i;
        throw domain_error("unknown node label: " + l);
    }

    std::vector<ValidationIssue> validate() const {
        std::vector<ValidationIssue> issues;
        size_t n = rank();
        if (form.size() != n) {
            issues.push_back({"shape", "form matrix size does not match label count"});
            return issues;
        }
        for (size_t i = 0; i < n; ++i)
            if (form[i].size() != n) {
                issues.push_back({"shape", "form matrix is not square"});
                return issues;
            }
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (form[i][j] != form[j][i])
                    issues.push_back({"symmetry", "form[" + std::to_string(i) + "][" +
                                                      std::to_string(j) + "] != transpose"});
        for (size_t i = 0; i < n; ++i)
            if (form[i][i] <= 0 || form[i][i] % 2 != 0)
                issues.push_back(
                    {"diagonal", "(alpha_" + labels[i] + ", alpha_" + labels[i] +
                                     ") = " + std::to_string(form[i][i]) +
                                     " is not a positive even integer"});
        for (size_t i = 0; i < n; ++i) {
            if (form[i][i] <= 0) continue;
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                long num = 2 * form[i][j];
                if (num > 0)
                    issues.push_back({"offdiag", "(alpha_" + labels[i] + ", alpha_" + labels[j] +
                                                     ") is positive"});
                else if (num % form[i][i] != 0)
                    issues.push_back({"offdiag", "2(alpha_" + labels[i] + ", alpha_" + labels[j] +
                                                     ") not divisible by (alpha_" + labels[i] +
                                                     ", alpha_" + labels[i] + ")"});
            }
        }
        return issues;
    }

    bool is_valid() const { return validate().empty(); }

    json to_json() const {
        json j;
        j["name"] = name;
        j["labels"] = labels;
        j["form"] = form;
        return j;
    }
};

struct DiagramAutomorphism {
    std::vector<size_t> perm;                 // images, position-indexed
    long order = 1;                           // multiplicative order n
    std::vector<std::vector<size_t>> orbits;  // partition J of the index set

    size_t apply(size_t i) const { return perm[i]; }
    size_t apply_inverse(size_t i) const {
        for (size_t k = 0; k < perm.size(); ++k)
            if (perm[k] == i) return k;
        throw internal_error("permutation is not a bijection");
    }
    bool is_identity() const {
        for (size_t i = 0; i < perm.size(); ++i)
            if (perm[i] != i) return false;
        return true;
    }
    size_t orbit_of(size_t i) const {
        for (size_t j = 0; j < orbits.size(); ++j)
            for (size_t x : orbits[j])
                if (x == i) return j;
        throw internal_error("node missing from orbit partition");
    }
};

// Validates sigma against the datum: form invariance plus no links inside
// any orbit. Throws domain_error with the violation for non-admissible input.
inline DiagramAutomorphism validate_automorphism(const CartanDatum& d,
                                                 const std::vector<size_t>& perm) {
    size_t n = d.rank();
    if (perm.size() != n) throw domain_error("sigma: wrong length");
    std::vector<bool> seen(n, false);
    for (size_t i = 0; i < n; ++i) {
        if (perm[i] >= n || seen[perm[i]]) throw domain_error("sigma: not a bijection");
        seen[perm[i]] = true;
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (d.pair(i, j) != d.pair(perm[i], perm[j]))
                throw domain_error("sigma: form is not invariant at (" + d.labels[i] + "," +
                                   d.labels[j] + ")");

    DiagramAutomorphism s;
    s.perm = perm;

    std::vector<bool> used(n, false);
    for (size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<size_t> orb;
        size_t x = i;
        do {
            orb.push_back(x);
            used[x] = true;
            x = perm[x];
        } while (x != i);
        std::sort(orb.begin(), orb.end());
        s.orbits.push_back(orb);
    }
    // admissibility: no linked pair inside an orbit
    for (auto& orb : s.orbits)
        for (size_t a = 0; a < orb.size(); ++a)
            for (size_t b = a + 1; b < orb.size(); ++b)
                if (d.pair(orb[a], orb[b]) != 0)
                    throw domain_error("non-admissible: linked orbit {" + d.labels[orb[a]] + "," +
                                       d.labels[orb[b]] + "}");

    long ord = 1;
    for (auto& orb : s.orbits) ord = std::lcm(ord, static_cast<long>(orb.size()));
    s.order = ord;
    return s;
}

inline DiagramAutomorphism identity_automorphism(const CartanDatum& d) {
    std::vector<size_t> perm(d.rank());
    std::iota(perm.begin(), perm.end(), 0);
    return validate_automorphism(d, perm);
}

// The induced Cartan datum on the orbit set J:
// (alpha_j, alpha_j) = (alpha_i, alpha_i) |j|, and off-diagonal entries are
// summed over the two orbits.
inline CartanDatum fold_datum(const CartanDatum& d, const DiagramAutomorphism& s) {
    CartanDatum f;
    f.name = d.name + "-folded";
    size_t m = s.orbits.size();
    f.labels.resize(m);
    for (size_t j = 0; j < m; ++j) {
        std::string l;
        for (size_t x : s.orbits[j]) {
            if (!l.empty()) l += "+";
            l += d.labels[x];
        }
        f.labels[j] = l;
    }
    f.form.assign(m, std::vector<long>(m, 0));
    for (size_t j = 0; j < m; ++j) {
        size_t i0 = s.orbits[j][0];
        f.form[j][j] = d.pair(i0, i0) * static_cast<long>(s.orbits[j].size());
        for (size_t k = 0; k < m; ++k) {
            if (k == j) continue;
            long sum = 0;
            for (size_t a : s.orbits[j])
                for (size_t b : s.orbits[k]) sum += d.pair(a, b);
            f.form[j][k] = sum;
        }
    }
    auto issues = f.validate();
    if (!issues.empty())
        throw internal_error("folded datum failed validation: " + issues.front().message);
    return f;
}

inline Weight sigma_on_weight(const DiagramAutomorphism& s, const Weight& b) {
    Weight w(b.rank());
    for (size_t i = 0; i < b.rank(); ++i) w[s.perm[i]] = b[i];
    return w;
}

inline bool weight_is_stable(const DiagramAutomorphism& s, const Weight& b) {
    return sigma_on_weight(s, b) == b;
}

// Folded weight of a sigma-stable weight: multiplicity per orbit.
inline Weight fold_weight(const DiagramAutomorphism& s, const Weight& b) {
    if (!weight_is_stable(s, b)) throw domain_error("weight is not sigma-stable");
    Weight w(s.orbits.size());
    for (size_t j = 0; j < s.orbits.size(); ++j) w[j] = b[s.orbits[j][0]];
    return w;
}

inline Weight unfold_weight(const DiagramAutomorphism& s, const Weight& folded, size_t rank) {
    Weight w(rank);
    for (size_t j = 0; j < s.orbits.size(); ++j)
        for (size_t x : s.orbits[j]) w[x] = folded[j];
    return w;
}

// All weights of Q_+ with height <= bound, in (height, lex) order.
inline std::vector<Weight> weights_up_to(size_t rank, long bound, bool include_zero = false) {
    std::vector<Weight> out;
    std::vector<long> cur(rank, 0);
    auto rec = [&](auto&& self, size_t pos, long rem) -> void {
        if (pos == rank) {
            out.push_back(Weight(cur));
            return;
        }
        for (long v = 0; v <= rem; ++v) {
            cur[pos] = v;
            self(self, pos + 1, rem - v);
        }
        cur[pos] = 0;
    };
    rec(rec, 0, bound);
    std::sort(out.begin(), out.end());
    if (!include_zero) out.erase(out.begin());  // drop the zero weight
    return out;
}

// Sigma-stable weights up to height bound, paired with their folded weights.
inline std::vector<std::pair<Weight, Weight>> stable_weights(const CartanDatum& d,
                                                             const DiagramAutomorphism& s,
                                                             long bound,
                                                             bool include_zero = false) {
    std::vector<std::pair<Weight, Weight>> out;
    for (auto& w : weights_up_to(d.rank(), bound, include_zero))
        if (weight_is_stable(s, w)) out.emplace_back(w, fold_weight(s, w));
    return out;
}

// Datum file: {"name": str, "labels": [str], "form": [[int]],
//              "sigma": [0-indexed images], optional "klr_params"}.
inline CartanDatum datum_from_json(const json& j) {
    CartanDatum d;
    if (!j.contains("labels") || !j.contains("form"))
        throw domain_error("datum file must contain 'labels' and 'form'");
    d.name = j.value("name", "unnamed");
    d.labels = j["labels"].get<std::vector<std::string>>();
    d.form = j["form"].get<std::vector<std::vector<long>>>();
    return d;
}

inline std::vector<size_t> sigma_from_json(const json& j, size_t rank) {
    if (!j.contains("sigma")) {
        std::vector<size_t> id(rank);
        std::iota(id.begin(), id.end(), 0);
        return id;
    }
    auto v = j["sigma"].get<std::vector<long>>();
    std::vector<size_t> perm;
    for (long x : v) {
        if (x < 0 || static_cast<size_t>(x) >= rank)
            throw domain_error("sigma image out of range");
        perm.push_back(static_cast<size_t>(x));
    }
    return perm;
}

}  // namespace qfold
