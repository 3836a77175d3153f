#pragma once

// Dual (upper global) basis per weight space: coordinates are the
// inverse-transpose of the canonical coordinate matrix, the crystal
// operators come from the e_i' / f_i actions transposed to the dual side,
// and the upper-basis axioms are verified coefficient by coefficient,
// including the q-power membership windows on the correction terms.

#include "qfold/canonical.hpp"

namespace qfold {

struct DualRecord {
    Weight weight;
    LaurentMatrix coords;                // rows: dual elements over dual monomials
    std::vector<std::vector<long>> eps;  // eps[l][i]: dual string length
};

struct CrystalEdge {
    Weight from_weight;
    size_t from_index;
    size_t node;
    size_t to_index;  // f~_i(from) at weight from + alpha_node
};

struct AxiomReport {
    bool pass = true;
    std::vector<std::string> failures;
    std::vector<CrystalEdge> edges;
    void fail(const std::string& what) {
        pass = false;
        failures.push_back(what);
    }
    void merge(const AxiomReport& o) {
        if (!o.pass) pass = false;
        failures.insert(failures.end(), o.failures.begin(), o.failures.end());
        edges.insert(edges.end(), o.edges.begin(), o.edges.end());
    }
};

class DualBasis {
  public:
    explicit DualBasis(Canon& canon) : canon_(canon), eng_(canon.engine()) {}

    const CartanDatum& datum() const { return eng_.datum(); }

    // f_i action on weight-gamma canonical elements expanded at gamma + a_i;
    // shape: dim(gamma + a_i) x dim(gamma)
    const LaurentMatrix& f_matrix(size_t i, const Weight& gamma) {
        auto key = std::make_pair(gamma, i);
        auto it = fcache_.find(key);
        if (it != fcache_.end()) return it->second;
        const BasisRecord& rec = canon_.basis(gamma);
        const WeightSpace& ws = eng_.space(gamma);
        const BasisRecord& trec = canon_.basis(gamma.plus(i));
        LaurentMatrix m(trec.elements.size(), std::vector<Laurent>(rec.elements.size()));
        for (size_t k = 0; k < rec.elements.size(); ++k) {
            ScaledWords x = eng_.element_from_coords(ws, rec.elements[k].coords);
            ScaledWords fx = eng_.dp_left_mult(i, 1, x);
            auto u = canon_.expand_in_canonical(fx);
            for (size_t l = 0; l < u.size(); ++l) m[l][k] = u[l];
        }
        auto [jt, ins] = fcache_.emplace(key, std::move(m));
        return jt->second;
    }

    // e_i' action on weight-beta canonical elements expanded at beta - a_i;
    // shape: dim(beta - a_i) x dim(beta)
    const LaurentMatrix& e_matrix(size_t i, const Weight& beta) {
        auto key = std::make_pair(beta, i);
        auto it = ecache_.find(key);
        if (it != ecache_.end()) return it->second;
        const BasisRecord& rec = canon_.basis(beta);
        const WeightSpace& ws = eng_.space(beta);
        const BasisRecord& trec = canon_.basis(beta.minus(i));
        LaurentMatrix m(trec.elements.size(), std::vector<Laurent>(rec.elements.size()));
        for (size_t k = 0; k < rec.elements.size(); ++k) {
            ScaledWords x = eng_.element_from_coords(ws, rec.elements[k].coords);
            ScaledWords ex = e_prime_scaled(i, x);
            if (ex.empty()) continue;
            auto u = canon_.expand_in_canonical(ex);
            for (size_t l = 0; l < u.size(); ++l) m[l][k] = u[l];
        }
        auto [jt, ins] = ecache_.emplace(key, std::move(m));
        return jt->second;
    }

    // dual string length: max k with (e_i')^k nonzero on the dual element.
    // On duals e_i' at weight w is the transpose of f_i into w.
    long dual_epsilon(size_t i, const Weight& beta, size_t l) {
        std::vector<Laurent> v(canon_.basis(beta).elements.size());
        v[l] = Laurent::one();
        Weight w = beta;
        long k = 0;
        while (w.can_subtract(i, 1)) {
            const LaurentMatrix& f = f_matrix(i, w.minus(i));  // dim(w) x dim(w - a_i)
            size_t cols = f.empty() ? 0 : f[0].size();
            std::vector<Laurent> next(cols);
            bool nonzero = false;
            for (size_t c = 0; c < cols; ++c) {
                Laurent acc;
                for (size_t rr = 0; rr < v.size(); ++rr)
                    if (!v[rr].is_zero() && !f[rr][c].is_zero()) acc += v[rr] * f[rr][c];
                if (!acc.is_zero()) nonzero = true;
                next[c] = std::move(acc);
            }
            if (!nonzero) break;
            v = std::move(next);
            w = w.minus(i);
            ++k;
        }
        return k;
    }

    const DualRecord& dual_basis(const Weight& b) {
        auto it = dcache_.find(b);
        if (it != dcache_.end()) return it->second;
        const BasisRecord& rec = canon_.basis(b);
        DualRecord d;
        d.weight = b;
        const LaurentMatrix& inv = canon_.inverse_coords(b);
        size_t r = rec.elements.size();
        d.coords.assign(r, std::vector<Laurent>(r));
        for (size_t l = 0; l < r; ++l)
            for (size_t s = 0; s < r; ++s) d.coords[l][s] = inv[s][l];
        d.eps.assign(r, std::vector<long>(datum().rank(), 0));
        for (size_t l = 0; l < r; ++l)
            for (size_t i = 0; i < datum().rank(); ++i) d.eps[l][i] = dual_epsilon(i, b, l);
        auto [jt, ins] = dcache_.emplace(b, std::move(d));
        return jt->second;
    }

    // Axioms on one weight space. e~ and f~ targets are recorded so that a
    // driver can check the compositions across weights.
    AxiomReport verify_upper_axioms(const Weight& b) {
        AxiomReport rep;
        const DualRecord& dual = dual_basis(b);
        size_t rank = datum().rank();
        size_t r = dual.coords.size();

        // (vii) bar-invariance of dual coordinates
        for (size_t l = 0; l < r; ++l)
            for (auto& c : dual.coords[l])
                if (!c.bar_invariant()) {
                    rep.fail("dual element " + std::to_string(l) +
                             " not bar-invariant at weight " + b.str());
                    break;
                }

        for (size_t i = 0; i < rank; ++i) {
            long di = datum().d(i);

            // (iii) e_i' b*_l = [eps]_i e~_i b*_l + corrections with
            // eps(b') < eps(b) - 1 and E in q q_i^{1-eps} Z[q]
            if (b.can_subtract(i, 1)) {
                const LaurentMatrix& f = f_matrix(i, b.minus(i));
                const DualRecord& lower = dual_basis(b.minus(i));
                for (size_t l = 0; l < r; ++l) {
                    long eps = dual.eps[l][i];
                    const std::vector<Laurent>& row = f[l];
                    bool all_zero = true;
                    for (auto& c : row)
                        if (!c.is_zero()) all_zero = false;
                    if (eps == 0) {
                        if (!all_zero)
                            rep.fail("(iii) e' nonzero on eps-0 dual at weight " + b.str());
                        continue;
                    }
                    if (all_zero) {
                        rep.fail("(iii) e' zero on positive-eps dual at weight " + b.str());
                        continue;
                    }
                    Laurent head = quantum_int(eps, di);
                    size_t head_count = 0;
                    for (size_t k = 0; k < row.size(); ++k) {
                        if (row[k].is_zero()) continue;
                        long eps_k = lower.eps[k][i];
                        if (row[k] == head && eps_k == eps - 1) {
                            ++head_count;
                            continue;
                        }
                        if (eps_k >= eps - 1) {
                            rep.fail("(iii) correction term with eps >= eps(b)-1 at weight " +
                                     b.str());
                            continue;
                        }
                        if (row[k].low_exp() < 1 + di * (1 - eps))
                            rep.fail("(iii) coefficient outside q q_i^{1-eps} Z[q] at weight " +
                                     b.str());
                    }
                    if (head_count != 1)
                        rep.fail("(iii) head [eps]_i not unique at weight " + b.str());
                }
            }

            // (iv) f_i b*_l = q_i^{-eps} f~_i b*_l + corrections with
            // eps(b') < eps(b) + 1 and F in q q_i^{-eps} Z[q]
            {
                const LaurentMatrix& e = e_matrix(i, b.plus(i));
                const DualRecord& upper = dual_basis(b.plus(i));
                for (size_t l = 0; l < r; ++l) {
                    long eps = dual.eps[l][i];
                    const std::vector<Laurent>& row = e[l];
                    Laurent head = Laurent::q_power(-di * eps);
                    size_t head_idx = upper.coords.size();
                    size_t head_count = 0;
                    for (size_t k = 0; k < row.size(); ++k) {
                        if (row[k].is_zero()) continue;
                        long eps_k = upper.eps[k][i];
                        if (row[k] == head && eps_k == eps + 1) {
                            ++head_count;
                            head_idx = k;
                            continue;
                        }
                        if (eps_k >= eps + 1) {
                            rep.fail("(iv) correction term with eps >= eps(b)+1 at weight " +
                                     b.str());
                            continue;
                        }
                        if (row[k].low_exp() < 1 - di * eps)
                            rep.fail("(iv) coefficient outside q q_i^{-eps} Z[q] at weight " +
                                     b.str());
                    }
                    if (head_count != 1) {
                        rep.fail("(iv) head q_i^{-eps} not unique at weight " + b.str());
                        continue;
                    }
                    rep.edges.push_back({b, l, i, head_idx});
                }
            }
        }
        return rep;
    }

    // e~_i target index of a dual element with eps > 0, located through (iii)
    std::optional<size_t> etilde(size_t i, const Weight& b, size_t l) {
        const DualRecord& dual = dual_basis(b);
        long eps = dual.eps[l][i];
        if (eps == 0 || !b.can_subtract(i, 1)) return std::nullopt;
        const LaurentMatrix& f = f_matrix(i, b.minus(i));
        const DualRecord& lower = dual_basis(b.minus(i));
        Laurent head = quantum_int(eps, datum().d(i));
        for (size_t k = 0; k < f[l].size(); ++k)
            if (f[l][k] == head && lower.eps[k][i] == eps - 1) return k;
        return std::nullopt;
    }

    // f~_i target index
    std::optional<size_t> ftilde(size_t i, const Weight& b, size_t l) {
        const DualRecord& dual = dual_basis(b);
        long eps = dual.eps[l][i];
        const LaurentMatrix& e = e_matrix(i, b.plus(i));
        const DualRecord& upper = dual_basis(b.plus(i));
        Laurent head = Laurent::q_power(-datum().d(i) * eps);
        for (size_t k = 0; k < e[l].size(); ++k)
            if (e[l][k] == head && upper.eps[k][i] == eps + 1) return k;
        return std::nullopt;
    }

    // Full axiom run over all weights of height <= bound: (i)-(vii) with the
    // tilde compositions (v), (vi), plus 1* at weight zero.
    AxiomReport verify_axioms_up_to(long bound) {
        AxiomReport rep;
        size_t rank = datum().rank();
        // (ii): the dual of 1 is the weight-zero dual basis element
        {
            const DualRecord& d0 = dual_basis(Weight(rank));
            if (d0.coords.size() != 1 || !d0.coords[0][0].is_one())
                rep.fail("1* is not the weight-zero dual element");
        }
        for (auto& b : weights_up_to(rank, bound, true)) {
            AxiomReport here = verify_upper_axioms(b);
            rep.merge(here);
            // (v)/(vi) compositions
            const DualRecord& dual = dual_basis(b);
            for (size_t i = 0; i < rank; ++i)
                for (size_t l = 0; l < dual.coords.size(); ++l) {
                    auto up = ftilde(i, b, l);
                    if (!up) {
                        rep.fail("(iv) f~ undefined at weight " + b.str());
                        continue;
                    }
                    auto back = etilde(i, b.plus(i), *up);
                    if (!back || *back != l) rep.fail("(v) e~ f~ != id at weight " + b.str());
                    if (dual.eps[l][i] > 0) {
                        auto down = etilde(i, b, l);
                        if (!down) {
                            rep.fail("(iii) e~ undefined at weight " + b.str());
                            continue;
                        }
                        auto fwd = ftilde(i, b.minus(i), *down);
                        if (!fwd || *fwd != l)
                            rep.fail("(vi) f~ e~ != id at weight " + b.str());
                    }
                }
        }
        return rep;
    }

    // primal eps (membership rank tests) equals dual eps ((e')^k iteration)
    bool epsilon_duality(const Weight& b, std::vector<std::string>* failures = nullptr) {
        const BasisRecord& rec = canon_.basis(b);
        const DualRecord& dual = dual_basis(b);
        bool ok = true;
        for (size_t l = 0; l < rec.elements.size(); ++l)
            for (size_t i = 0; i < datum().rank(); ++i)
                if (rec.elements[l].eps[i] != dual.eps[l][i]) {
                    ok = false;
                    if (failures)
                        failures->push_back(
                            "element " + std::to_string(l) + " node " + std::to_string(i) +
                            " at weight " + b.str() + ": primal " +
                            std::to_string(rec.elements[l].eps[i]) + " != dual " +
                            std::to_string(dual.eps[l][i]));
                }
        return ok;
    }

    ScaledWords e_prime_scaled(size_t i, const ScaledWords& x) const {
        ScaledWords r;
        r.kappa = x.kappa;
        if (x.weight[i] == 0) {
            r.weight = x.weight;
            return r;
        }
        r.weight = x.weight.minus(i);
        const CartanDatum& d = eng_.datum();
        for (auto& [w, c] : x.num) {
            long twist = 0;
            for (size_t k = 0; k < w.size(); ++k) {
                if (w[k] == i) r.add(w.without(k), c.shifted(-twist));
                twist += d.pair(i, w[k]);
            }
        }
        return r;
    }

  private:
    Canon& canon_;
    Engine& eng_;
    std::map<std::pair<Weight, size_t>, LaurentMatrix> fcache_, ecache_;
    std::map<Weight, DualRecord> dcache_;
};

}  // namespace qfold
