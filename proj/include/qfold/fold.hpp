#pragma once

// The sigma-fixed subalgebra, the mod-ell quotient, orbit sums, the map Phi
// sending folded divided powers to g-images, the sign table matching fixed
// canonical elements to folded canonical elements, structure-constant
// integrality for folded types, and the dual compatibility of the e'-actions.

#include "qfold/canonical.hpp"

namespace qfold {

inline std::vector<Laurent> mod_ell_vec(const std::vector<Laurent>& v, unsigned long ell) {
    std::vector<Laurent> r;
    r.reserve(v.size());
    for (auto& x : v) r.push_back(mod_ell(x, ell));
    return r;
}

inline LaurentMatrix mod_ell_mat(const LaurentMatrix& m, unsigned long ell) {
    LaurentMatrix r;
    r.reserve(m.size());
    for (auto& row : m) r.push_back(mod_ell_vec(row, ell));
    return r;
}

struct StableWeightData {
    Weight beta;          // sigma-stable unfolded weight
    Weight folded;        // its weight over the orbit set
    std::vector<size_t> perm;   // sigma action on canonical basis indices
    std::vector<size_t> fixed;  // indices of sigma-fixed basis elements
};

struct WeightVerdict {
    Weight beta;
    Weight folded;
    size_t fixed_count = 0;
    size_t folded_dim = 0;
    bool dims_match = false;
    bool phi_invertible = false;
    std::string phi_det;
    size_t serre_checked = 0;
    bool serre_ok = true;
    bool orbit_sums_vanish = true;
    bool pass = false;
};

struct SignEntry {
    Weight beta;
    size_t index;        // index in the fixed list
    int sign;            // +1 or -1
    size_t folded_index; // canonical basis index on the folded side
};

class FoldContext {
  public:
    FoldContext(const CartanDatum& d, const DiagramAutomorphism& s, unsigned long ell,
                long bound, long trunc_floor = 8)
        : datum_(d),
          sigma_(s),
          ell_(ell),
          bound_(bound),
          folded_(fold_datum(d, s)),
          eng_(d, trunc_floor),
          canon_(eng_),
          folded_eng_(folded_, trunc_floor),
          folded_canon_(folded_eng_) {
        Int l(ell);
        if (ell < 2 || mpz_probab_prime_p(l.get_mpz_t(), 32) == 0)
            throw domain_error("fold: ell must be prime");
        long n = sigma_.order;
        while (n % static_cast<long>(ell) == 0) n /= static_cast<long>(ell);
        if (n != 1)
            throw domain_error("fold: the automorphism order " + std::to_string(sigma_.order) +
                               " is not a power of ell = " + std::to_string(ell));
        if (bound_ < 1) throw domain_error("fold: bound must be >= 1");
    }

    const CartanDatum& datum() const { return datum_; }
    const CartanDatum& folded() const { return folded_; }
    const DiagramAutomorphism& sigma() const { return sigma_; }
    unsigned long ell() const { return ell_; }
    long bound() const { return bound_; }
    Canon& canon() { return canon_; }
    Canon& folded_canon() { return folded_canon_; }
    Engine& engine() { return eng_; }
    Engine& folded_engine() { return folded_eng_; }

    // ---- sigma on canonical bases ----------------------------------------

    const StableWeightData& stable_data(const Weight& beta) {
        auto it = stable_.find(beta);
        if (it != stable_.end()) return it->second;
        if (!weight_is_stable(sigma_, beta)) throw domain_error("weight is not sigma-stable");
        StableWeightData sd;
        sd.beta = beta;
        sd.folded = fold_weight(sigma_, beta);
        const BasisRecord& rec = canon_.basis(beta);
        const WeightSpace& ws = eng_.space(beta);
        sd.perm.resize(rec.elements.size());
        for (size_t k = 0; k < rec.elements.size(); ++k) {
            ScaledWords x = eng_.element_from_coords(ws, rec.elements[k].coords);
            ScaledWords sx;
            sx.weight = beta;
            sx.kappa = x.kappa;
            for (auto& [w, c] : x.num) sx.add(w.mapped(sigma_), c);
            auto img = eng_.expand_integral(sx);
            size_t target = rec.elements.size();
            for (size_t l = 0; l < rec.elements.size(); ++l)
                if (rec.elements[l].coords == img) {
                    target = l;
                    break;
                }
            if (target == rec.elements.size())
                throw verify_error("sigma does not permute the canonical basis at weight " +
                                   beta.str());
            sd.perm[k] = target;
        }
        for (size_t k = 0; k < sd.perm.size(); ++k)
            if (sd.perm[k] == k) sd.fixed.push_back(k);
        auto [jt, ins] = stable_.emplace(beta, std::move(sd));
        return jt->second;
    }

    std::vector<size_t> stable_basis(const Weight& beta) { return stable_data(beta).fixed; }

    // ---- the quotient -----------------------------------------------------

    // Expands an integral element, reduces mod ell, verifies orbit-constancy
    // of the coordinates, and projects onto the sigma-fixed basis indices.
    std::vector<Laurent> fold_reduce(const ScaledWords& x) {
        const StableWeightData& sd = stable_data(x.weight);
        auto coords = mod_ell_vec(canon_.expand_in_canonical(x), ell_);
        // orbit constancy along the sigma-permutation of basis elements
        for (size_t k = 0; k < coords.size(); ++k)
            if (coords[k] != coords[sd.perm[k]])
                throw verify_error("coordinates not constant on sigma-orbits at weight " +
                                   x.weight.str());
        std::vector<Laurent> out;
        out.reserve(sd.fixed.size());
        for (size_t k : sd.fixed) out.push_back(coords[k]);
        return out;
    }

    // f~_j^{(a)} = prod_{i in j} f_i^{(a)} applied on the left of x
    ScaledWords tilde_f(const ScaledWords& x, size_t orbit, long a) {
        ScaledWords r = x;
        const auto& orb = sigma_.orbits[orbit];
        for (auto it = orb.rbegin(); it != orb.rend(); ++it)
            r = eng_.dp_left_mult(*it, a, r);
        return r;
    }

    ScaledWords unit_element() const {
        ScaledWords s;
        s.weight = Weight(datum_.rank());
        s.add(Word{}, Laurent::one());
        return s;
    }

    // image of f~_j^{(a)} in the quotient, as coordinates on the fixed basis
    std::vector<Laurent> g_monomial(size_t orbit, long a) {
        return fold_reduce(tilde_f(unit_element(), orbit, a));
    }

    // ---- Phi per weight --------------------------------------------------

    // columns: g-images of the folded selected monomials, on the fixed basis
    const LaurentMatrix& phi_matrix(const Weight& beta) {
        auto it = phi_.find(beta);
        if (it != phi_.end()) return it->second;
        const StableWeightData& sd = stable_data(beta);
        const WeightSpace& fws = folded_eng_.space(sd.folded);
        LaurentMatrix m(sd.fixed.size(), std::vector<Laurent>(fws.dim, Laurent(ell_)));
        for (size_t c = 0; c < fws.dim; ++c) {
            ScaledWords x = unit_element();
            const Monomial& mono = fws.sel(c);
            // rightmost factor applies first
            for (auto f = mono.factors.rbegin(); f != mono.factors.rend(); ++f)
                x = tilde_f(x, f->first, f->second);
            auto col = fold_reduce(x);
            for (size_t r = 0; r < col.size(); ++r) m[r][c] = col[r];
        }
        auto [jt, ins] = phi_.emplace(beta, std::move(m));
        return jt->second;
    }

    // folded canonical coordinate matrix mod ell and its inverse transpose
    LaurentMatrix folded_coords_mod(const Weight& foldedw) {
        return mod_ell_mat(folded_canon_.coord_matrix(folded_canon_.basis(foldedw)), ell_);
    }

    // Phi in canonical coordinates both sides: P = M_phi * C^T mod ell,
    // column k = image of the k-th folded canonical element on the fixed basis
    LaurentMatrix phi_canonical(const Weight& beta) {
        const StableWeightData& sd = stable_data(beta);
        const LaurentMatrix& mphi = phi_matrix(beta);
        LaurentMatrix ct = folded_coords_mod(sd.folded);
        // transpose
        LaurentMatrix t(ct[0].size(), std::vector<Laurent>(ct.size(), Laurent(ell_)));
        for (size_t i = 0; i < ct.size(); ++i)
            for (size_t j = 0; j < ct[0].size(); ++j) t[j][i] = ct[i][j];
        return matmul(mphi, t);
    }

    // ---- per-weight verdict -----------------------------------------------

    WeightVerdict check_weight(const Weight& beta) {
        const StableWeightData& sd = stable_data(beta);
        WeightVerdict v;
        v.beta = beta;
        v.folded = sd.folded;
        v.fixed_count = sd.fixed.size();
        v.folded_dim = folded_eng_.dim(sd.folded);
        v.dims_match = v.fixed_count == v.folded_dim;

        if (v.dims_match && v.fixed_count > 0) {
            Laurent det = bareiss_det(phi_matrix(beta));
            v.phi_invertible = det.is_unit_monomial();
            v.phi_det = det.str();
        }

        // orbit sums of non-fixed basis elements map to zero; one check per orbit
        const BasisRecord& rec = canon_.basis(beta);
        for (size_t k = 0; k < rec.elements.size(); ++k) {
            if (sd.perm[k] == k) continue;
            bool representative = true;
            for (size_t at = sd.perm[k]; at != k; at = sd.perm[at])
                if (at < k) representative = false;
            if (!representative) continue;
            auto proj = fold_reduce(orbit_sum_element(beta, k));
            for (auto& c : proj)
                if (!c.is_zero()) v.orbit_sums_vanish = false;
        }

        // folded Serre elements whose stable weight fits inside the bound
        for (size_t j = 0; j < sigma_.orbits.size(); ++j)
            for (size_t jp = 0; jp < sigma_.orbits.size(); ++jp) {
                if (j == jp) continue;
                Weight sw = serre_weight(j, jp);
                if (!(sw == beta)) continue;
                ++v.serre_checked;
                auto img = fold_reduce(serre_g_image(j, jp));
                for (auto& c : img)
                    if (!c.is_zero()) v.serre_ok = false;
            }

        v.pass = v.dims_match && (v.fixed_count == 0 || v.phi_invertible) && v.serre_ok &&
                 v.orbit_sums_vanish;
        return v;
    }

    // orbit sum of one canonical basis element as a ScaledWords element
    ScaledWords orbit_sum_element(const Weight& beta, size_t k) {
        const StableWeightData& sd = stable_data(beta);
        const BasisRecord& rec = canon_.basis(beta);
        const WeightSpace& ws = eng_.space(beta);
        std::vector<size_t> orbit{k};
        size_t at = sd.perm[k];
        while (at != k) {
            orbit.push_back(at);
            at = sd.perm[at];
        }
        ScaledWords acc;
        acc.weight = beta;
        acc.kappa = ws.K;
        for (size_t idx : orbit) {
            ScaledWords x = eng_.element_from_coords(ws, rec.elements[idx].coords);
            // element_from_coords uses kappa = ws.K
            for (auto& [w, c] : x.num) acc.add(w, c);
        }
        return acc;
    }

    // weight of the folded q-Serre element for the orbit pair (j, j')
    Weight serre_weight(size_t j, size_t jp) {
        long a = folded_.cartan(j, jp);
        Weight fw(folded_.labels.size());
        fw[j] = 1 - a;
        fw[jp] = 1;
        return unfold_weight(sigma_, fw, datum_.rank());
    }

    // sum_k (-1)^k f~_j^{(k)} f~_j' f~_j^{(1-a-k)} through the g-images
    ScaledWords serre_g_image(size_t j, size_t jp) {
        long bound = 1 - folded_.cartan(j, jp);
        ScaledWords acc;
        acc.weight = serre_weight(j, jp);
        acc.kappa = Laurent::one();
        bool first = true;
        for (long k = 0; k <= bound; ++k) {
            ScaledWords t = unit_element();
            t = tilde_f(t, j, bound - k);
            t = tilde_f(t, jp, 1);
            t = tilde_f(t, j, k);
            if (k % 2 == 1)
                for (auto& [w, c] : t.num) c = -c;
            if (first) {
                acc = t;
                first = false;
            } else {
                ScaledWords merged;
                merged.weight = acc.weight;
                merged.kappa = acc.kappa * t.kappa;
                for (auto& [w, c] : acc.num) merged.add(w, c * t.kappa);
                for (auto& [w, c] : t.num) merged.add(w, c * acc.kappa);
                acc = std::move(merged);
            }
        }
        return acc;
    }

    // ---- sign table ---------------------------------------------------------

    std::vector<SignEntry> sign_table(const Weight& beta) {
        const StableWeightData& sd = stable_data(beta);
        std::vector<SignEntry> out;
        if (sd.fixed.empty()) return out;
        const LaurentMatrix& mphi = phi_matrix(beta);
        Elimination elim = bareiss_decompose(mphi);
        Laurent det = elim.det();
        if (!det.is_unit_monomial())
            throw verify_error("phi matrix is not invertible at weight " + beta.str());
        LaurentMatrix inv_coords = mod_ell_mat(folded_canon_.inverse_coords(sd.folded), ell_);
        for (size_t t = 0; t < sd.fixed.size(); ++t) {
            std::vector<Laurent> unit(sd.fixed.size(), Laurent(ell_));
            unit[t] = Laurent::one(ell_);
            // y solves M_phi y = p_n * e_t; y / p_n are the folded monomial coords
            std::vector<Laurent> y = ff_solve(elim, unit);
            const Laurent& pn = elim.det_up_to_sign();
            std::vector<Laurent> mon(y.size());
            for (size_t s = 0; s < y.size(); ++s) mon[s] = exact_div(y[s], pn);
            // to folded canonical coordinates: u = (C^{-1})^T mon
            size_t r = inv_coords.size();
            std::vector<Laurent> u(r, Laurent(ell_));
            for (size_t kk = 0; kk < r; ++kk)
                for (size_t l = 0; l < r; ++l)
                    if (!inv_coords[l][kk].is_zero() && !mon[l].is_zero())
                        u[kk] += inv_coords[l][kk] * mon[l];
            size_t nz = r;
            int sign = 0;
            for (size_t kk = 0; kk < r; ++kk) {
                if (u[kk].is_zero()) continue;
                if (nz != r) {
                    nz = r + 1;
                    break;
                }
                nz = kk;
                if (u[kk] == Laurent::one(ell_)) sign = 1;
                else if (u[kk] == Laurent(Int(-1), 0, ell_)) sign = -1;
            }
            if (nz >= r || sign == 0)
                throw verify_error("fixed element does not map to +-(folded basis element) at " +
                                   beta.str());
            out.push_back({beta, t, sign, nz});
        }
        return out;
    }

    // ---- structure constants of the folded datum ----------------------------

    struct StructureOutcome {
        bool all_laurent = true;
        size_t products = 0;
        size_t negative_coeff_products = 0;  // positivity counterexample candidates
    };

    StructureOutcome folded_structure_check() {
        StructureOutcome out;
        auto all = weights_up_to(folded_.rank(), bound_ - 1);
        for (auto& w1 : all)
            for (auto& w2 : all) {
                if (w1.height() + w2.height() > bound_) continue;
                size_t n1 = folded_canon_.basis(w1).elements.size();
                size_t n2 = folded_canon_.basis(w2).elements.size();
                for (size_t i1 = 0; i1 < n1; ++i1)
                    for (size_t i2 = 0; i2 < n2; ++i2) {
                        ++out.products;
                        bool neg = false;
                        for (auto& c :
                             folded_canon_.structure_constants(w1, i1, w2, i2))
                            if (!c.coeffs_nonnegative()) neg = true;
                        if (neg) ++out.negative_coeff_products;
                    }
            }
        return out;
    }

    // ---- dual compatibility ---------------------------------------------------

    // On V_q the operator f~_j^{(n)} has a matrix A on fixed-basis coordinates;
    // under Phi (canonical coordinates both sides) it must match the folded
    // f_j^{(n)}: A P_{beta'} = P_beta B. Transposing gives the e'-statement.
    bool dual_compat_weight(const Weight& beta, size_t orbit, long n,
                            std::string* reason = nullptr) {
        const StableWeightData& sd = stable_data(beta);
        Weight betap = beta;
        for (size_t i : sigma_.orbits[orbit]) {
            if (!betap.can_subtract(i, n)) return true;  // nothing to check
            betap = betap.minus(i, n);
        }
        const StableWeightData& sdp = stable_data(betap);
        const BasisRecord& prec = canon_.basis(betap);
        const WeightSpace& pws = eng_.space(betap);

        // A: fixed(beta') -> fixed(beta)
        LaurentMatrix a(sd.fixed.size(), std::vector<Laurent>(sdp.fixed.size(), Laurent(ell_)));
        for (size_t c = 0; c < sdp.fixed.size(); ++c) {
            ScaledWords x =
                eng_.element_from_coords(pws, prec.elements[sdp.fixed[c]].coords);
            auto col = fold_reduce(tilde_f(x, orbit, n));
            for (size_t r = 0; r < col.size(); ++r) a[r][c] = col[r];
        }

        // B: folded f_j^{(n)} in canonical coordinates mod ell
        const BasisRecord& fprec = folded_canon_.basis(sdp.folded);
        const WeightSpace& fpws = folded_eng_.space(sdp.folded);
        LaurentMatrix b(folded_canon_.basis(sd.folded).elements.size(),
                        std::vector<Laurent>(fprec.elements.size(), Laurent(ell_)));
        for (size_t c = 0; c < fprec.elements.size(); ++c) {
            ScaledWords x = folded_eng_.element_from_coords(fpws, fprec.elements[c].coords);
            ScaledWords fx = folded_eng_.dp_left_mult(orbit, n, x);
            auto col = mod_ell_vec(folded_canon_.expand_in_canonical(fx), ell_);
            for (size_t r = 0; r < col.size(); ++r) b[r][c] = col[r];
        }

        LaurentMatrix lhs = matmul(a, phi_canonical(betap));
        LaurentMatrix rhs = matmul(phi_canonical(beta), b);
        if (!(lhs == rhs)) {
            if (reason)
                *reason = "operator mismatch at weight " + beta.str() + ", orbit " +
                          std::to_string(orbit) + ", n = " + std::to_string(n);
            return false;
        }
        return true;
    }

    // sign multiplicativity: the product of two fixed elements, pushed through
    // Phi^{-1}, matches the folded structure constants with the table signs
    bool sign_product_consistent(const Weight& b1, size_t t1, const Weight& b2, size_t t2,
                                 const std::vector<SignEntry>& s1,
                                 const std::vector<SignEntry>& s2) {
        const StableWeightData& d1 = stable_data(b1);
        const StableWeightData& d2 = stable_data(b2);
        Weight bs(b1.rank());
        for (size_t i = 0; i < b1.rank(); ++i) bs[i] = b1[i] + b2[i];
        const StableWeightData& ds = stable_data(bs);
        auto table_s = sign_table(bs);

        const BasisRecord& r1 = canon_.basis(b1);
        const BasisRecord& r2 = canon_.basis(b2);
        ScaledWords x = eng_.element_from_coords(eng_.space(b1), r1.elements[d1.fixed[t1]].coords);
        ScaledWords y = eng_.element_from_coords(eng_.space(b2), r2.elements[d2.fixed[t2]].coords);
        auto v = fold_reduce(eng_.product(x, y));

        // push the product through the sign table: coefficients on folded basis
        std::vector<Laurent> lhs(folded_canon_.basis(ds.folded).elements.size(), Laurent(ell_));
        for (size_t t = 0; t < v.size(); ++t) {
            if (v[t].is_zero()) continue;
            const SignEntry& se = table_s[t];
            Laurent c = v[t];
            if (se.sign < 0) c = -c;
            lhs[se.folded_index] += c;
        }

        // folded side: signs of the factors times the structure constants
        auto sc = folded_canon_.structure_constants(d1.folded, s1[t1].folded_index, d2.folded,
                                                    s2[t2].folded_index);
        int sgn = s1[t1].sign * s2[t2].sign;
        std::vector<Laurent> rhs(sc.size(), Laurent(ell_));
        for (size_t k = 0; k < sc.size(); ++k) {
            Laurent c = mod_ell(sc[k], ell_);
            rhs[k] = sgn < 0 ? -c : c;
        }
        return lhs == rhs;
    }

    std::vector<std::pair<Weight, Weight>> stable_weights_in_bound(bool include_zero = false) {
        return stable_weights(datum_, sigma_, bound_, include_zero);
    }

  private:
    CartanDatum datum_;
    DiagramAutomorphism sigma_;
    unsigned long ell_;
    long bound_;
    CartanDatum folded_;
    Engine eng_;
    Canon canon_;
    Engine folded_eng_;
    Canon folded_canon_;
    std::map<Weight, StableWeightData> stable_;
    std::map<Weight, LaurentMatrix> phi_;
};

}  // namespace qfold
