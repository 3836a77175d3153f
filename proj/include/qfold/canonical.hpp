#pragma once

// Canonical basis construction per weight space: candidates f_i^{(n)} y over
// basis elements y with eps_i(y) = 0, processed in descending n, corrected by
// symmetric rounding against already-finalized elements of larger eps_i, and
// accepted on an almost-orthonormality check. Certification re-verifies every
// claim independently at doubled truncation order.

#include <algorithm>
#include <functional>

#include "qfold/engine.hpp"
#include "qfold/series.hpp"

namespace qfold {

struct Provenance {
    size_t node = 0;
    long n = 0;
    size_t parent = 0;  // index into the record at weight - n*alpha_node
};

struct BasisElement {
    std::vector<Laurent> coords;  // in the selected monomial basis, Laurent
    std::vector<Laurent> wn;      // word-basis numerators: coords_a * K/kappa_a
    std::vector<long> eps;        // eps_i per node
    Provenance prov;
};

struct BasisRecord {
    Weight weight;
    size_t dim = 0;
    std::vector<BasisElement> elements;
    long trunc = 0;      // truncation order used during construction
    bool certified = false;
};

struct CertifyReport {
    bool pass = true;
    long trunc1 = 0, trunc2 = 0;
    std::vector<std::string> failures;
    void fail(const std::string& what) {
        pass = false;
        failures.push_back(what);
    }
};

class Canon {
  public:
    explicit Canon(Engine& eng, long iter_bound = 32) : eng_(eng), iter_bound_(iter_bound) {
        node_order_.resize(eng.datum().rank());
        for (size_t i = 0; i < node_order_.size(); ++i) node_order_[i] = i;
    }

    Engine& engine() { return eng_; }
    const CartanDatum& datum() const { return eng_.datum(); }

    // candidate interleaving across nodes; the output set is order-independent
    void set_node_order(std::vector<size_t> order) { node_order_ = std::move(order); }

    const BasisRecord& basis(const Weight& b) {
        {
            std::lock_guard<std::mutex> lk(mtx_);
            auto it = cache_.find(b);
            if (it != cache_.end()) return *it->second;
        }
        auto rec = std::make_shared<BasisRecord>(construct(b));
        std::lock_guard<std::mutex> lk(mtx_);
        auto [it, ins] = cache_.emplace(b, std::move(rec));
        return *it->second;
    }

    // adopt an externally stored record (result cache); word-basis numerators
    // are rebuilt from the coordinates
    void preload(BasisRecord rec) {
        const WeightSpace& ws = eng_.space(rec.weight);
        if (rec.elements.size() != ws.dim)
            throw domain_error("preload: element count differs from dimension");
        for (auto& e : rec.elements) {
            if (e.coords.size() != ws.dim) throw domain_error("preload: wrong coordinate size");
            e.wn = eng_.wnum(ws, e.coords);
            if (e.eps.size() != datum().rank()) throw domain_error("preload: wrong eps table");
        }
        std::lock_guard<std::mutex> lk(mtx_);
        cache_.emplace(rec.weight, std::make_shared<BasisRecord>(std::move(rec)));
    }

    // coordinate matrix, rows = basis elements
    LaurentMatrix coord_matrix(const BasisRecord& rec) const {
        LaurentMatrix c;
        c.reserve(rec.elements.size());
        for (auto& e : rec.elements) c.push_back(e.coords);
        return c;
    }

    // inverse of the coordinate matrix; entries are Laurent because the
    // transition determinant is a unit
    const LaurentMatrix& inverse_coords(const Weight& b) {
        {
            std::lock_guard<std::mutex> lk(mtx_);
            auto it = inv_cache_.find(b);
            if (it != inv_cache_.end()) return it->second;
        }
        const BasisRecord& rec = basis(b);
        LaurentMatrix c = coord_matrix(rec);
        auto [adj, det] = adjugate(c);
        if (!det.is_unit_monomial())
            throw verify_error("transition matrix determinant is not a unit at weight " +
                               b.str());
        long k = det.low_exp();
        bool neg = det.coeff(k) < 0;
        LaurentMatrix inv(adj.size(), std::vector<Laurent>(adj.size()));
        for (size_t i = 0; i < adj.size(); ++i)
            for (size_t j = 0; j < adj.size(); ++j) {
                inv[i][j] = adj[i][j].shifted(-k);
                if (neg) inv[i][j] = -inv[i][j];
            }
        std::lock_guard<std::mutex> lk(mtx_);
        auto [it, ins] = inv_cache_.emplace(b, std::move(inv));
        return it->second;
    }

    // expand an integral element in the canonical basis: coords in the
    // monomial basis, then u = (C^{-1})^T c
    std::vector<Laurent> expand_in_canonical(const ScaledWords& x) {
        std::vector<Laurent> c = eng_.expand_integral(x);
        return to_canonical(x.weight, c);
    }

    std::vector<Laurent> to_canonical(const Weight& b, const std::vector<Laurent>& monomial_coords) {
        const LaurentMatrix& inv = inverse_coords(b);
        size_t r = inv.size();
        std::vector<Laurent> u(r, Laurent(monomial_coords.empty()
                                              ? 0
                                              : monomial_coords[0].modulus()));
        for (size_t k = 0; k < r; ++k)
            for (size_t l = 0; l < r; ++l)
                if (!inv[l][k].is_zero() && !monomial_coords[l].is_zero())
                    u[k] += inv[l][k] * monomial_coords[l];
        return u;
    }

    // pairing numerator of two basis-type vectors over ws.pair_den
    Laurent pair_num(const WeightSpace& ws, const BasisElement& x, const BasisElement& y) const {
        return eng_.pair_num_coords(ws, x.wn, y.wn);
    }

    // ---- structure constants --------------------------------------------

    // coefficients of b1 * b2 in the canonical basis of the sum weight;
    // throws verify_error when a coefficient is not a Laurent polynomial
    std::vector<Laurent> structure_constants(const Weight& w1, size_t i1, const Weight& w2,
                                             size_t i2) {
        const BasisRecord& r1 = basis(w1);
        const BasisRecord& r2 = basis(w2);
        const WeightSpace& s1 = eng_.space(w1);
        const WeightSpace& s2 = eng_.space(w2);
        ScaledWords x = eng_.element_from_coords(s1, r1.elements[i1].coords);
        ScaledWords y = eng_.element_from_coords(s2, r2.elements[i2].coords);
        ScaledWords xy = eng_.product(x, y);
        CoordVec c = eng_.expand(xy);
        if (!c.reduce())
            throw verify_error("structure constant outside Z[q,q^-1] at " + w1.str() + " * " +
                               w2.str());
        return to_canonical(xy.weight, c.num);
    }

    // ---- certification -----------------------------------------------------

    CertifyReport certify(const Weight& b) {
        const BasisRecord& rec = basis(b);
        const WeightSpace& ws = eng_.space(b);
        CertifyReport rep;
        rep.trunc1 = ws.trunc;
        rep.trunc2 = 2 * ws.trunc;
        if (rec.elements.size() != ws.dim)
            rep.fail("element count " + std::to_string(rec.elements.size()) +
                     " differs from dimension " + std::to_string(ws.dim));
        for (size_t s = 0; s < rec.elements.size(); ++s) {
            for (auto& c : rec.elements[s].coords)
                if (!c.bar_invariant()) {
                    rep.fail("element " + std::to_string(s) + " is not bar-invariant");
                    break;
                }
        }
        // pairwise almost orthonormality at both truncation orders
        for (size_t s = 0; s < rec.elements.size(); ++s)
            for (size_t t = s; t < rec.elements.size(); ++t) {
                Laurent n = pair_num(ws, rec.elements[s], rec.elements[t]);
                for (long T : {rep.trunc1, rep.trunc2}) {
                    Series ser = expand_quotient(n, ws.pair_den, T);
                    bool ok = (s == t) ? ser.in_one_plus_qZ() : ser.in_qZ();
                    if (!ok) {
                        rep.fail("pairing (" + std::to_string(s) + "," + std::to_string(t) +
                                 ") fails almost orthonormality at order " + std::to_string(T));
                        break;
                    }
                }
            }
        // two-sided integrality: coords are Laurent by construction and the
        // transition determinant must be a unit, making the inverse Laurent
        if (rec.elements.size() == ws.dim && ws.dim > 0) {
            Laurent det = bareiss_det(coord_matrix(rec));
            if (!det.is_unit_monomial())
                rep.fail("transition determinant " + det.str() + " is not +-q^k");
        }
        return rep;
    }

    // certification of a caller-supplied coordinate family (oracle sets,
    // corrupted records in tests)
    CertifyReport certify_family(const Weight& b, const LaurentMatrix& coords) {
        const WeightSpace& ws = eng_.space(b);
        CertifyReport rep;
        rep.trunc1 = ws.trunc;
        rep.trunc2 = 2 * ws.trunc;
        if (coords.size() != ws.dim) rep.fail("family size differs from dimension");
        for (size_t s = 0; s < coords.size(); ++s)
            for (auto& c : coords[s])
                if (!c.bar_invariant()) {
                    rep.fail("element " + std::to_string(s) + " is not bar-invariant");
                    break;
                }
        std::vector<std::vector<Laurent>> wns;
        for (auto& c : coords) wns.push_back(eng_.wnum(ws, c));
        for (size_t s = 0; s < coords.size(); ++s)
            for (size_t t = s; t < coords.size(); ++t) {
                Laurent n = eng_.pair_num_coords(ws, wns[s], wns[t]);
                for (long T : {rep.trunc1, rep.trunc2}) {
                    Series ser = expand_quotient(n, ws.pair_den, T);
                    bool ok = (s == t) ? ser.in_one_plus_qZ() : ser.in_qZ();
                    if (!ok)
                        rep.fail("pairing (" + std::to_string(s) + "," + std::to_string(t) +
                                 ") fails almost orthonormality at order " + std::to_string(T));
                }
            }
        if (coords.size() == ws.dim && ws.dim > 0) {
            Laurent det = bareiss_det(coords);
            if (!det.is_unit_monomial()) rep.fail("transition determinant is not +-q^k");
        }
        return rep;
    }

  private:
    BasisRecord construct(const Weight& b) {
        const WeightSpace& ws = eng_.space(b);
        BasisRecord rec;
        rec.weight = b;
        rec.dim = ws.dim;
        rec.trunc = ws.trunc;
        size_t rank = datum().rank();

        if (b.is_zero()) {
            BasisElement e;
            e.coords = {Laurent::one()};
            e.wn = {Laurent::one()};
            e.eps.assign(rank, 0);
            rec.elements.push_back(std::move(e));
            return rec;
        }

        struct Candidate {
            long n;
            size_t node;
            size_t parent;
        };
        std::vector<Candidate> cands;
        for (size_t oi = 0; oi < node_order_.size(); ++oi) {
            size_t i = node_order_[oi];
            for (long n = 1; n <= b[i]; ++n) {
                const BasisRecord& lower = basis(b.minus(i, n));
                for (size_t y = 0; y < lower.elements.size(); ++y)
                    if (lower.elements[y].eps[i] == 0) cands.push_back({n, i, y});
            }
        }
        std::stable_sort(cands.begin(), cands.end(),
                         [](const Candidate& a, const Candidate& c) { return a.n > c.n; });

        for (auto& cand : cands) {
            if (rec.elements.size() == ws.dim) break;
            const BasisRecord& lower = basis(b.minus(cand.node, cand.n));
            const WeightSpace& lws = eng_.space(b.minus(cand.node, cand.n));
            ScaledWords y = eng_.element_from_coords(lws, lower.elements[cand.parent].coords);
            ScaledWords xsw = eng_.dp_left_mult(cand.node, cand.n, y);
            CoordVec cv = eng_.expand(xsw);
            if (!cv.reduce())
                throw verify_error("candidate has non-Laurent coordinates at weight " + b.str());
            BasisElement x;
            x.coords = cv.num;
            x.wn = eng_.wnum(ws, x.coords);
            x.prov = {cand.node, cand.n, cand.parent};

            correction_loop(ws, rec, cand.node, cand.n, x);

            Laurent nn = eng_.pair_num_coords(ws, x.wn, x.wn);
            Series ser = expand_quotient(nn, ws.pair_den, ws.trunc);
            if (!ser.in_one_plus_qZ())
                throw verify_error("corrected candidate fails norm condition at weight " +
                                   b.str());
            bool dup = false;
            for (auto& e : rec.elements)
                if (e.coords == x.coords) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            x.eps.resize(rank);
            for (size_t i = 0; i < rank; ++i)
                x.eps[i] = eng_.epsilon_coords(i, x.coords, b);
            rec.elements.push_back(std::move(x));
        }

        if (rec.elements.size() != ws.dim)
            throw internal_error("candidate deficit at weight " + b.str() + ": found " +
                                 std::to_string(rec.elements.size()) + " of " +
                                 std::to_string(ws.dim));
        return rec;
    }

    void correction_loop(const WeightSpace& ws, const BasisRecord& rec, size_t node, long n,
                         BasisElement& x) {
        // finalized elements with eps_node > n, in descending eps order
        std::vector<size_t> zs;
        for (size_t t = 0; t < rec.elements.size(); ++t)
            if (rec.elements[t].eps[node] > n) zs.push_back(t);
        std::stable_sort(zs.begin(), zs.end(), [&](size_t a, size_t c) {
            return rec.elements[a].eps[node] > rec.elements[c].eps[node];
        });
        if (zs.empty()) return;

        for (long pass = 0; pass < iter_bound_; ++pass) {
            bool corrected = false;
            for (size_t t : zs) {
                const BasisElement& z = rec.elements[t];
                Laurent nxz = eng_.pair_num_coords(ws, x.wn, z.wn);
                if (nxz.is_zero()) continue;
                Laurent nzz = eng_.pair_num_coords(ws, z.wn, z.wn);
                Series s = expand_quotient(nxz, nzz, ws.trunc);
                Laurent c = symmetric_round(s);  // throws if not in Z[q,q^-1]
                if (c.is_zero()) continue;
                for (size_t a = 0; a < x.coords.size(); ++a) {
                    x.coords[a] -= c * z.coords[a];
                    x.wn[a] -= c * z.wn[a];
                }
                corrected = true;
            }
            // stop when all pairings against the correction set lie in qZ[[q]]
            bool clean = true;
            for (size_t t : zs) {
                Laurent nxz = eng_.pair_num_coords(ws, x.wn, rec.elements[t].wn);
                if (nxz.is_zero()) continue;
                Series s = expand_quotient(nxz, ws.pair_den, ws.trunc);
                if (!s.in_qZ()) {
                    clean = false;
                    break;
                }
            }
            if (clean) return;
            if (!corrected)
                throw internal_error("construction stalled at weight " + ws.beta.str());
        }
        throw internal_error("construction diverged at weight " + ws.beta.str());
    }

    Engine& eng_;
    long iter_bound_;
    std::vector<size_t> node_order_;
    std::mutex mtx_;
    std::map<Weight, std::shared_ptr<const BasisRecord>> cache_;
    std::map<Weight, LaurentMatrix> inv_cache_;
};

}  // namespace qfold
