#pragma once

// Per-datum computation engine: divided-power monomials, Gram data per
// weight space, coordinate expansion, and the string lengths epsilon_i.
//
// The working form of a weight space keeps the word-pairing numerators
// (Laurent, over the structural denominator D_beta) for the selected
// monomial words against all monomial words. Basis selection runs on
// modular specializations of the Gram matrix at two independent points;
// everything asserted downstream is re-checked exactly: the selected
// minor is decomposed by fraction-free elimination (nonsingularity is
// exact), and every coordinate expansion verifies its residual against
// every monomial of the weight.

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "qfold/pairing.hpp"
#include "qfold/qint.hpp"

namespace qfold {

struct Monomial {
    std::vector<std::pair<size_t, long>> factors;  // (node, exponent), adjacent nodes distinct
    Word word;
    Laurent kappa;  // product of [a]_i! over factors
};

// Homogeneous element (1/kappa) * sum_w num[w] * w with Laurent data.
struct ScaledWords {
    Weight weight;
    std::map<Word, Laurent> num;
    Laurent kappa = Laurent::one();

    bool empty() const { return num.empty(); }
    void add(const Word& w, const Laurent& c) {
        auto it = num.find(w);
        if (it == num.end()) {
            if (!c.is_zero()) num.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) num.erase(it);
        }
    }
};

struct WeightSpace {
    Weight beta;
    std::vector<Monomial> monomials;
    std::vector<size_t> selected;  // indices into monomials, size dim
    size_t dim = 0;
    Laurent denomD;                   // prod_i (1 - q^{2 d_i})^{n_i}
    Laurent K;                        // lcm of selected kappas
    std::vector<Laurent> k_over_kappa;  // K / kappa_s per selected monomial
    LaurentMatrix rows;               // dim x M word-pair numerators
    LaurentMatrix ps;                 // dim x dim selected submatrix
    Elimination elim;                 // of ps
    Laurent pair_den;                 // K^2 * denomD
    long trunc = 8;                   // default truncation order

    const Monomial& sel(size_t a) const { return monomials[selected[a]]; }
};

// Coordinates in the selected monomial basis, as num/den with a scalar
// Laurent denominator. reduce() turns them into honest Laurent coordinates
// when the element is integral.
struct CoordVec {
    std::vector<Laurent> num;
    Laurent den = Laurent::one();

    bool reduce() {
        for (auto& v : num)
            if (!v.is_zero() && !divides(den, v)) return false;
        for (auto& v : num)
            if (!v.is_zero()) v = exact_div(v, den);
        den = Laurent::one(den.modulus());
        return true;
    }
    bool is_zero() const {
        for (auto& v : num)
            if (!v.is_zero()) return false;
        return true;
    }
    std::vector<Rational> rational() const {
        std::vector<Rational> r;
        r.reserve(num.size());
        for (auto& v : num) r.emplace_back(v, den);
        return r;
    }
};

inline Laurent laurent_lcm(const Laurent& a, const Laurent& b) {
    if (a.is_zero() || b.is_zero()) return Laurent();
    return exact_div(a * b, laurent_gcd(a, b));
}

class Engine {
  public:
    explicit Engine(CartanDatum d, long trunc_floor = 8)
        : datum_(std::move(d)), pairs_(datum_), trunc_floor_(trunc_floor) {
        auto issues = datum_.validate();
        if (!issues.empty()) throw domain_error("invalid Cartan datum: " + issues[0].message);
    }

    const CartanDatum& datum() const { return datum_; }
    PairingTable& pairs() { return pairs_; }
    long trunc_floor() const { return trunc_floor_; }
    void set_memo_cap(size_t cap) { pairs_.set_memo_cap(cap); }

    // ---- divided-power monomials -------------------------------------

    std::vector<Monomial> divided_power_monomials(const Weight& b) const {
        std::vector<Monomial> out;
        std::vector<std::pair<size_t, long>> cur;
        Weight rem = b;
        auto rec = [&](auto&& self, long last) -> void {
            if (rem.height() == 0) {
                Monomial m;
                m.factors = cur;
                Laurent kappa = Laurent::one();
                for (auto& [i, a] : cur) {
                    for (long t = 0; t < a; ++t)
                        m.word.letters.push_back(static_cast<uint8_t>(i));
                    kappa *= quantum_factorial(a, datum_.d(i));
                }
                m.kappa = std::move(kappa);
                out.push_back(std::move(m));
                return;
            }
            for (size_t i = 0; i < datum_.rank(); ++i) {
                if (static_cast<long>(i) == last || rem[i] == 0) continue;
                for (long a = rem[i]; a >= 1; --a) {
                    cur.emplace_back(i, a);
                    rem[i] -= a;
                    self(self, static_cast<long>(i));
                    rem[i] += a;
                    cur.pop_back();
                }
            }
        };
        rec(rec, -1);
        return out;
    }

    // ---- weight spaces ------------------------------------------------

    const WeightSpace& space(const Weight& b) {
        {
            std::lock_guard<std::mutex> lk(space_mtx_);
            auto it = spaces_.find(b);
            if (it != spaces_.end()) return *it->second;
        }
        auto ws = build_space(b);
        std::lock_guard<std::mutex> lk(space_mtx_);
        auto [it, inserted] = spaces_.emplace(b, std::move(ws));
        return *it->second;
    }

    size_t dim(const Weight& b) { return space(b).dim; }

    // Gram matrix of all divided-power monomials as rational functions,
    // for reports and small-scale checks.
    LaurentMatrix pair_numerators(const Weight& b) {
        const WeightSpace& ws = space(b);
        size_t m = ws.monomials.size();
        LaurentMatrix g(m, std::vector<Laurent>(m));
        for (size_t s = 0; s < m; ++s)
            for (size_t t = s; t < m; ++t) {
                g[s][t] = pairs_.num(ws.monomials[s].word, ws.monomials[t].word);
                if (t != s) g[t][s] = g[s][t];
            }
        return g;
    }

    Rational gram_entry(const WeightSpace& ws, size_t s, size_t t) {
        Laurent n = pairs_.num(ws.monomials[s].word, ws.monomials[t].word);
        return Rational(n, ws.monomials[s].kappa * ws.monomials[t].kappa * ws.denomD);
    }

    // ---- element plumbing ----------------------------------------------

    ScaledWords scale_element(const FreeElement& x) const {
        ScaledWords s;
        s.weight = x.weight();
        Laurent kappa = Laurent::one();
        for (auto& [w, c] : x.terms()) kappa = laurent_lcm(kappa, c.den());
        s.kappa = kappa;
        for (auto& [w, c] : x.terms()) s.add(w, c.num() * exact_div(kappa, c.den()));
        return s;
    }

    FreeElement unscale(const ScaledWords& s) const {
        FreeElement e{s.weight};
        for (auto& [w, c] : s.num) e.add_term(w, Rational(c, s.kappa));
        return e;
    }

    // element from coordinates in the selected monomial basis
    ScaledWords element_from_coords(const WeightSpace& ws, const std::vector<Laurent>& coords,
                                    const Laurent& den = Laurent::one()) const {
        ScaledWords s;
        s.weight = ws.beta;
        s.kappa = ws.K * den;
        for (size_t a = 0; a < ws.selected.size(); ++a)
            if (!coords[a].is_zero()) s.add(ws.sel(a).word, coords[a] * ws.k_over_kappa[a]);
        return s;
    }

    // left-multiply by f_i^{(n)}
    ScaledWords dp_left_mult(size_t i, long n, const ScaledWords& x) const {
        ScaledWords r;
        r.weight = x.weight;
        for (long t = 0; t < n; ++t) ++r.weight[i];
        r.kappa = x.kappa * quantum_factorial(n, datum_.d(i));
        for (auto& [w, c] : x.num) r.add(w.prepend(static_cast<uint8_t>(i), n), c);
        return r;
    }

    ScaledWords product(const ScaledWords& x, const ScaledWords& y) const {
        ScaledWords r;
        r.weight = x.weight;
        for (size_t i = 0; i < datum_.rank(); ++i) r.weight[i] += y.weight[i];
        r.kappa = x.kappa * y.kappa;
        for (auto& [wx, cx] : x.num)
            for (auto& [wy, cy] : y.num) r.add(wx.concat(wy), cx * cy);
        return r;
    }

    // ---- the bilinear form ---------------------------------------------

    // pairing of arbitrary homogeneous elements, as a rational function
    Rational pair(const FreeElement& x, const FreeElement& y) {
        if (x.is_zero_element() || y.is_zero_element()) return Rational(0);
        if (!(x.weight() == y.weight())) return Rational(0);
        ScaledWords sx = scale_element(x), sy = scale_element(y);
        Laurent n = pair_num_scaled(sx, sy);
        return Rational(n, sx.kappa * sy.kappa * pairs_.denominator(x.weight()));
    }

    Laurent pair_num_scaled(const ScaledWords& x, const ScaledWords& y) {
        Laurent n;
        for (auto& [wx, cx] : x.num)
            for (auto& [wy, cy] : y.num) {
                Laurent p = pairs_.num(wx, wy);
                if (!p.is_zero()) n += cx * cy * p;
            }
        return n;
    }

    // pairing numerator of two coordinate vectors over pair_den = K^2 D:
    // inputs are word-basis numerators (coords * K/kappa), see wnum().
    Laurent pair_num_coords(const WeightSpace& ws, const std::vector<Laurent>& wx,
                            const std::vector<Laurent>& wy) const {
        Laurent n;
        for (size_t a = 0; a < wx.size(); ++a) {
            if (wx[a].is_zero()) continue;
            for (size_t b = 0; b < wy.size(); ++b)
                if (!wy[b].is_zero()) n += wx[a] * wy[b] * ws.ps[a][b];
        }
        return n;
    }

    std::vector<Laurent> wnum(const WeightSpace& ws, const std::vector<Laurent>& coords) const {
        std::vector<Laurent> r(coords.size());
        for (size_t a = 0; a < coords.size(); ++a)
            if (!coords[a].is_zero()) r[a] = coords[a] * ws.k_over_kappa[a];
        return r;
    }

    // ---- expansion in the selected basis --------------------------------

    // Solves for the coordinates of x and verifies the residual pairing
    // against every monomial of the weight; throws internal_error when x is
    // outside the span (impossible for well-formed inputs).
    CoordVec expand(const ScaledWords& x) {
        const WeightSpace& ws = space(x.weight);
        size_t m = ws.monomials.size(), r = ws.dim;
        std::vector<Laurent> n(m);
        for (size_t t = 0; t < m; ++t) {
            Laurent acc;
            for (auto& [w, c] : x.num) {
                Laurent p = pairs_.num(w, ws.monomials[t].word);
                if (!p.is_zero()) acc += c * p;
            }
            n[t] = std::move(acc);
        }
        std::vector<Laurent> b(r);
        for (size_t a = 0; a < r; ++a) b[a] = n[ws.selected[a]];
        std::vector<Laurent> xv = ff_solve(ws.elim, b);
        const Laurent& delta = ws.elim.det_up_to_sign();
        // residual against all monomials: sum_a xv_a rows[a][t] == delta n_t
        for (size_t t = 0; t < m; ++t) {
            Laurent acc;
            for (size_t a = 0; a < r; ++a)
                if (!xv[a].is_zero() && !ws.rows[a][t].is_zero()) acc += xv[a] * ws.rows[a][t];
            if (acc != delta * n[t])
                throw internal_error("expand: residual pairing nonzero at weight " +
                                     x.weight.str() + ", monomial " + std::to_string(t));
        }
        CoordVec c;
        c.den = delta * x.kappa;
        c.num.resize(r);
        for (size_t a = 0; a < r; ++a) c.num[a] = xv[a] * ws.sel(a).kappa;
        return c;
    }

    // expansion with Laurent coordinates demanded
    std::vector<Laurent> expand_integral(const ScaledWords& x) {
        CoordVec c = expand(x);
        if (!c.reduce())
            throw verify_error("expansion has non-Laurent coordinates at weight " +
                               x.weight.str());
        return c.num;
    }

    std::vector<Rational> expand_in_basis(const FreeElement& x) {
        return expand(scale_element(x)).rational();
    }

    // ---- f_i action matrices and epsilon --------------------------------

    // columns: coordinates in space(gamma + alpha_i) of f_i * m_s(gamma)
    const LaurentMatrix& f_matrix(size_t i, const Weight& gamma) {
        auto key = std::make_pair(gamma, i);
        {
            std::lock_guard<std::mutex> lk(fmat_mtx_);
            auto it = fmats_.find(key);
            if (it != fmats_.end()) return it->second;
        }
        const WeightSpace& src = space(gamma);
        const WeightSpace& dst = space(gamma.plus(i));
        LaurentMatrix mat(dst.dim, std::vector<Laurent>(src.dim));
        for (size_t s = 0; s < src.dim; ++s) {
            ScaledWords x;
            x.weight = gamma.plus(i);
            x.kappa = src.sel(s).kappa;
            x.add(src.sel(s).word.prepend(static_cast<uint8_t>(i)), Laurent::one());
            auto col = expand_integral(x);
            for (size_t t = 0; t < dst.dim; ++t) mat[t][s] = col[t];
        }
        std::lock_guard<std::mutex> lk(fmat_mtx_);
        auto [it, ins] = fmats_.emplace(key, std::move(mat));
        return it->second;
    }

    // largest k with x inside f_i^k * (weight space at beta - k alpha_i),
    // by exact membership rank tests on coordinate vectors
    long epsilon_coords(size_t i, const std::vector<Laurent>& coords, const Weight& beta) {
        bool zero = true;
        for (auto& v : coords)
            if (!v.is_zero()) zero = false;
        if (zero) throw domain_error("epsilon of the zero element");
        long k = 0;
        LaurentMatrix span;  // rows: images of f_i^k m_s in beta-coordinates
        LaurentMatrix chain;  // dim_beta x dim(beta - k alpha_i)
        while (beta.can_subtract(i, k + 1)) {
            const LaurentMatrix& f = f_matrix(i, beta.minus(i, k + 1));
            chain = (k == 0) ? f : matmul(chain, f);
            if (chain.empty() || chain[0].empty()) break;
            // rows of chain^T are the spanning vectors
            LaurentMatrix rows(chain[0].size(), std::vector<Laurent>(chain.size()));
            for (size_t a = 0; a < chain.size(); ++a)
                for (size_t b = 0; b < chain[0].size(); ++b) rows[b][a] = chain[a][b];
            if (!in_row_space(rows, coords)) break;
            ++k;
        }
        return k;
    }

    long epsilon_element(size_t i, const FreeElement& x) {
        CoordVec c = expand(scale_element(x));
        return epsilon_coords(i, c.num, x.weight());
    }

    // default truncation order for series checks at this weight
    long trunc_for(const WeightSpace& ws) const { return ws.trunc; }

  private:
    std::shared_ptr<const WeightSpace> build_space(const Weight& b) {
        auto ws = std::make_shared<WeightSpace>();
        ws->beta = b;
        ws->monomials = divided_power_monomials(b);
        ws->denomD = pairs_.denominator(b);
        size_t m = ws->monomials.size();
        if (b.is_zero()) {
            // the empty monomial spans weight zero
            ws->selected = {0};
            ws->dim = 1;
            ws->K = Laurent::one();
            ws->k_over_kappa = {Laurent::one()};
            ws->rows = {{Laurent::one()}};
            ws->ps = {{Laurent::one()}};
            ws->elim = bareiss_decompose(ws->ps);
            ws->pair_den = Laurent::one();
            ws->trunc = trunc_floor_;
            return ws;
        }

        // modular Gram at point 0, greedy row selection in monomial order
        std::vector<std::vector<uint64_t>> gm(m, std::vector<uint64_t>(m));
        for (size_t s = 0; s < m; ++s)
            for (size_t t = s; t < m; ++t) {
                uint64_t v = pairs_.num_mod(ws->monomials[s].word, ws->monomials[t].word, 0);
                gm[s][t] = v;
                gm[t][s] = v;
            }
        ws->selected = greedy_select(gm, PairingTable::kPrime[0]);
        ws->dim = ws->selected.size();

        // independent verification at point 1
        std::vector<std::vector<uint64_t>> gm1(m, std::vector<uint64_t>(m));
        for (size_t s = 0; s < m; ++s)
            for (size_t t = s; t < m; ++t) {
                uint64_t v = pairs_.num_mod(ws->monomials[s].word, ws->monomials[t].word, 1);
                gm1[s][t] = v;
                gm1[t][s] = v;
            }
        auto sel1 = greedy_select(gm1, PairingTable::kPrime[1]);
        if (sel1.size() != ws->dim)
            throw internal_error("rank instability between evaluation points at weight " +
                                 b.str());

        size_t r = ws->dim;
        ws->rows.assign(r, std::vector<Laurent>(m));
        for (size_t a = 0; a < r; ++a) {
            const Word& wa = ws->monomials[ws->selected[a]].word;
            for (size_t t = 0; t < m; ++t) ws->rows[a][t] = pairs_.num(wa, ws->monomials[t].word);
        }
        ws->ps.assign(r, std::vector<Laurent>(r));
        for (size_t a = 0; a < r; ++a)
            for (size_t c = 0; c < r; ++c) ws->ps[a][c] = ws->rows[a][ws->selected[c]];
        ws->elim = bareiss_decompose(ws->ps);  // throws if singular; cannot be

        ws->K = Laurent::one();
        for (size_t a = 0; a < r; ++a) ws->K = laurent_lcm(ws->K, ws->sel(a).kappa);
        ws->k_over_kappa.resize(r);
        for (size_t a = 0; a < r; ++a) ws->k_over_kappa[a] = exact_div(ws->K, ws->sel(a).kappa);
        ws->pair_den = ws->K * ws->K * ws->denomD;

        long maxexp = ws->pair_den.is_zero() ? 0 : ws->pair_den.max_exp_abs();
        for (auto& row : ws->ps)
            for (auto& e : row)
                if (!e.is_zero()) maxexp = std::max(maxexp, e.max_exp_abs());
        ws->trunc = std::max(trunc_floor_, 2 * maxexp + 8);
        return ws;
    }

    static std::vector<size_t> greedy_select(const std::vector<std::vector<uint64_t>>& g,
                                             uint64_t p) {
        size_t m = g.size();
        std::vector<std::vector<uint64_t>> red;  // reduced pivot rows
        std::vector<size_t> pivcol, chosen;
        for (size_t s = 0; s < m; ++s) {
            std::vector<uint64_t> row = g[s];
            for (size_t k = 0; k < red.size(); ++k) {
                uint64_t f = row[pivcol[k]];
                if (f == 0) continue;
                uint64_t inv = Laurent::pow_mod(red[k][pivcol[k]], static_cast<long>(p - 2), p);
                uint64_t mult = Laurent::mul_mod(f, inv, p);
                for (size_t j = 0; j < m; ++j) {
                    uint64_t sub = Laurent::mul_mod(mult, red[k][j], p);
                    row[j] = (row[j] + p - sub) % p;
                }
            }
            size_t nz = m;
            for (size_t j = 0; j < m; ++j)
                if (row[j] != 0) {
                    nz = j;
                    break;
                }
            if (nz == m) continue;
            red.push_back(std::move(row));
            pivcol.push_back(nz);
            chosen.push_back(s);
        }
        return chosen;
    }

    CartanDatum datum_;
    PairingTable pairs_;
    long trunc_floor_;
    std::mutex space_mtx_;
    std::map<Weight, std::shared_ptr<const WeightSpace>> spaces_;
    std::mutex fmat_mtx_;
    std::map<std::pair<Weight, size_t>, LaurentMatrix> fmats_;
};

}  // namespace qfold
