#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qfold/engine.hpp"

using namespace qfold;

namespace {

CartanDatum make(const std::string& name, std::vector<std::vector<long>> form) {
    CartanDatum d;
    d.name = name;
    for (size_t i = 0; i < form.size(); ++i) d.labels.push_back(std::to_string(i + 1));
    d.form = std::move(form);
    return d;
}

CartanDatum a2() { return make("a2", {{2, -1}, {-1, 2}}); }
CartanDatum a3() { return make("a3", {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}); }
CartanDatum b2() { return make("b2", {{4, -2}, {-2, 2}}); }
CartanDatum g2() { return make("g2", {{6, -3}, {-3, 2}}); }

FreeElement word_elt(const CartanDatum& d, std::initializer_list<int> letters) {
    Word w;
    for (int l : letters) w.letters.push_back(static_cast<uint8_t>(l));
    return FreeElement::from_word(d, w);
}

Word mkword(std::initializer_list<int> letters) {
    Word w;
    for (int l : letters) w.letters.push_back(static_cast<uint8_t>(l));
    return w;
}

// all words of a given weight
std::vector<Word> words_of_weight(const Weight& b) {
    std::vector<Word> out;
    Word cur;
    Weight rem = b;
    auto rec = [&](auto&& self) -> void {
        if (rem.height() == 0) {
            out.push_back(cur);
            return;
        }
        for (size_t i = 0; i < b.rank(); ++i) {
            if (rem[i] == 0) continue;
            cur.letters.push_back(static_cast<uint8_t>(i));
            --rem[i];
            self(self);
            ++rem[i];
            cur.letters.pop_back();
        }
    };
    rec(rec);
    return out;
}

FreeElement random_element(const CartanDatum& d, const Weight& b, std::mt19937& rng) {
    auto words = words_of_weight(b);
    std::uniform_int_distribution<int> cf(-3, 3);
    std::uniform_int_distribution<long> ex(-2, 2);
    FreeElement e{b};
    for (auto& w : words) {
        int c = cf(rng);
        if (c == 0) continue;
        e.add_term(w, Rational(Laurent(Int(c), ex(rng))));
    }
    return e;
}

// the q-Serre element sum_k (-1)^k f_i^{(k)} f_j f_i^{(1-a-k)}
FreeElement serre_element(const CartanDatum& d, size_t i, size_t j) {
    long bound = 1 - d.cartan(i, j);
    FreeElement acc;
    for (long k = 0; k <= bound; ++k) {
        long k2 = bound - k;
        Word w;
        for (long t = 0; t < k; ++t) w.letters.push_back(static_cast<uint8_t>(i));
        w.letters.push_back(static_cast<uint8_t>(j));
        for (long t = 0; t < k2; ++t) w.letters.push_back(static_cast<uint8_t>(i));
        Laurent kappa = quantum_factorial(k, d.d(i)) * quantum_factorial(k2, d.d(i));
        Rational c = Rational(Laurent(Int(k % 2 == 0 ? 1 : -1)), kappa);
        acc += FreeElement::from_word(d, w, c);
    }
    return acc;
}

}  // namespace

TEST_CASE("e_prime on words") {
    auto d = a2();
    Engine eng(d);
    // e_1'(f1 f2) = f2
    CHECK(e_prime(d, 0, word_elt(d, {0, 1})) == word_elt(d, {1}));
    // e_1'(f2 f1) = q^{-(a1,a2)} f2 = q f2
    CHECK(e_prime(d, 0, word_elt(d, {1, 0})) ==
          word_elt(d, {1}).scaled(Rational(Laurent::q_power(1))));
    // e_1'(f2) = 0
    CHECK(e_prime(d, 0, word_elt(d, {1})).is_zero_element());

    // q-boson relation e_i' f_j = q^{-(ai,aj)} f_j e_i' + delta_ij on random elements
    auto check_boson = [&](const CartanDatum& dd, long height) {
        Engine en(dd);
        std::mt19937 rng(42);
        for (auto& b : weights_up_to(dd.rank(), height)) {
            FreeElement x = random_element(dd, b, rng);
            if (x.is_zero_element()) continue;
            for (size_t i = 0; i < dd.rank(); ++i)
                for (size_t j = 0; j < dd.rank(); ++j) {
                    FreeElement fjx = multiply(FreeElement::generator(dd, j), x, dd.rank());
                    FreeElement lhs = e_prime(dd, i, fjx);
                    FreeElement rhs = multiply(FreeElement::generator(dd, j), e_prime(dd, i, x),
                                               dd.rank())
                                          .scaled(Rational(Laurent::q_power(-dd.pair(i, j))));
                    if (i == j) rhs += x;
                    CHECK(lhs == rhs);
                }
        }
    };
    check_boson(a2(), 4);
    check_boson(b2(), 3);
}

TEST_CASE("coproduct") {
    auto d = a2();
    // r(f1) = f1 x 1 + 1 x f1
    auto parts = coproduct_r(d, FreeElement::generator(d, 0));
    CHECK(parts.size() == 2);
    size_t total = 0;
    for (auto& t : parts) total += t.terms().size();
    CHECK(total == 2);

    // r(1) = 1 x 1
    auto punit = coproduct_r(d, FreeElement::unit(2));
    CHECK(punit.size() == 1);
    CHECK(punit[0].terms().size() == 1);

    // r(f1 f2): four terms, with the twist q on f2 x f1
    auto p12 = coproduct_r(d, word_elt(d, {0, 1}));
    bool saw_twist = false;
    for (auto& t : p12)
        for (auto& [k, c] : t.terms())
            if (k.first == mkword({1}) && k.second == mkword({0})) {
                CHECK(c == Rational(Laurent::q_power(1)));
                saw_twist = true;
            }
    CHECK(saw_twist);
}

TEST_CASE("pairing base cases and recursion") {
    auto d = a2();
    Engine eng(d);
    // (f_i, f_j) = delta_ij / (1 - q_i^2)
    Laurent one_minus_q2;
    one_minus_q2.add_term(0, 1);
    one_minus_q2.add_term(2, -1);
    CHECK(eng.pair(FreeElement::generator(d, 0), FreeElement::generator(d, 0)) ==
          Rational(Laurent::one(), one_minus_q2));
    CHECK(eng.pair(FreeElement::generator(d, 0), FreeElement::generator(d, 1)).is_zero());

    // (f1f2, f2f1) = q/(1-q^2)^2
    CHECK(eng.pair(word_elt(d, {0, 1}), word_elt(d, {1, 0})) ==
          Rational(Laurent::q_power(1), one_minus_q2 * one_minus_q2));

    // symmetry on random pairs up to height 5
    std::mt19937 rng(5);
    for (auto& b : weights_up_to(2, 5)) {
        auto words = words_of_weight(b);
        std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
        for (int t = 0; t < 3; ++t) {
            auto u = words[pick(rng)], v = words[pick(rng)];
            CHECK(eng.pair(FreeElement::from_word(d, u), FreeElement::from_word(d, v)) ==
                  eng.pair(FreeElement::from_word(d, v), FreeElement::from_word(d, u)));
        }
    }
}

TEST_CASE("hopf compatibility") {
    // (x, y' y'') = (r(x), y' x y'') for word triples
    for (auto dat : {a2(), a3()}) {
        Engine eng(dat);
        std::mt19937 rng(17);
        for (auto& b : weights_up_to(dat.rank(), 4)) {
            auto words = words_of_weight(b);
            if (words.empty()) continue;
            std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
            for (int trial = 0; trial < 2; ++trial) {
                Word x = words[pick(rng)];
                Word yfull = words[pick(rng)];
                for (size_t cut = 0; cut <= yfull.size(); ++cut) {
                    Word y1, y2;
                    y1.letters.assign(yfull.letters.begin(), yfull.letters.begin() + cut);
                    y2.letters.assign(yfull.letters.begin() + cut, yfull.letters.end());
                    FreeElement fx = FreeElement::from_word(dat, x);
                    FreeElement fy1 = FreeElement::from_word(dat, y1);
                    FreeElement fy2 = FreeElement::from_word(dat, y2);
                    Rational lhs = eng.pair(fx, multiply(fy1, fy2, dat.rank()));
                    Rational rhs(0);
                    for (auto& t : coproduct_r(dat, fx)) {
                        if (!(t.left_weight() == y1.weight(dat.rank()))) continue;
                        for (auto& [k, c] : t.terms())
                            rhs += c * eng.pair(FreeElement::from_word(dat, k.first), fy1) *
                                   eng.pair(FreeElement::from_word(dat, k.second), fy2);
                    }
                    CHECK(lhs == rhs);
                }
            }
        }
    }
}

TEST_CASE("serre elements pair to zero") {
    for (auto dat : {a2(), a3(), b2(), g2()}) {
        Engine eng(dat);
        for (size_t i = 0; i < dat.rank(); ++i)
            for (size_t j = 0; j < dat.rank(); ++j) {
                if (i == j) continue;
                FreeElement s = serre_element(dat, i, j);
                for (auto& w : words_of_weight(s.weight()))
                    CHECK(eng.pair(s, FreeElement::from_word(dat, w)).is_zero());
            }
    }
}

TEST_CASE("involutions") {
    auto d = a3();
    auto s = validate_automorphism(d, {2, 1, 0});
    Engine eng(d);
    std::mt19937 rng(29);
    for (auto& b : weights_up_to(3, 4)) {
        FreeElement x = random_element(d, b, rng);
        CHECK(bar_element(bar_element(x)) == x);
        CHECK(star_element(star_element(x)) == x);
        FreeElement y = x;
        for (long k = 0; k < s.order; ++k) y = sigma_element(s, y);
        CHECK(y == x);
    }
    // bar(q f1f2) = q^-1 f1f2
    FreeElement e = word_elt(d, {0, 1}).scaled(Rational(Laurent::q_power(1)));
    CHECK(bar_element(e) == word_elt(d, {0, 1}).scaled(Rational(Laurent::q_power(-1))));
    // sigma flip of f1f2 = f3f2
    CHECK(sigma_element(s, word_elt(d, {0, 1})) == word_elt(d, {2, 1}));
    // star reverses
    CHECK(star_element(word_elt(d, {0, 1, 2})) == word_elt(d, {2, 1, 0}));

    // sigma preserves the pairing
    std::mt19937 rng2(31);
    for (auto& b : weights_up_to(3, 4)) {
        FreeElement x = random_element(d, b, rng2);
        FreeElement y = random_element(d, b, rng2);
        CHECK(eng.pair(x, y) == eng.pair(sigma_element(s, x), sigma_element(s, y)));
    }
}

TEST_CASE("monomials, gram, dims") {
    auto d = a2();
    Engine eng(d);

    // 2 alpha_1: single divided power
    auto m1 = eng.divided_power_monomials(Weight({2, 0}));
    CHECK(m1.size() == 1);
    CHECK(m1[0].word == mkword({0, 0}));
    CHECK(m1[0].kappa == quantum_factorial(2, 1));

    // alpha_1 + alpha_2: two interleavings
    auto m2 = eng.divided_power_monomials(Weight({1, 1}));
    CHECK(m2.size() == 2);

    // 2a1 + a2: f1^(2)f2, f1f2f1, f2f1^(2) in that order
    auto m3 = eng.divided_power_monomials(Weight({2, 1}));
    REQUIRE(m3.size() == 3);
    CHECK(m3[0].word == mkword({0, 0, 1}));
    CHECK(m3[0].factors.size() == 2);
    CHECK(m3[1].word == mkword({0, 1, 0}));
    CHECK(m3[2].word == mkword({1, 0, 0}));

    // gram at a1+a2: [[1/(1-q^2)^2, q/(1-q^2)^2], [...]], rank 2
    const WeightSpace& ws = eng.space(Weight({1, 1}));
    CHECK(ws.dim == 2);
    Laurent omq2 = Laurent::one() - Laurent::q_power(2);
    CHECK(eng.gram_entry(ws, 0, 0) == Rational(Laurent::one(), omq2 * omq2));
    CHECK(eng.gram_entry(ws, 0, 1) == Rational(Laurent::q_power(1), omq2 * omq2));

    CHECK(eng.dim(Weight({1, 0})) == 1);
    CHECK(eng.dim(Weight({2, 1})) == 2);
    CHECK(eng.dim(Weight({2, 2})) == 3);
    CHECK(eng.dim(Weight({3, 3})) == 4);  // kostant count for a2

    // a3 weight (1,1,1) has dimension 6? no: kostant for a3 at (1,1,1):
    // simple+simple+simple, a12+a3, a23+a1, a123 -> 4
    Engine e3(a3());
    CHECK(e3.dim(Weight({1, 1, 1})) == 4);
    CHECK(e3.dim(Weight({2, 2, 2})) == 10);
}

TEST_CASE("expansion in basis") {
    auto d = a2();
    Engine eng(d);

    // basis monomial -> unit coordinate vector
    const WeightSpace& ws = eng.space(Weight({2, 1}));
    for (size_t a = 0; a < ws.dim; ++a) {
        const Monomial& m = ws.sel(a);
        FreeElement x = FreeElement::from_word(
            d, m.word, Rational(Laurent::one(), m.kappa));
        auto coords = eng.expand_in_basis(x);
        for (size_t b = 0; b < ws.dim; ++b)
            CHECK(coords[b] == (a == b ? Rational(1) : Rational(0)));
    }

    // the serre element expands to zero
    FreeElement s = serre_element(d, 0, 1);
    auto zc = eng.expand_in_basis(s);
    for (auto& c : zc) CHECK(c.is_zero());

    // f1f2f1 = f1^(2)f2 + f2f1^(2) (the serre relation rearranged):
    // in the selected basis {f1^(2)f2, f1f2f1} the word f1f2f1 is a basis
    // monomial; check the identity through the full monomial set instead
    FreeElement w = word_elt(d, {0, 1, 0});
    FreeElement rhs = FreeElement::from_word(d, mkword({0, 0, 1}),
                                             Rational(Laurent::one(), quantum_factorial(2))) +
                      FreeElement::from_word(d, mkword({1, 0, 0}),
                                             Rational(Laurent::one(), quantum_factorial(2)));
    auto cw = eng.expand_in_basis(w);
    auto cr = eng.expand_in_basis(rhs);
    for (size_t i = 0; i < cw.size(); ++i) CHECK(cw[i] == cr[i]);

    // divided power law: [n]!_i f_i^{(n)} = f_i^n through coordinates, n <= 4
    for (auto dat : {a2(), b2()}) {
        Engine en(dat);
        for (size_t i = 0; i < 2; ++i)
            for (long n = 1; n <= 4; ++n) {
                Weight b(2);
                b[i] = n;
                FreeElement dp = FreeElement::from_word(
                    dat, Word(std::vector<uint8_t>(n, static_cast<uint8_t>(i))),
                    Rational(Laurent::one(), quantum_factorial(n, dat.d(i))));
                FreeElement pw = FreeElement::from_word(
                    dat, Word(std::vector<uint8_t>(n, static_cast<uint8_t>(i))));
                auto cd = en.expand_in_basis(dp.scaled(Rational(quantum_factorial(n, dat.d(i)))));
                auto cp = en.expand_in_basis(pw);
                for (size_t t = 0; t < cd.size(); ++t) CHECK(cd[t] == cp[t]);
            }
    }
}

TEST_CASE("epsilon by membership") {
    auto d = a2();
    Engine eng(d);

    // pure power
    FreeElement f13 = FreeElement::from_word(
        d, mkword({0, 0, 0}), Rational(Laurent::one(), quantum_factorial(3)));
    CHECK(eng.epsilon_element(0, f13) == 3);

    // f1^(2)f2 starts with a full divided square: eps_1 = 2
    FreeElement m = FreeElement::from_word(d, mkword({0, 0, 1}),
                                           Rational(Laurent::one(), quantum_factorial(2)));
    CHECK(eng.epsilon_element(0, m) == 2);

    // f2 f1^(2): the leftmost f1-power that divides it is f1^1
    FreeElement m2 = FreeElement::from_word(d, mkword({1, 0, 0}),
                                            Rational(Laurent::one(), quantum_factorial(2)));
    CHECK(eng.epsilon_element(0, m2) == 1);

    // f1f2 + f2f1: independent of f1 f2, so eps_1 = 0; justified by the
    // 2x2 gram determinant being nonzero (the weight space is 2-dimensional)
    CHECK(eng.dim(Weight({1, 1})) == 2);
    FreeElement x = word_elt(d, {0, 1}) + word_elt(d, {1, 0});
    CHECK(eng.epsilon_element(0, x) == 0);
    CHECK(eng.epsilon_element(0, word_elt(d, {0, 1})) == 1);
}
