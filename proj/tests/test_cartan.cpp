#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qfold/cartan.hpp"

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
CartanDatum a5() {
    return make("a5", {{2, -1, 0, 0, 0},
                       {-1, 2, -1, 0, 0},
                       {0, -1, 2, -1, 0},
                       {0, 0, -1, 2, -1},
                       {0, 0, 0, -1, 2}});
}
CartanDatum d4() {
    // node 2 is the center
    return make("d4", {{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}});
}
CartanDatum d5() {
    // path 1-2-3 with fork 3-4, 3-5
    return make("d5", {{2, -1, 0, 0, 0},
                       {-1, 2, -1, 0, 0},
                       {0, -1, 2, -1, -1},
                       {0, 0, -1, 2, 0},
                       {0, 0, -1, 0, 2}});
}

}  // namespace

TEST_CASE("datum validation") {
    CHECK(a2().is_valid());
    CHECK(make("bad1", {{2, 1}, {1, 2}}).validate().size() > 0);
    CHECK(make("bad2", {{3, -1}, {-1, 2}}).validate().size() > 0);
    CHECK(make("b2", {{4, -2}, {-2, 2}}).is_valid());
    CHECK(make("g2", {{6, -3}, {-3, 2}}).is_valid());
}

TEST_CASE("automorphism validation") {
    auto d = a3();
    auto s = validate_automorphism(d, {2, 1, 0});
    CHECK(s.order == 2);
    CHECK(s.orbits.size() == 2);
    CHECK(s.orbits[0] == std::vector<size_t>{0, 2});
    CHECK(s.orbits[1] == std::vector<size_t>{1});

    // A2 flip is rejected: the two nodes are linked and form one orbit
    CHECK_THROWS_AS(validate_automorphism(a2(), {1, 0}), domain_error);

    auto id = identity_automorphism(d);
    CHECK(id.order == 1);
    CHECK(id.orbits.size() == 3);

    // not-form-invariant permutation on b2
    CHECK_THROWS_AS(validate_automorphism(make("b2", {{4, -2}, {-2, 2}}), {1, 0}), domain_error);
}

TEST_CASE("folding") {
    {
        auto d = a3();
        auto s = validate_automorphism(d, {2, 1, 0});
        auto f = fold_datum(d, s);
        CHECK(f.form == std::vector<std::vector<long>>{{4, -2}, {-2, 2}});
        CHECK(f.cartan(0, 1) == -1);
        CHECK(f.cartan(1, 0) == -2);
    }
    {
        auto d = d4();
        auto s = validate_automorphism(d, {2, 1, 3, 0});
        CHECK(s.order == 3);
        auto f = fold_datum(d, s);
        CHECK(f.form == std::vector<std::vector<long>>{{6, -3}, {-3, 2}});
    }
    {
        auto d = a2();
        auto f = fold_datum(d, identity_automorphism(d));
        CHECK(f.form == d.form);
    }
    // the whole catalog folds to valid data
    for (auto& [d, perm] : std::vector<std::pair<CartanDatum, std::vector<size_t>>>{
             {a3(), {2, 1, 0}},
             {a5(), {4, 3, 2, 1, 0}},
             {d4(), {2, 1, 3, 0}},
             {d5(), {0, 1, 2, 4, 3}}}) {
        auto s = validate_automorphism(d, perm);
        CHECK(fold_datum(d, s).is_valid());
    }
}

TEST_CASE("weights and sigma action") {
    auto d = a3();
    auto s = validate_automorphism(d, {2, 1, 0});

    Weight b({1, 1, 0});
    CHECK(sigma_on_weight(s, b) == Weight({0, 1, 1}));

    Weight st({1, 1, 1});
    CHECK(sigma_on_weight(s, st) == st);
    CHECK(fold_weight(s, st) == Weight({1, 1}));

    auto id = identity_automorphism(d);
    for (auto& w : weights_up_to(3, 4)) CHECK(weight_is_stable(id, w));

    // height of a stable weight equals sum over orbits of |j| * folded mult
    for (auto& [w, fw] : stable_weights(d, s, 6)) {
        long h = 0;
        for (size_t j = 0; j < s.orbits.size(); ++j)
            h += static_cast<long>(s.orbits[j].size()) * fw[j];
        CHECK(h == w.height());
    }

    // weight enumeration: rank 2 heights 1..4 gives 14 weights
    CHECK(weights_up_to(2, 4).size() == 14);
    auto ws = weights_up_to(2, 4);
    CHECK(std::is_sorted(ws.begin(), ws.end()));
}
