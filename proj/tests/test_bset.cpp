#include "b1set/bset.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

using namespace b1set;

namespace {

const std::vector<u64> kGolden48 = {1, 5, 8, 9, 39, 43, 47};
const std::vector<u64> kGolden240 = {1,   5,   8,   9,   13,  17,  21,  25,  29,  33,  37,
                                     41,  45,  49,  53,  56,  57,  183, 187, 191, 195, 199,
                                     203, 207, 211, 215, 219, 223, 227, 231, 235, 239};
const std::vector<u64> kGolden120 = {8,  17, 19, 21, 23, 25, 27, 29, 31,
                                     33, 35, 37, 39, 41, 43, 45, 56};
const std::vector<u64> kGolden39 = {1, 5, 7, 8, 17, 19, 25, 35};
const std::vector<u64> kGolden60 = {1, 5, 6, 7, 11, 13, 17, 19, 23, 29, 54, 55};
const std::vector<u64> kGolden84 = {1, 5, 6, 7, 11, 13, 17, 19, 23, 25, 31, 37, 71, 77, 78, 83};
const std::vector<u64> kGolden54 = {1, 5, 6, 7, 47, 48, 49, 53};
const std::vector<u64> kMax54 = {1, 5, 7, 8, 9, 40, 46, 49, 51};

// the defining property, literally: all lambda*|B| products pairwise distinct
bool flat_distinct(u64 q, int lambda, const std::vector<u64>& els) {
    std::set<u64> seen;
    for (u64 x : els)
        for (int i = 1; i <= lambda; ++i)
            if (!seen.insert(u64(i) * x % q).second) return false;
    return true;
}

} // namespace

TEST_CASE("make_bset validates and sorts") {
    BSet s = make_bset(48, 4, {9, 47, 1, 5, 39, 8, 43});
    CHECK(s.elements == kGolden48);
    CHECK(s.q == 48);
    CHECK(s.lambda == 4);

    CHECK_THROWS_AS(make_bset(48, 4, {0, 5}), std::invalid_argument);
    CHECK_THROWS_AS(make_bset(48, 4, {5, 48}), std::invalid_argument);
    CHECK_THROWS_AS(make_bset(48, 4, {5, 5}), std::invalid_argument);
}

TEST_CASE("verifier on the published sets") {
    CHECK(verify(make_bset(48, 4, kGolden48)));
    CHECK(verify(make_bset(240, 4, kGolden240)));
    CHECK(verify(make_bset(120, 4, kGolden120)));
    CHECK(verify(make_bset(39, 4, kGolden39)));
    CHECK(verify(make_bset(60, 4, kGolden60)));
    CHECK(verify(make_bset(84, 4, kGolden84)));
    CHECK(verify(make_bset(54, 4, kGolden54)));
    CHECK(verify(make_bset(54, 4, kMax54)));
    CHECK(verify(make_bset(6, 4, {1})));
}

TEST_CASE("violations are reported in canonical scan order") {
    // mod 2 the odd multiples of 1 coincide: 1*1 == 3*1
    auto v = find_violation(2, 4, {1});
    REQUIRE(v.has_value());
    CHECK(v->i == 1);
    CHECK(v->x == 1);
    CHECK(v->j == 3);
    CHECK(v->y == 1);

    // 0 collides with itself immediately
    v = find_violation(48, 4, {0, 5});
    REQUIRE(v.has_value());
    CHECK(v->i == 1);
    CHECK(v->x == 0);
    CHECK(v->j == 2);
    CHECK(v->y == 0);

    // duplicates collide at i = 1
    v = find_violation(10, 4, {3, 3});
    REQUIRE(v.has_value());
    CHECK(v->i == 1);
    CHECK(v->x == 3);
    CHECK(v->j == 1);
    CHECK(v->y == 3);

    CHECK_FALSE(find_violation(make_bset(54, 4, kMax54)).has_value());

    // 2*9 == 3*6 (mod 12)
    v = find_violation(make_bset(12, 4, {6, 9}));
    REQUIRE(v.has_value());
    CHECK(u64(v->i) * v->x % 12 == u64(v->j) * v->y % 12);
}

TEST_CASE("single-element validity") {
    CHECK_FALSE(valid_element(1, 2, 4));  // 2*1 == 0 (mod 2)
    CHECK(valid_element(39, 48, 4));
    CHECK_FALSE(valid_element(4, 12, 4)); // 3*4 == 0 (mod 12)
    CHECK(valid_element(1, 6, 4));        // 4*1 == 4, only k < 4 must avoid 0
    CHECK_FALSE(valid_element(0, 48, 4));
}

TEST_CASE("pairwise conflicts") {
    CHECK(conflicts(1, 3, 48, 4));        // 3*1 == 1*3
    CHECK_FALSE(conflicts(1, 5, 48, 4));
    CHECK_FALSE(conflicts(1, 9, 10, 4));  // products {1,2,3,4} vs {9,8,7,6}
    CHECK(conflicts(9, 36, 48, 4));       // 4*9 == 1*36
    CHECK(conflicts(5, 10, 60, 4));       // 2*5 == 1*10
}

TEST_CASE("scaling") {
    BSet s = make_bset(10, 4, {1, 5});
    CHECK(scaled(s, 2) == std::vector<u64>{0, 2});
    CHECK(scaled(s, 1) == s.elements);
    CHECK(scaled(make_bset(10, 4, {1, 9}), 4) == std::vector<u64>{4, 6});
    // non-injective scaling keeps multiplicity
    CHECK(scaled(make_bset(12, 4, {2, 8}), 2) == std::vector<u64>{4, 4});
}

TEST_CASE("classification examples") {
    ModulusShape sh60 = factor_shape(60);
    CHECK(class_of(23, sh60) == 5);
    CHECK(class_of(0, sh60) == 1);
    ModulusShape sh84 = factor_shape(84);
    CHECK(class_of(7, sh84) == 1);

    CHECK(gcd_exponents(6, sh60) == std::pair<int, int>{1, 1});
    ModulusShape sh48 = factor_shape(48);
    CHECK(gcd_exponents(8, sh48) == std::pair<int, int>{3, 0});
    ModulusShape sh54 = factor_shape(54);
    CHECK(gcd_exponents(1, sh54) == std::pair<int, int>{0, 0});
    CHECK_THROWS_AS(gcd_exponents(0, sh48), std::invalid_argument);

    CHECK(two_adic_level(8, 48) == 3);
    CHECK(two_adic_level(2, 48) == 1);
    CHECK(two_adic_level(39, 48) == 0);
    CHECK(two_adic_level(12, 48) == 2);
    CHECK_THROWS_AS(two_adic_level(0, 48), std::invalid_argument);
    CHECK_THROWS_AS(two_adic_level(1, 54), std::invalid_argument); // 8 does not divide 54
}

TEST_CASE("partitions are exhaustive and exclusive, q <= 500") {
    for (u64 q = 2; q <= 500; ++q) {
        ModulusShape sh = factor_shape(q);
        u64 two_pow = q / sh.r;
        for (int i = 0; i < sh.b; ++i) two_pow /= 3;
        u64 l2 = 0;
        for (u64 x = 0; x < q; ++x) {
            u64 d = class_of(x, sh);
            REQUIRE(sh.r % d == 0);
            REQUIRE(std::gcd(x, sh.r) == sh.r / d);
            if (x != 0) {
                auto [i, j] = gcd_exponents(x, sh);
                u64 g = 1;
                for (int k = 0; k < i; ++k) g *= 2;
                for (int k = 0; k < j; ++k) g *= 3;
                REQUIRE(g == std::gcd(x, q / sh.r));
                REQUIRE(i <= sh.a);
                REQUIRE(j <= sh.b);
                if (sh.a >= 3) {
                    int lvl = two_adic_level(x, q);
                    int v2 = 0;
                    for (u64 t = x; t % 2 == 0 && v2 < 3; t /= 2) ++v2;
                    REQUIRE(lvl == v2);
                    if (lvl == 2) ++l2;
                }
            }
        }
        if (sh.a >= 3) REQUIRE(l2 == (two_pow / 8) * (q / two_pow));
    }
}

TEST_CASE("pairwise verifier agrees with the flat-product definition") {
    std::mt19937_64 rng(0x5eedc0de);
    int valid_seen = 0;
    for (int iter = 0; iter < 1500; ++iter) {
        u64 q = 2 + rng() % 199;
        int lambda = (iter % 5 == 0) ? int(1 + rng() % 5) : 4;
        std::size_t n = 1 + rng() % 12;
        std::vector<u64> els(n);
        for (auto& x : els) x = rng() % q;
        bool expect = flat_distinct(q, lambda, els);
        auto v = find_violation(q, lambda, els);
        REQUIRE(v.has_value() == !expect);
        if (v) {
            // the reported pair really collides; an identical (i, x) on both
            // sides is only legitimate for a duplicated input element
            REQUIRE(u64(v->i) * v->x % q == u64(v->j) * v->y % q);
            if (v->i == v->j && v->x == v->y)
                REQUIRE(std::count(els.begin(), els.end(), v->x) >= 2);
        } else {
            ++valid_seen;
            // agreement with the per-element / per-pair decomposition
            for (u64 x : els) REQUIRE(valid_element(x, q, lambda));
            for (std::size_t s = 0; s < els.size(); ++s)
                for (std::size_t t = s + 1; t < els.size(); ++t)
                    REQUIRE_FALSE(conflicts(els[s], els[t], q, lambda));
        }
    }
    CHECK(valid_seen > 100); // the sample covers both verdicts
}
