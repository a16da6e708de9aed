#include "b1set/construct.hpp"

#include "b1set/set_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
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

bool has_note(const Report& rep, const std::string& needle) {
    for (const auto& n : rep.notes)
        if (n.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("published constructions are reproduced element for element") {
    Report rep = construct(48);
    CHECK(rep.set.elements == kGolden48);
    CHECK(rep.exactness == Exactness::exact);
    CHECK(rep.base_source == "builtin");
    REQUIRE(!rep.steps.empty());
    CHECK(rep.steps[0].op == "fold8_ap");
    CHECK(rep.steps[0].base_q == 6);

    rep = construct(240);
    CHECK(rep.set.elements == kGolden240);
    // chained through the handy (non-maximal) mod-30 base, so only a bound
    CHECK(rep.exactness == Exactness::lower_bound);
    CHECK(rep.base_source == "builtin");

    rep = construct(120);
    CHECK(rep.set.elements == kGolden120);
    CHECK(rep.exactness == Exactness::exact);
    CHECK(rep.steps[0].op == "fold8_layers");

    rep = construct(39);
    CHECK(rep.set.elements == kGolden39);
    CHECK(rep.exactness == Exactness::exact);
    CHECK(rep.steps[0].op == "triple_coset");
    CHECK(rep.steps[0].note.find("d=13") != std::string::npos);
    CHECK(rep.base_source == "none");

    rep = construct(60);
    CHECK(rep.set.elements == kGolden60);
    CHECK(rep.exactness == Exactness::lower_bound);
    CHECK(rep.steps[0].op == "lift_12r");

    rep = construct(84);
    CHECK(rep.set.elements == kGolden84);
    CHECK(rep.exactness == Exactness::lower_bound);

    rep = construct(54);
    CHECK(rep.set.elements == kGolden54);
    CHECK(rep.exactness == Exactness::lower_bound);
    CHECK(rep.steps[0].op == "lift_2x3b");
    CHECK(rep.base_source == "oracle"); // the mod-2 base is the empty set, found by search
}

TEST_CASE("the individual rules reproduce the worked intermediate sets") {
    // interval blocks per divisor: {5,55} and {1,7,11,13,17,19,23,29} for q=60,
    // {7,77} and {1,5,11,13,17,19,23,25,31,37,71,83} for q=84
    CHECK(lift_12r(factor_shape(60), make_bset(10, 4, {1, 9})).elements == kGolden60);
    CHECK(lift_12r(factor_shape(84), make_bset(14, 4, {1, 13})).elements == kGolden84);
    CHECK(fold8_layers(factor_shape(120), make_bset(15, 4, {1, 7})).elements == kGolden120);
    CHECK(fold8_ap(factor_shape(240), make_bset(30, 4, {1, 7})).elements == kGolden240);
    CHECK(lift_2x3b(factor_shape(54), make_bset(2, 4, {})).elements == kGolden54);
}

TEST_CASE("recursive dispatch chains") {
    Report rep = construct(96); // 96 -> 12 (searched)
    CHECK(rep.set.elements == std::vector<u64>{1, 5, 8, 9, 13, 17, 21, 75, 79, 83, 87, 88, 91, 95});
    CHECK(rep.exactness == Exactness::exact);
    CHECK(rep.base_source == "oracle");

    rep = construct(24); // 24 -> 3 (empty base via the coset rule)
    CHECK(rep.set.elements == std::vector<u64>{5, 7, 9});
    CHECK(rep.exactness == Exactness::exact);
    CHECK(rep.steps.size() == 2);
    CHECK(rep.steps[0].op == "fold8_layers");
    CHECK(rep.steps[1].op == "triple_coset");

    rep = construct(192); // 192 -> 24 -> 3
    CHECK(rep.set.elements.size() == 27);
    CHECK(rep.exactness == Exactness::exact);
    CHECK(rep.steps[0].op == "fold8_ap");
    CHECK(rep.steps[1].op == "fold8_layers");

    rep = construct(72); // 72 -> 9 (searched)
    CHECK(rep.set.elements.size() == 11);
    CHECK(rep.exactness == Exactness::exact);

    rep = construct(2);
    CHECK(rep.set.elements.empty());
    CHECK(rep.exactness == Exactness::exact);
    CHECK(rep.steps.size() == 1);
    CHECK(rep.steps[0].op == "base");
}

TEST_CASE("triple_coset across divisor sets") {
    Report rep = construct(15);
    CHECK(rep.set.elements == std::vector<u64>{1, 7});
    CHECK(rep.exactness == Exactness::exact);

    CHECK(construct(21).set.elements.size() == 2);
    CHECK(construct(33).set.elements.size() == 6);
    CHECK(construct(33).exactness == Exactness::exact);

    rep = construct(75); // divisors 5 and 25, both with confirmed class maxima
    CHECK(rep.set.elements.size() == 14);
    CHECK(rep.exactness == Exactness::exact);

    rep = construct(105); // divisors 5, 7, 35
    CHECK(rep.set.elements.size() == 20);
    CHECK(rep.exactness == Exactness::exact);

    rep = construct(51); // the divisor-17 class formula undershoots the class search
    CHECK(rep.set.elements.size() == 8);
    CHECK(rep.exactness == Exactness::lower_bound);
    CHECK(has_note(rep, "unconfirmed"));
    CHECK(has_note(rep, "17"));

    rep = construct(123); // same situation at divisor 41
    CHECK(rep.set.elements.size() == 24);
    CHECK(rep.exactness == Exactness::lower_bound);

    rep = construct(159); // divisor 53 confirmed by the exhaustive class scan
    CHECK(rep.set.elements.size() == 34);
    CHECK(rep.exactness == Exactness::exact);

    rep = construct(195); // divisors 5, 13 and 65 all confirmed
    CHECK(rep.set.elements.size() == 42);
    CHECK(rep.exactness == Exactness::exact);
}

TEST_CASE("size formula per divisor class") {
    CHECK(m4_class(1).value == 0);
    struct Row {
        u64 d, n, value;
    };
    // n = ord_d(2); odd orders contribute (floor(2n/3) per coset), even n/3
    const Row rows[] = {{5, 4, 2},   {7, 3, 2},   {11, 10, 6},  {13, 12, 8},
                        {17, 8, 8},  {19, 18, 12}, {23, 11, 14}, {25, 20, 12},
                        {29, 28, 18}, {31, 5, 18},  {35, 12, 16}, {37, 36, 24},
                        {41, 20, 24}, {43, 14, 24}, {47, 23, 30}, {49, 21, 26}};
    for (const Row& row : rows) {
        SizeFormula f = m4_class(row.d);
        CHECK(f.n == row.n);
        CHECK(f.value == row.value);
    }
    CHECK_THROWS_AS(m4_class(9), std::invalid_argument);
    CHECK_THROWS_AS(m4_class(0), std::invalid_argument);

    CHECK(m4_formula(1) == 0);
    CHECK(m4_formula(5) == 2);
    CHECK(m4_formula(13) == 8);
    CHECK(m4_formula(17) == 8); // the formula value; the true maximum is 9
    CHECK(m4_formula(35) == 20);
    CHECK(m4_formula(55) == 32);
    CHECK_THROWS_AS(m4_formula(10), std::invalid_argument);
}

TEST_CASE("formula equals the class search on small confirmed divisors") {
    for (u64 d : {5, 7, 11, 13, 19, 25}) {
        ModulusShape sh = factor_shape(3 * d);
        std::vector<u64> allowed;
        for (u64 x = 1; x < sh.q; ++x)
            if (class_of(x, sh) == d) allowed.push_back(x);
        SearchResult sr = max_bset_restricted(3 * d, 4, allowed);
        REQUIRE(sr.status == SearchStatus::exact);
        CHECK(sr.max_size == m4_class(d).value);
    }
}

TEST_CASE("confirmed divisor table") {
    const auto& conf = confirmed_class_divisors();
    auto in = [&](u64 d) { return std::find(conf.begin(), conf.end(), d) != conf.end(); };
    CHECK(in(1));
    CHECK(in(5));
    CHECK(in(13));
    CHECK(in(53));
    CHECK(in(65));
    CHECK_FALSE(in(17));
    CHECK_FALSE(in(41));
    CHECK_FALSE(in(43));
    CHECK_FALSE(in(55)); // exhaustive class max 25 beats the formula's 24
}

TEST_CASE("claimed size of the 2*3^b lift vs the realized size") {
    CHECK(claimed_size_2x3b(factor_shape(54), 0) == 7);
    Report rep = construct(54);
    CHECK(rep.set.elements.size() == 8); // realized size beats the printed bound
    CHECK(has_note(rep, "predicts 7"));
    CHECK(has_note(rep, "realizes 8"));

    CHECK(claimed_size_2x3b(factor_shape(162), 1) == 24);
    rep = construct(162);
    CHECK(rep.set.elements.size() == 24); // bound met exactly, no remark
    CHECK(rep.exactness == Exactness::lower_bound);
    CHECK(rep.notes.empty());

    CHECK(claimed_size_2x3b(factor_shape(270), 2) == 39);
    rep = construct(270);
    CHECK(rep.set.elements.size() == 42);
    CHECK(has_note(rep, "predicts 39"));

    rep = construct(378);
    CHECK(rep.set.elements.size() == 58);

    CHECK_THROWS_AS(claimed_size_2x3b(factor_shape(18), 0), std::invalid_argument);
}

TEST_CASE("base provider resolution order") {
    BaseProvider p;

    ResolvedBase base = p.resolve(6);
    CHECK(base.set.elements == std::vector<u64>{1});
    CHECK(base.source == "builtin");
    CHECK(base.maximal);

    CHECK(p.resolve(10).set.elements == std::vector<u64>{1, 9});
    CHECK(p.resolve(14).set.elements == std::vector<u64>{1, 13});
    CHECK(p.resolve(15).set.elements == std::vector<u64>{1, 7});
    base = p.resolve(30);
    CHECK(base.set.elements == std::vector<u64>{1, 7});
    CHECK_FALSE(base.maximal);

    // builtins win over user entries so the published chains stay pinned
    p.add_user_set(make_bset(6, 4, {5}));
    CHECK(p.resolve(6).set.elements == std::vector<u64>{1});

    // user entries win over search
    p.add_user_set(make_bset(22, 4, {1, 21}));
    base = p.resolve(22);
    CHECK(base.source == "user-file");
    CHECK(base.set.elements == std::vector<u64>{1, 21});
    CHECK_FALSE(base.maximal);

    // searched bases are exact maxima
    base = BaseProvider{}.resolve(22);
    CHECK(base.source == "oracle");
    CHECK(base.maximal);
    CHECK(verify(base.set));

    // rejects sets that fail the defining property
    CHECK_THROWS_AS(p.add_user_set(BSet{10, 4, {1, 3}}), std::invalid_argument);
}

TEST_CASE("base provider file loading") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "b1set_construct_bases";
    fs::remove_all(dir);
    fs::create_directories(dir);

    write_set_file((dir / "a_22.json").string(), make_bset(22, 4, {1, 21}));
    write_set_file((dir / "b_22.json").string(), make_bset(22, 4, {3, 19}));
    write_set_file((dir / "c_26.json").string(), make_bset(26, 4, {1, 25}));

    BaseProvider p;
    p.load_user_dir(dir.string());
    CHECK(p.resolve(22).set.elements == std::vector<u64>{3, 19}); // later file wins
    CHECK(p.resolve(26).set.elements == std::vector<u64>{1, 25});

    BaseProvider q;
    q.load_user_file((dir / "a_22.json").string());
    CHECK(q.resolve(22).set.elements == std::vector<u64>{1, 21});

    CHECK_THROWS_AS(q.load_user_dir((dir / "missing").string()), std::invalid_argument);
    fs::remove_all(dir);
}

TEST_CASE("a too-small search budget surfaces as a provider error") {
    BaseProvider p;
    Budget tiny;
    tiny.max_nodes = 1000;
    tiny.max_seconds = 0;
    p.set_budget(tiny);
    CHECK(p.budget().max_nodes == 1000);
    try {
        p.resolve(123);
        FAIL("expected provider_error");
    } catch (const provider_error& e) {
        CHECK(e.sub_q == 123);
        CHECK(std::string(e.what()).find("budget-exceeded") != std::string::npos);
    }
}

TEST_CASE("rule preconditions reject wrong shapes and bases") {
    CHECK_THROWS_AS(fold8_ap(factor_shape(24), make_bset(3, 4, {})), std::invalid_argument);
    CHECK_THROWS_AS(fold8_ap(factor_shape(48), make_bset(7, 4, {1})), std::invalid_argument);
    CHECK_THROWS_AS(fold8_layers(factor_shape(48), make_bset(6, 4, {1})), std::invalid_argument);
    CHECK_THROWS_AS(triple_coset(factor_shape(45), nullptr), std::invalid_argument);
    CHECK_THROWS_AS(lift_12r(factor_shape(60), make_bset(14, 4, {1, 13})), std::invalid_argument);
    CHECK_THROWS_AS(lift_12r(factor_shape(24), make_bset(2, 4, {})), std::invalid_argument);
    CHECK_THROWS_AS(lift_2x3b(factor_shape(18), make_bset(2, 4, {})), std::invalid_argument);
    // a base set that is structurally fine but fails the defining property
    CHECK_THROWS_AS(fold8_ap(factor_shape(48), BSet{6, 4, {1, 2}}), std::invalid_argument);
}

TEST_CASE("every constructed set passes the verifier") {
    for (u64 q : {15, 16, 21, 24, 32, 33, 39, 48, 51, 54, 60, 64, 72, 75,
                  84, 96, 105, 120, 123, 162, 192, 240, 270}) {
        Report rep = construct(q);
        CHECK(verify(rep.set));
        CHECK(rep.set.q == q);
        for (const Step& s : rep.steps) CHECK(!s.op.empty());
    }
}
