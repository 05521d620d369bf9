#include "support.hpp"

#include "wmcfg/algebra.hpp"
#include "wmcfg/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace wmcfg;

namespace {

AlgebraPtr diamond() {
    // M3: bottom, three atoms, top. Not distributive.
    std::vector<std::string> e{"0", "x", "y", "z", "1"};
    std::vector<std::vector<std::size_t>> join(5, std::vector<std::size_t>(5)), meet(5, std::vector<std::size_t>(5));
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            if (i == j) {
                join[i][j] = meet[i][j] = i;
            } else if (i == 0 || j == 0) {
                join[i][j] = std::max(i, j);
                meet[i][j] = 0;
            } else if (i == 4 || j == 4) {
                join[i][j] = 4;
                meet[i][j] = std::min(i, j);
            } else {
                join[i][j] = 4;
                meet[i][j] = 0;
            }
        }
    return make_finite_lattice("m3", e, join, meet);
}

std::vector<AlgebraPtr> every_algebra() {
    std::vector<AlgebraPtr> out;
    for (const auto& name : shipped_algebra_names()) out.push_back(algebra_by_name(name));
    out.push_back(diamond());
    return out;
}

// Draws a random literal and keeps it if the algebra accepts it.
Weight sample(const AlgebraPtr& a, std::mt19937& rng) {
    std::uniform_int_distribution<int> kind(0, 9), num(-6, 12), den(1, 6);
    static const std::vector<std::string> special{"inf", "-inf", "true", "false", "0", "1",
                                                  "x", "y", "z", "0.5"};
    while (true) {
        std::string literal;
        int k = kind(rng);
        if (k < 3) {
            literal = special[std::uniform_int_distribution<std::size_t>(0, special.size() - 1)(rng)];
        } else {
            literal = std::to_string(num(rng)) + "/" + std::to_string(den(rng));
        }
        try {
            return parse_weight(a, literal);
        } catch (const Error&) {
        }
    }
}

} // namespace

TEST_CASE("algebra laws hold on sampled triples") {
    std::mt19937 rng(20240611);
    for (const auto& a : every_algebra()) {
        CAPTURE(a->name());
        auto zero = Weight::zero(a), one = Weight::one(a);
        for (int n = 0; n < 1500; ++n) {
            auto x = sample(a, rng), y = sample(a, rng), z = sample(a, rng);
            REQUIRE(plus(plus(x, y), z) == plus(x, plus(y, z)));
            REQUIRE(plus(x, y) == plus(y, x));
            REQUIRE(times(times(x, y), z) == times(x, times(y, z)));
            REQUIRE(times(x, y) == times(y, x));
            REQUIRE(plus(zero, x) == x);
            REQUIRE(times(one, x) == x);
            REQUIRE(times(zero, x) == zero);
            REQUIRE(times(x, zero) == zero);
            REQUIRE(a->contains(plus(x, y).value()));
            REQUIRE(a->contains(times(x, y).value()));
        }
    }
}

TEST_CASE("finite sums are permutation invariant") {
    std::mt19937 rng(7);
    for (const auto& a : every_algebra()) {
        CAPTURE(a->name());
        for (int n = 0; n < 200; ++n) {
            std::vector<Weight> family;
            for (int i = 0; i < 5; ++i) family.push_back(sample(a, rng));
            auto s = sum(a, family);
            std::shuffle(family.begin(), family.end(), rng);
            REQUIRE(sum(a, family) == s);
        }
    }
}

TEST_CASE("example values") {
    auto pr2 = algebra_by_name("pr2");
    auto tropical = algebra_by_name("tropical");
    auto pw = [](const AlgebraPtr& a, const char* s) { return parse_weight(a, s); };

    CHECK(plus(pw(tropical, "3"), pw(tropical, "5")) == pw(tropical, "3"));
    CHECK(times(pw(tropical, "3"), pw(tropical, "5")) == pw(tropical, "8"));
    CHECK(plus(pw(pr2, "7/10"), pw(pr2, "6/10")) == pw(pr2, "1"));
    CHECK(times(pw(pr2, "1/2"), pw(pr2, "1/3")).to_string() == "1/6");

    std::vector<Weight> halves(3, pw(pr2, "1/2"));
    CHECK(sum(pr2, halves).is_one());
    CHECK(sum(pr2, std::vector<Weight>{}).is_zero());
    CHECK(sum(pr2, std::vector<Weight>{pw(pr2, "2/7")}) == pw(pr2, "2/7"));
    CHECK(product(pr2, std::vector<Weight>{}).is_one());

    CHECK(pw(pr2, "1/3").to_string() == "1/3");
    CHECK(pw(tropical, "inf").is_zero());
    CHECK_THROWS_AS(pw(algebra_by_name("viterbi"), "3/2"), ValidationError);
    CHECK_THROWS_AS(pw(pr2, "abc"), Error);

    auto pr1 = algebra_by_name("pr1");
    CHECK(plus(pw(pr1, "1/2"), pw(pr1, "1/2")) == pw(pr1, "3/4"));
    auto lcm = algebra_by_name("lcm-gcd");
    CHECK(plus(pw(lcm, "4"), pw(lcm, "6")) == pw(lcm, "12"));
    CHECK(times(pw(lcm, "4"), pw(lcm, "6")) == pw(lcm, "2"));
}

TEST_CASE("Pr2 is not distributive") {
    auto a = algebra_by_name("pr2");
    auto h = parse_weight(a, "1/2"), t = parse_weight(a, "3/4");
    CHECK_FALSE(times(h, plus(t, t)) == plus(times(h, t), times(h, t)));
}

TEST_CASE("mixed algebras and unsupported names are rejected") {
    auto p = Weight::one(algebra_by_name("probability"));
    auto t = Weight::one(algebra_by_name("tropical"));
    CHECK_THROWS_AS(plus(p, t), UsageError);
    CHECK_THROWS_AS(times(p, t), UsageError);
    CHECK_THROWS_AS(algebra_by_name("language"), UsageError);
    CHECK_THROWS_AS(algebra_by_name("nope"), UsageError);
}

TEST_CASE("lattice files") {
    auto a = parse_lattice(R"(lattice chain
elements lo mid hi
join
lo mid hi
mid mid hi
hi hi hi
meet
lo lo lo
lo mid mid
lo mid hi
)");
    CHECK(Weight::zero(a).to_string() == "lo");
    CHECK(Weight::one(a).to_string() == "hi");
    CHECK(plus(parse_weight(a, "lo"), parse_weight(a, "mid")).to_string() == "mid");
    CHECK(lattice_elements(*a) == std::vector<std::string>{"lo", "mid", "hi"});
    CHECK_THROWS(parse_lattice("lattice bad\nelements a b\njoin\na b\nb a\nmeet\na a\na b\n"));
}

TEST_CASE("rational literals") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("-3") == Rational(-3));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("1//2"));
}
