#include "support.hpp"

#include "wmcfg/error.hpp"
#include "wmcfg/generator.hpp"
#include "wmcfg/homomorphism.hpp"

#include <doctest.h>

#include <random>

using namespace wmcfg;
using test::w;

namespace {

WeightedHom weighted_abc() {
    auto a = algebra_by_name("probability");
    auto q = [&](const char* s) { return parse_weight(a, s); };
    return WeightedHom(a, {"x", "y", "z"}, {"a", "b"},
                       {{"x", {w("a"), q("1/2")}}, {"y", {{}, q("1/3")}}, {"z", {w("b"), q("2")}}});
}

} // namespace

TEST_CASE("apply_hom") {
    auto h = weighted_abc();
    CHECK(h.is_alphabetic());
    auto m = apply_hom(h, w("x y z x"));
    CHECK(m.word == w("a b a"));
    CHECK(m.weight.to_string() == "1/6");
    CHECK(apply_hom(h, {}) == Monomial{{}, Weight::one(h.algebra())});
    CHECK_THROWS_AS(apply_hom(h, w("q")), UsageError);

    std::mt19937 rng(3);
    std::vector<Symbol> src{"x", "y", "z"};
    for (int n = 0; n < 300; ++n) {
        Word u, v;
        for (int i = rng() % 6; i > 0; --i) u.push_back(src[rng() % 3]);
        for (int i = rng() % 6; i > 0; --i) v.push_back(src[rng() % 3]);
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        auto mu = apply_hom(h, u), mv = apply_hom(h, v), muv = apply_hom(h, uv);
        Word joined = mu.word;
        joined.insert(joined.end(), mv.word.begin(), mv.word.end());
        CHECK(muv.word == joined);
        CHECK(muv.weight == times(mu.weight, mv.weight));
    }
}

TEST_CASE("zero images normalise") {
    auto a = algebra_by_name("probability");
    WeightedHom h(a, {"x", "y"}, {"a"}, {{"x", {w("a"), Weight::zero(a)}}, {"y", {w("a"), Weight::one(a)}}});
    CHECK(h.image("x") == Monomial::zero(a));
    CHECK(apply_hom(h, w("y x y")) == Monomial::zero(a));
    CHECK_THROWS_AS(WeightedHom(a, {"x", "y"}, {"a"}, {{"x", {w("a"), Weight::one(a)}}}), ValidationError);
    CHECK_THROWS_AS(WeightedHom(a, {"x"}, {"a"}, {{"x", {w("b"), Weight::one(a)}}}), ValidationError);
}

TEST_CASE("unweighted homomorphisms substitute strings") {
    auto h = make_unweighted_hom({"x", "y"}, {"a", "b"}, {{"x", w("a b")}, {"y", {}}});
    CHECK_FALSE(h.is_alphabetic());
    CHECK(apply_hom(h, w("x y x")).word == w("a b a b"));
    CHECK(apply_hom(h, w("x y x")).weight.is_one());
}

TEST_CASE("compose_alphabetic matches sequential application") {
    auto h1 = weighted_abc();
    auto h2 = make_unweighted_hom({"p", "q", "r", "s"}, {"x", "y", "z"},
                                  {{"p", w("x")}, {"q", {}}, {"r", w("z")}, {"s", w("y")}});
    auto h = compose_alphabetic(h1, h2);
    CHECK(h.is_alphabetic());
    std::vector<Symbol> src{"p", "q", "r", "s"};
    std::vector<Word> layer{Word{}};
    for (int len = 0; len <= 6; ++len) {
        std::vector<Word> next;
        for (const auto& u : layer) {
            auto inner = apply_hom(h2, u);
            auto outer = apply_hom(h1, inner.word);
            CHECK(apply_hom(h, u) == outer);
            for (const auto& s : src) {
                auto x = u;
                x.push_back(s);
                next.push_back(x);
            }
        }
        layer = std::move(next);
    }

    auto id = identity_hom(algebra_by_name("boolean"), h1.source());
    CHECK(compose_alphabetic(h1, id).table() == h1.table());
    CHECK_THROWS_AS(compose_alphabetic(h1, make_unweighted_hom({"p"}, {"x"}, {{"p", w("x x")}})), UsageError);
    CHECK_THROWS_AS(compose_alphabetic(h1, make_unweighted_hom({"p"}, {"w"}, {{"p", w("w")}})), UsageError);
}

TEST_CASE("projection of the Example 2.2 decomposition") {
    auto cs = build_decomposition(test::example22());
    auto a = cs.source.algebra();
    CHECK(cs.projection.image(opening_bracket("r2", 1)).weight.is_one());
    CHECK(cs.projection.image(terminal_opening("r2^1")) == Monomial{{}, parse_weight(a, "1/2")});
    CHECK(cs.projection.image(terminal_opening("a")) == Monomial{w("a"), Weight::one(a)});
    CHECK(cs.projection.image(terminal_closing("a")) == Monomial{{}, Weight::one(a)});
    CHECK(apply_hom(cs.bracket_hom, {terminal_opening("a")}).word == w("a"));
}

TEST_CASE("image_weighted") {
    auto sep = boolean_part(test::example22());
    auto image = image_weighted(sep.weight_hom, std::set<Word>{w("r1^1 r2^1 a r4^1 r5^1 r2^2 c r4^2 r5^2")});
    REQUIRE(image.size() == 1);
    CHECK(image.at(w("a c")).to_string() == "1/6");
    CHECK(image_weighted(sep.weight_hom, std::set<Word>{}).empty());

    auto h = weighted_abc();
    auto both = image_weighted(h, std::set<Word>{w("x y"), w("y x")});
    CHECK(both.at(w("a")).to_string() == "1/3");

    auto a = h.algebra();
    WeightedLanguage weighted{{w("x"), parse_weight(a, "4")}, {w("x y"), parse_weight(a, "3")}};
    CHECK(image_weighted(h, weighted).at(w("a")).to_string() == "5/2");
}

TEST_CASE("hom text format") {
    auto h = weighted_abc();
    auto text = format_hom(h);
    CHECK(text.find("y -> '' @ 1/3") != std::string::npos);
    auto back = parse_hom(text, h.algebra());
    CHECK(back.table() == h.table());
    CHECK_THROWS(parse_hom("x -> a @ 1", h.algebra()));
}
