#include "support.hpp"

#include "wmcfg/error.hpp"

#include <doctest.h>

using namespace wmcfg;
using test::w;

TEST_CASE("parsing the Example 2.2 grammar") {
    auto g = test::example22();
    CHECK(g.productions().size() == 5);
    CHECK(g.fanout() == 2);
    CHECK(g.rank() == 2);
    CHECK(g.initial() == "S");
    CHECK(g.sort("A") == 2);
    CHECK(g.terminals() == std::set<Symbol>{"a", "b", "c", "d"});
    CHECK(g.weight(*g.find_production("r5")).to_string() == "2/3");
    CHECK(g.is_non_deleting());
    CHECK_FALSE(g.is_unweighted());
}

TEST_CASE("format and parse round trip") {
    auto g = test::example22();
    auto again = parse_grammar(format_grammar(g));
    CHECK(format_grammar(again) == format_grammar(g));
    CHECK(again.productions().size() == g.productions().size());
}

TEST_CASE("invalid grammars") {
    CHECK_THROWS_AS(test::grammar("rule r: S -> [x1.1 x1.1](A)\nrule q: A -> ['a']()"), ValidationError);
    CHECK_THROWS_AS(test::grammar("algebra probability\nrule r: S -> ['a']() @ 0"), ValidationError);
    CHECK_THROWS_AS(test::grammar("rule r: S -> ['a'; 'b']()"), ValidationError);
    CHECK_THROWS_AS(test::grammar("rule r: S -> [x2.1](A)\nrule q: A -> ['a']()"), ValidationError);
    CHECK_THROWS_AS(test::grammar("rule r: S -> [x1.1](A)\nrule q: A -> ['a'; 'b']()\nrule p: A -> ['a']()"),
                    ValidationError);
    CHECK_THROWS_AS(test::grammar("algebra nope\nrule r: S -> []()"), ParseError);
    try {
        test::grammar("start S\n\nrule r: S -> ['a'(\n");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(test::grammar("frobnicate\n"), ParseError);
    CHECK_THROWS_AS(test::grammar("rule r: S -> [y1](A)"), ParseError);
}

TEST_CASE("composition application") {
    Composition c1({2, 2}, {{Variable{0, 0}, Variable{1, 0}, Variable{0, 1}, Variable{1, 1}}});
    std::vector<Tuple> args{{w("a"), w("c")}, {w("b"), w("d")}};
    CHECK(c1.apply(args) == Tuple{w("a b c d")});

    Composition leaf({}, {{}, {}});
    CHECK(leaf.apply({}) == Tuple{Word{}, Word{}});

    Composition c2({2}, {{Symbol("a"), Variable{0, 0}}, {Symbol("c"), Variable{0, 1}}});
    std::vector<Tuple> eps{{Word{}, Word{}}};
    CHECK(c2.apply(eps) == Tuple{w("a"), w("c")});
    CHECK(c2.to_string() == "['a' x1.1; 'c' x1.2]");
    CHECK(c2.terminal_count() == 2);
    CHECK(c2.is_linear());
    CHECK(c2.is_non_deleting());

    Composition deleting({2}, {{Variable{0, 1}}});
    CHECK_FALSE(deleting.is_non_deleting());
    CHECK(deleting.is_terminal_free());
    CHECK_THROWS_AS(Composition({1}, {{Variable{0, 1}}}), ValidationError);
}

TEST_CASE("derivations, yields and weights") {
    auto g = test::example22();
    auto d = parse_derivation(g, "r1(r2(r4), r5)");
    CHECK(yield(g, d) == Tuple{w("a c")});
    CHECK(derivation_weight(g, d).to_string() == "1/6");
    CHECK(format_derivation(g, d) == "r1(r2(r4), r5)");

    auto d2 = parse_derivation(g, "r1(r2(r2(r4)), r3(r5))");
    CHECK(yield(g, d2) == Tuple{w("a a b c c d")});
    CHECK(derivation_weight(g, d2).to_string() == "1/36");
    CHECK(derivation_weight(g, parse_derivation(g, "r4")).to_string() == "1/2");
    CHECK(d2.height() == 4);
    CHECK(d2.size() == 6);

    CHECK_THROWS_AS(check_well_sorted(g, parse_derivation(g, "r1(r5, r4)"), "S"), ValidationError);
    CHECK_THROWS_AS(yield(g, parse_derivation(g, "r1(r5, r4)")), ValidationError);
    CHECK_THROWS(parse_derivation(g, "r1(r2(r4)"));

    auto listing = derivation_listing(g, d);
    REQUIRE(listing.size() == 4);
    CHECK(format_position(listing[0].first) == "ε");
    CHECK(format_position(listing[2].first) == "11");
    CHECK(listing[3].second == "r5");
    CHECK(derivation_from_listing(g, listing) == d);
    CHECK(parse_position("1.12.3") == Position{1, 12, 3});
    CHECK(format_position(Position{1, 12, 3}) == "1.12.3");
}

TEST_CASE("fan-out 0 productions") {
    auto g = test::grammar("rule r: S -> ['a'](Z)\nrule z: Z -> [!]()");
    CHECK(g.sort("Z") == 0);
    CHECK(yield(g, parse_derivation(g, "r(z)")) == Tuple{w("a")});
    CHECK(format_grammar(g).find("[!]") != std::string::npos);
}
