#include "support.hpp"

#include "wmcfg/transform.hpp"

#include <doctest.h>

#include <functional>

using namespace wmcfg;
using test::w;

namespace {

struct Tree {
    std::size_t p;
    std::vector<Tree> kids;
};

// Oracle: all trees from `nt` of height <= h, built directly from the rule list.
std::vector<Tree> trees(const Grammar& g, const std::string& nt, std::size_t h) {
    std::vector<Tree> out;
    if (h == 0) return out;
    for (std::size_t p = 0; p < g.productions().size(); ++p) {
        if (g.production(p).lhs != nt) continue;
        const auto& rhs = g.production(p).rhs;
        std::vector<std::vector<Tree>> options;
        for (const auto& a : rhs) options.push_back(trees(g, a, h - 1));
        std::vector<Tree> kids;
        std::function<void(std::size_t)> go = [&](std::size_t i) {
            if (i == rhs.size()) {
                out.push_back({p, kids});
                return;
            }
            for (const auto& t : options[i]) {
                kids.push_back(t);
                go(i + 1);
                kids.pop_back();
            }
        };
        go(0);
    }
    return out;
}

Tuple evaluate(const Grammar& g, const Tree& t) {
    std::vector<Tuple> args;
    for (const auto& k : t.kids) args.push_back(evaluate(g, k));
    Tuple out;
    for (const auto& comp : g.production(t.p).composition.components()) {
        Word word;
        for (const auto& token : comp) {
            if (const auto* v = std::get_if<Variable>(&token)) {
                const auto& part = args[v->argument][v->component];
                word.insert(word.end(), part.begin(), part.end());
            } else {
                word.push_back(std::get<Symbol>(token));
            }
        }
        out.push_back(word);
    }
    return out;
}

Weight weigh(const Grammar& g, const Tree& t) {
    Weight out = g.weight(t.p);
    for (const auto& k : t.kids) out = times(out, weigh(g, k));
    return out;
}

std::map<Word, Weight> oracle_language(const Grammar& g, std::size_t h) {
    std::map<Word, Weight> out;
    for (const auto& t : trees(g, g.initial(), h)) {
        auto word = evaluate(g, t).front();
        auto it = out.find(word);
        if (it == out.end())
            out.emplace(word, weigh(g, t));
        else
            it->second = plus(it->second, weigh(g, t));
    }
    return out;
}

std::vector<Word> all_words(const std::set<Symbol>& sigma, std::size_t n) {
    std::vector<Word> out{Word{}};
    for (std::size_t begin = 0, len = 1; len <= n; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& s : sigma) {
                auto x = out[i];
                x.push_back(s);
                out.push_back(x);
            }
        begin = end;
    }
    return out;
}

} // namespace

TEST_CASE("enumerate_derivations examples") {
    auto g = test::example22();
    auto s2 = enumerate_derivations(g, "S", 2);
    REQUIRE(s2.size() == 1);
    CHECK(format_derivation(g, s2[0]) == "r1(r4, r5)");
    auto a1 = enumerate_derivations(g, "A", 1);
    REQUIRE(a1.size() == 1);
    CHECK(format_derivation(g, a1[0]) == "r4");
    CHECK(enumerate_derivations(g, "S", 1).empty());
    CHECK_THROWS(enumerate_derivations(g, "Q", 3));
    for (std::size_t h = 1; h <= 5; ++h) CHECK(enumerate_derivations(g, "S", h).size() == trees(g, "S", h).size());
}

TEST_CASE("derivations_of examples") {
    auto g = test::example22();
    auto ac = derivations_of(g, w("a c"), 3);
    REQUIRE(ac.size() == 1);
    CHECK(format_derivation(g, ac[0]) == "r1(r2(r4), r5)");
    CHECK(derivations_of(g, w("a b"), 6).empty());
    auto eps = derivations_of(g, {}, 2);
    REQUIRE(eps.size() == 1);
    CHECK(format_derivation(g, eps[0]) == "r1(r4, r5)");
}

TEST_CASE("weighted semantics examples") {
    auto g = test::example22();
    CHECK(weighted_semantics(g, w("a c"), 8).value.to_string() == "1/6");
    CHECK(weighted_semantics(g, {}, 8).value.to_string() == "1/3");
    CHECK(weighted_semantics(g, w("b a"), 8).value.is_zero());
    auto r = weighted_semantics(g, w("a a c c"), 2);
    CHECK(r.value.is_zero());
    CHECK(r.truncated);
    CHECK_FALSE(weighted_semantics(g, w("a a c c"), 4).truncated);
}

TEST_CASE("weighted semantics agrees with the tree oracle") {
    for (const char* file : {"example22.mcfg", "anbn.mcfg", "anbmanbm.mcfg", "deleting1.mcfg", "deleting2.mcfg"}) {
        CAPTURE(file);
        auto g = load_grammar_file(test::data(file));
        const std::size_t h = 5;
        auto oracle = oracle_language(g, h);
        for (const auto& word : all_words(g.terminals(), 5)) {
            auto it = oracle.find(word);
            auto expected = it == oracle.end() ? Weight::zero(g.algebra()) : it->second;
            CHECK(weighted_semantics(g, word, h).value == expected);
        }
    }
}

TEST_CASE("derivation counts are monotone in the height") {
    auto g = load_grammar_file(test::data("anbmanbm.mcfg"));
    for (const auto& word : {w("a b a b"), w("a a a a"), w("b b b b"), Word{}}) {
        std::size_t last = 0;
        for (std::size_t h = 1; h <= 6; ++h) {
            auto n = derivations_of(g, word, h).size();
            CHECK(n >= last);
            last = n;
        }
    }
}

TEST_CASE("growth analysis") {
    auto g = test::example22();
    auto growth = derivation_growth(g, 4);
    CHECK_FALSE(growth.unbounded);
    CHECK(growth.any);
    CHECK(growth.max_height == 4);
    CHECK_FALSE(derivation_growth(g, 3).any);

    auto loop = test::grammar("rule r: S -> [x1.1](S)\nrule q: S -> ['a']()");
    CHECK(derivation_growth(loop, 1).unbounded);
    CHECK(weighted_semantics(loop, w("a"), 3).truncated);

    auto cost = derivation_growth(g, 2, [](std::size_t) { return 1; });
    CHECK(cost.max_cost == 4);
}

TEST_CASE("bounded tuples match the oracle") {
    for (const char* file : {"example22.mcfg", "anbn.mcfg", "anbmanbm.mcfg"}) {
        CAPTURE(file);
        auto g = load_grammar_file(test::data(file));
        std::set<Word> expected;
        for (const auto& [word, weight] : oracle_language(g, 8))
            if (word.size() <= 6) expected.insert(word);
        CHECK(bounded_language(g, 6) == expected);
    }
    auto tuples = bounded_tuples(test::example22(), 2);
    CHECK(tuples.at("A") == std::set<Tuple>{{Word{}, Word{}}, {w("a"), w("c")}});
}
