// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "support.hpp"

#include "wmcfg/algebra.hpp"
#include "wmcfg/dyck.hpp"
#include "wmcfg/error.hpp"
#include "wmcfg/generator.hpp"
#include "wmcfg/transform.hpp"
#include "wmcfg/verify.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace wmcfg;
using test::w;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

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

std::size_t covering_height(const Grammar& g, std::size_t length) {
    auto growth = derivation_growth(g, length);
    if (growth.unbounded) throw UsageError("unbounded derivations");
    return growth.any ? growth.max_height : 0;
}

Word repeat(const Symbol& s, std::size_t n) { return Word(n, s); }

Outcome example_exactness() {
    Outcome o;
    auto g = test::example22();
    auto a = g.algebra();
    std::map<Word, Weight> expected;
    for (std::size_t m = 0; m <= 4; ++m)
        for (std::size_t n = 0; n <= 4; ++n) {
            if ((m > 3 || n > 3) && m + n > 4) continue;
            Word u = repeat("a", m);
            for (const auto* part : {"b", "c", "d"}) {
                auto block = repeat(part, std::string(part) == "c" ? m : n);
                u.insert(u.end(), block.begin(), block.end());
            }
            Rational q(1);
            for (std::size_t i = 0; i < m; ++i) q /= 2;
            for (std::size_t i = 0; i <= n; ++i) q /= 3;
            expected.emplace(u, parse_weight(a, q.get_str()));
        }
    std::vector<std::size_t> height(13);
    for (std::size_t n = 0; n <= 12; ++n) height[n] = covering_height(g, n);
    for (const auto& [u, weight] : expected)
        o.require(weighted_semantics(g, u, height[u.size()]).value == weight, "wrong weight for " + format_word(u));
    for (const auto& u : all_words(g.terminals(), 8))
        if (!expected.count(u))
            o.require(weighted_semantics(g, u, height[u.size()]).value.is_zero(), "non-zero weight for " + format_word(u));
    o.require(weighted_semantics(g, w("a c"), height[2]).value.to_string() == "1/6", "weight of ac");
    return o;
}

Outcome algorithm_traces() {
    Outcome o;
    auto ba = load_partition_file(test::data("example32.cells"));
    MembershipChecker member(ba);
    const std::string table1 = "isMember(⟦ ( ) ⟧ [ ⟨ ⟩ ])\n"
                               "l.4: σ1 = ⟦, σ2 = [, u1 = ( ), u2 = ⟨ ⟩\n"
                               "l.5: 𝓘 = {{{1,2}}}\n"
                               "l.6: I = {{1,2}}\n"
                               "l.8: k = 2, i1 = 1, i2 = 2\n"
                               "l.9: b = 1 · isMember(( ) ⟨ ⟩)\n"
                               "    l.4: σ1 = (, σ2 = ⟨, u1 = ε, u2 = ε\n"
                               "    l.5: 𝓘 = {{{1,2}}}\n"
                               "    l.6: I = {{1,2}}\n"
                               "    l.8: k = 2, i1 = 1, i2 = 2\n"
                               "    l.9: b = 1 · isMember(ε)\n"
                               "        l.2: return 1\n"
                               "    l.9: b = 1 · 1 = 1\n"
                               "    l.11: return 1\n"
                               "l.9: b = 1 · 1 = 1\n"
                               "l.11: return 1\n";
    std::ostringstream t1;
    o.require(member.trace(w("⟦ ( ) ⟧ [ ⟨ ⟩ ]"), t1), "Table 1 verdict");
    o.require(t1.str() == table1, "Table 1 trace");

    std::ostringstream t2;
    o.require(member.trace(w("⟦ ( ) ⟧ [ ] ⟦ ⟧ [ ⟨ ⟩ ]"), t2), "Table 2 verdict");
    o.require(t2.str().find("l.5: 𝓘 = {{{1,2}, {3,4}}, {{1,4}, {2,3}}}") != std::string::npos, "Table 2 trace");

    std::ostringstream t3;
    o.require(!member.trace(w("⟦ ( ) ⟧ ⟨ [ ] ⟩"), t3), "rejection verdict");
    o.require(t3.str().find("l.5: 𝓘 = ∅") != std::string::npos, "rejection trace");

    o.require(is_dyck(ba, w("⟦ ( ) ⟧ ⟨ ⟩ ( )")), "Dyck example");
    o.require(!is_dyck(ba, w("( ⟦ ) ⟧ ⟨ ⟩ ( )")), "non-Dyck example");
    return o;
}

Outcome dyck_oracle() {
    Outcome o;
    auto example = load_partition_file(test::data("example32.cells"));
    auto r1 = check_dyck_oracle(example, 2, 8);
    o.require(r1.status == Status::pass, "example partition: " + format_report(r1));
    auto singletons = load_partition_file(test::data("singletons.cells"));
    auto r2 = check_dyck_oracle(singletons, 2, 8);
    o.require(r2.status == Status::pass, "singleton partition: " + format_report(r2));
    MembershipChecker member(singletons);
    auto dyck = dyck_words(singletons, 8);
    std::size_t accepted = 0;
    for (const auto& u : dyck) accepted += member(u) ? 1 : 0;
    o.require(accepted == dyck.size(), "singleton cells reject a Dyck word");
    o.require(r2.checked == dyck.size(), "singleton generated language differs from the Dyck words");
    return o;
}

Outcome weight_separation() {
    Outcome o;
    auto g = test::example22();
    auto sep = boolean_part(g);
    auto image = image_weighted(sep.weight_hom, bounded_language(sep.boolean_grammar, 20));
    for (const auto& u : all_words(g.terminals(), 6)) {
        auto it = image.find(u);
        auto got = it == image.end() ? Weight::zero(g.algebra()) : it->second;
        o.require(got == weighted_semantics(g, u, covering_height(g, u.size())).value,
                  "separated weight of " + format_word(u));
    }
    auto d = to_deriv(sep, w("r1^1 r2^1 a r4^1 r5^1 r2^2 c r4^2 r5^2"));
    o.require(format_derivation(sep.source, d) == "r1(r2(r4), r5)", "Example w' decodes wrongly");
    for (const auto& x : enumerate_derivations(sep.source, sep.source.initial(), 4))
        o.require(to_deriv(sep, separated_yield(sep, x)) == x, "round trip of " + format_derivation(sep.source, x));
    return o;
}

const char* test_grammars[] = {"example22.mcfg", "anbn.mcfg", "anbmanbm.mcfg"};

Outcome theorem() {
    Outcome o;
    for (const char* file : test_grammars) {
        auto g = load_grammar_file(test::data(file));
        auto cs = build_decomposition(g);
        auto bound = sufficient_bracket_bound(cs, 6);
        o.require(bound.has_value(), std::string(file) + ": no finite bracket bound");
        if (!bound) continue;
        auto r = check_theorem(g, cs, 6, *bound);
        o.require(r.status == Status::pass, std::string(file) + ": " + format_report(r));
    }
    return o;
}

Outcome bijection() {
    Outcome o;
    for (const char* file : test_grammars) {
        auto r = check_bijection(load_grammar_file(test::data(file)), 4);
        o.require(r.status == Status::pass && r.checked > 0, std::string(file) + ": " + format_report(r));
    }
    return o;
}

Outcome normal_form() {
    Outcome o;
    for (const char* file : {"deleting1.mcfg", "deleting2.mcfg"}) {
        auto src = load_grammar_file(test::data(file));
        auto out = to_nondeleting(src).grammar;
        o.require(!src.is_non_deleting(), std::string(file) + " is already non-deleting");
        o.require(out.is_non_deleting(), std::string(file) + ": output is deleting");
        o.require(out.fanout() <= src.fanout(), std::string(file) + ": fan-out grew");
        for (const auto& u : all_words(src.terminals(), 6)) {
            auto h = covering_height(out, u.size());
            o.require(weighted_semantics(src, u, h).value == weighted_semantics(out, u, h).value,
                      std::string(file) + ": weight of " + format_word(u));
        }
    }
    return o;
}

// Random literal accepted by the algebra.
Weight sample(const AlgebraPtr& a, std::mt19937& rng) {
    std::uniform_int_distribution<int> kind(0, 9), num(-6, 12), den(1, 6);
    static const std::vector<std::string> special{"inf", "-inf", "true", "false", "0", "1", "0.5"};
    while (true) {
        std::string literal = kind(rng) < 3
                                  ? special[std::uniform_int_distribution<std::size_t>(0, special.size() - 1)(rng)]
                                  : std::to_string(num(rng)) + "/" + std::to_string(den(rng));
        try {
            return parse_weight(a, literal);
        } catch (const Error&) {
        }
    }
}

Outcome algebra_laws() {
    Outcome o;
    std::mt19937 rng(1);
    for (const auto& name : shipped_algebra_names()) {
        auto a = algebra_by_name(name);
        auto zero = Weight::zero(a), one = Weight::one(a);
        for (int n = 0; n < 1000; ++n) {
            auto x = sample(a, rng), y = sample(a, rng), z = sample(a, rng);
            bool laws = plus(plus(x, y), z) == plus(x, plus(y, z)) && plus(x, y) == plus(y, x) &&
                        times(times(x, y), z) == times(x, times(y, z)) && times(x, y) == times(y, x) &&
                        plus(zero, x) == x && times(one, x) == x && times(zero, x) == zero;
            o.require(laws, name + ": law violated at " + x.to_string() + ", " + y.to_string() + ", " + z.to_string());
        }
    }
    return o;
}

Outcome termination() {
    Outcome o;
    auto ba = load_partition_file(test::data("example32.cells"));
    auto start = std::chrono::steady_clock::now();
    MembershipChecker member(ba);
    std::size_t accepted = 0;
    auto words = dyck_words(ba, 12);
    for (const auto& u : words) accepted += member(u) ? 1 : 0;
    auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(accepted > 0, "nothing accepted");
    o.require(seconds <= 10.0, "took " + std::to_string(seconds) + " s");
    std::ostringstream note;
    note << words.size() << " Dyck words, " << accepted << " accepted, " << seconds << " s";
    if (o.ok) o.detail = note.str();
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 example grammar weights are exact", example_exactness},
        {"2 membership traces", algorithm_traces},
        {"3 Dyck oracle equivalence", dyck_oracle},
        {"4 weight separation", weight_separation},
        {"5 decomposition theorem", theorem},
        {"6 bijection", bijection},
        {"7 non-deleting normal form", normal_form},
        {"8 algebra laws", algebra_laws},
        {"9 membership termination", termination},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << name << "  (" << seconds << " s)";
        if (!o.detail.empty()) std::cout << "  " << o.detail;
        std::cout << "\n";
        failed += o.ok ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
