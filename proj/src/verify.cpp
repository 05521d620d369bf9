#include "wmcfg/verify.hpp"

#include "wmcfg/error.hpp"

#include <json.hpp>

#include <sstream>

namespace wmcfg {

std::string status_name(Status status) {
    switch (status) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::truncated: return "truncated";
    }
    return "fail";
}

namespace {

std::string show(const Word& w) { return w.empty() ? "ε" : format_word(w); }

void finish(Report& report, bool truncated) {
    if (!report.mismatches.empty())
        report.status = Status::fail;
    else if (truncated)
        report.status = Status::truncated;
    else
        report.status = Status::pass;
}

std::vector<Word> all_words(const std::set<Symbol>& alphabet, std::size_t max_length) {
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (std::size_t n = 1; n <= max_length; ++n) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (const auto& s : alphabet) {
                Word w = out[i];
                w.push_back(s);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

// Derivations from `nt` whose summed production cost is at most `budget`.
class CostEnumerator {
public:
    CostEnumerator(const Grammar& g, ProductionCost cost) : g_(g), cost_(std::move(cost)) {}

    const std::vector<std::pair<Derivation, std::size_t>>& from(const std::string& nt, std::size_t budget) {
        auto key = std::make_pair(nt, budget);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::vector<std::pair<Derivation, std::size_t>> out;
        for (std::size_t p : g_.productions_of(nt)) {
            std::size_t own = cost_(p);
            if (own == 0) throw UsageError("cost enumeration needs positive production costs");
            if (own > budget) continue;
            const auto& rhs = g_.production(p).rhs;
            Derivation d{p, std::vector<Derivation>(rhs.size())};
            std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
                if (i == rhs.size()) {
                    out.emplace_back(d, budget - left);
                    return;
                }
                // Copy: the recursive call may rehash the memo table.
                auto options = from(rhs[i], left);
                for (const auto& [child, c] : options) {
                    d.children[i] = child;
                    rec(i + 1, left - c);
                }
            };
            rec(0, budget - own);
        }
        return memo_[key] = std::move(out);
    }

private:
    const Grammar& g_;
    ProductionCost cost_;
    std::map<std::pair<std::string, std::size_t>, std::vector<std::pair<Derivation, std::size_t>>> memo_;
};

} // namespace

Report check_theorem(const Grammar& g, std::size_t max_word_length, std::size_t bracket_bound) {
    return check_theorem(g, build_decomposition(g), max_word_length, bracket_bound);
}

Report check_theorem(const Grammar& g, const CsDecomposition& cs, std::size_t max_word_length,
                     std::size_t bracket_bound) {
    Report report;
    report.property = "theorem";
    auto sufficient = sufficient_bracket_bound(cs, max_word_length);
    report.parameters = {{"max_word_length", std::to_string(max_word_length)},
                         {"bracket_bound", std::to_string(bracket_bound)},
                         {"sufficient_bracket_bound", sufficient ? std::to_string(*sufficient) : "unbounded"}};
    bool truncated = !sufficient || *sufficient > bracket_bound;
    if (truncated) report.notes.push_back("bracket bound does not cover every encoding");

    const Grammar nondeleting = g.is_non_deleting() ? g : to_nondeleting(g).grammar;
    std::vector<std::optional<std::size_t>> height(max_word_length + 1);
    // Lengths whose encodings and derivations are all within the bounds.
    std::vector<bool> covered(max_word_length + 1, true);
    for (std::size_t n = 0; n <= max_word_length; ++n) {
        auto growth = derivation_growth(nondeleting, n);
        if (growth.unbounded) {
            truncated = true;
            covered[n] = false;
            report.notes.push_back("infinitely many derivations yield words of length " + std::to_string(n));
        } else {
            height[n] = growth.any ? growth.max_height : 0;
        }
        auto need = sufficient_bracket_bound(cs, n);
        if (!need || *need > bracket_bound) covered[n] = false;
    }

    std::size_t skipped = 0;
    auto actual = weighted_cs_language(cs, max_word_length, bracket_bound);
    for (const auto& w : all_words(g.terminals(), max_word_length)) {
        if (!covered[w.size()]) {
            ++skipped;
            continue;
        }
        ++report.checked;
        Weight expected = weighted_semantics(g, w, *height[w.size()]).value;
        auto it = actual.find(w);
        Weight got = it == actual.end() ? Weight::zero(g.algebra()) : it->second;
        if (!(expected == got)) report.mismatches.push_back({show(w), expected.to_string(), got.to_string()});
    }
    if (skipped > 0) report.notes.push_back(std::to_string(skipped) + " words of uncovered lengths not compared");
    finish(report, truncated);
    return report;
}

Report check_bijection(const Grammar& g, std::size_t max_height, const BijectionOptions& options) {
    Report report;
    report.property = "bijection";
    auto cs = build_decomposition(g);
    const Grammar& gn = cs.normalized();
    const Grammar& gb = cs.boolean_grammar();
    FromBracketsOptions decode_options{options.corrupt_from_brackets};
    MembershipChecker member(cs.brackets);

    auto ds = gn.productions().empty() ? std::vector<Derivation>{} : enumerate_derivations(gn, gn.initial(), max_height);
    std::map<Word, std::size_t> encodings;
    std::size_t longest = 0;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        const auto& d = ds[k];
        ++report.checked;
        auto name = format_derivation(gn, d);

        // D_G -> L(G_B) -> D_G
        Word separated = separated_yield(cs.separation, d);
        try {
            if (!(to_deriv(cs.separation, separated) == d))
                report.mismatches.push_back({name, name, "to_deriv returned another derivation"});
        } catch (const DecodeError& e) {
            report.mismatches.push_back({name, name, std::string("to_deriv: ") + e.what()});
        }
        auto weighted = apply_hom(cs.separation.weight_hom, separated);
        Monomial direct{yield(gn, d).front(), derivation_weight(gn, d)};
        if (!(weighted == direct))
            report.mismatches.push_back({name, direct.weight.to_string() + "." + show(direct.word),
                                         weighted.weight.to_string() + "." + show(weighted.word)});

        // D_{G_B} -> R and mD -> D_{G_B}
        Word brackets = to_brackets(gb, d);
        longest = std::max(longest, brackets.size());
        if (auto [it, fresh] = encodings.emplace(brackets, k); !fresh)
            report.mismatches.push_back({name, "injective encoding", "same encoding as " + format_derivation(gn, ds[it->second])});
        try {
            if (!(from_brackets(gb, brackets, decode_options) == d))
                report.mismatches.push_back({name, name, "from_brackets returned another derivation"});
        } catch (const DecodeError& e) {
            report.mismatches.push_back({name, name, std::string("from_brackets: ") + e.what()});
        }
        auto projected = apply_hom(cs.bracket_hom, brackets);
        if (projected.word != separated) report.mismatches.push_back({name, show(separated), show(projected.word)});
        if (!accepts(cs.automaton, brackets)) report.mismatches.push_back({name, "accepted", "rejected by the automaton"});
        if (!member(brackets)) report.mismatches.push_back({name, "in mD", "rejected by is_member"});

        // Renaming one linked bracket pair to another rule of the same nonterminal.
        std::vector<std::size_t> stack;
        std::vector<std::size_t> match(brackets.size(), 0);
        for (std::size_t i = 0; i < brackets.size(); ++i) {
            if (cs.brackets.is_opening(brackets[i])) {
                stack.push_back(i);
            } else {
                match[stack.back()] = i;
                stack.pop_back();
            }
        }
        for (std::size_t i = 0; i < brackets.size(); ++i) {
            if (!cs.brackets.is_opening(brackets[i]) || brackets[i].starts_with("[t:")) continue;
            for (std::size_t p = 0; p < gb.productions().size(); ++p) {
                const auto& rule = gb.production(p);
                for (std::size_t j = 1; j <= rule.composition.fanout(); ++j) {
                    auto open = opening_bracket(rule.id, j);
                    if (open == brackets[i]) continue;
                    Word mutated = brackets;
                    mutated[i] = open;
                    mutated[match[i]] = closing_bracket(rule.id, j);
                    bool in_language = accepts(cs.automaton, mutated) && member(mutated);
                    bool decoded = true;
                    try {
                        auto back = from_brackets(gb, mutated, decode_options);
                        decoded = options.corrupt_from_brackets || to_brackets(gb, back) == mutated;
                    } catch (const DecodeError&) {
                        decoded = false;
                    }
                    if (decoded != in_language)
                        report.mismatches.push_back({show(mutated), in_language ? "decodable" : "rejected",
                                                     decoded ? "decoded" : "rejected"});
                }
            }
        }
    }

    std::size_t bound = options.bracket_bound.value_or(longest);
    ProductionCost cost = [&](std::size_t p) {
        const auto& c = gb.production(p).composition;
        return 2 * c.fanout() + 2 * c.terminal_count();
    };
    std::set<Word> encoded;
    if (!gb.productions().empty()) {
        CostEnumerator enumerator(gb, cost);
        for (const auto& [d, c] : enumerator.from(gb.initial(), bound)) encoded.insert(to_brackets(gb, d));
    }
    auto intersection = generator_intersection(cs, bound);
    for (const auto& u : intersection)
        if (!encoded.contains(u)) report.mismatches.push_back({show(u), "not in R and mD", "accepted and in mD"});
    for (const auto& u : encoded)
        if (!intersection.contains(u)) report.mismatches.push_back({show(u), "accepted and in mD", "missing"});

    report.parameters = {{"max_height", std::to_string(max_height)},
                         {"bracket_bound", std::to_string(bound)},
                         {"derivations", std::to_string(ds.size())},
                         {"bracket_words", std::to_string(intersection.size())}};
    finish(report, false);
    return report;
}

std::set<Word> dyck_words(const BracketAlphabet& ba, std::size_t max_length) {
    // exact[n]: Dyck words of length exactly 2n.
    std::vector<std::vector<Word>> exact{{Word{}}};
    for (std::size_t n = 1; 2 * n <= max_length; ++n) {
        std::vector<Word> words;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t s = 0; s < ba.opening().size(); ++s)
                for (const auto& inner : exact[a])
                    for (const auto& rest : exact[n - 1 - a]) {
                        Word w{ba.opening()[s]};
                        w.insert(w.end(), inner.begin(), inner.end());
                        w.push_back(ba.closing()[s]);
                        w.insert(w.end(), rest.begin(), rest.end());
                        words.push_back(std::move(w));
                    }
        exact.push_back(std::move(words));
    }
    std::set<Word> out;
    for (auto& words : exact)
        for (auto& w : words) out.insert(std::move(w));
    return out;
}

Report check_dyck_oracle(const BracketAlphabet& ba, std::size_t r, std::size_t max_length) {
    Report report;
    report.property = "dyck-oracle";
    report.parameters = {{"rank", std::to_string(r)}, {"max_length", std::to_string(max_length)}};

    std::set<Word> accepted;
    MembershipChecker member(ba);
    for (const auto& w : dyck_words(ba, max_length))
        if (member(w)) accepted.insert(w);

    auto pg = partition_grammar(ba, r);
    std::set<Word> generated;
    for (const auto& w : bounded_language(pg.grammar, max_length)) {
        Word relabelled;
        for (const auto& s : w) relabelled.push_back(pg.relabel.at(s));
        generated.insert(std::move(relabelled));
    }
    for (const auto& w : accepted)
        if (!generated.contains(w)) report.mismatches.push_back({show(w), "not generated", "accepted by is_member"});
    for (const auto& w : generated)
        if (!accepted.contains(w)) report.mismatches.push_back({show(w), "accepted by is_member", "rejected"});
    std::set<Word> all = accepted;
    all.insert(generated.begin(), generated.end());
    report.checked = all.size();
    report.parameters.emplace_back("accepted", std::to_string(accepted.size()));
    report.parameters.emplace_back("generated", std::to_string(generated.size()));
    finish(report, false);
    return report;
}

std::string report_json(const Report& report) {
    nlohmann::ordered_json j;
    j["property"] = report.property;
    j["parameters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.parameters) j["parameters"][k] = v;
    j["checked"] = report.checked;
    j["mismatches"] = nlohmann::ordered_json::array();
    for (const auto& m : report.mismatches)
        j["mismatches"].push_back({{"input", m.input}, {"expected", m.expected}, {"actual", m.actual}});
    j["status"] = status_name(report.status);
    j["notes"] = report.notes;
    return j.dump(2);
}

std::string format_report(const Report& report) {
    std::ostringstream out;
    out << report.property << ": " << status_name(report.status) << " (" << report.checked << " checked";
    for (const auto& [k, v] : report.parameters) out << ", " << k << "=" << v;
    out << ")\n";
    for (const auto& note : report.notes) out << "  note: " << note << "\n";
    const std::size_t shown = std::min<std::size_t>(report.mismatches.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& m = report.mismatches[i];
        out << "  mismatch: " << m.input << "  expected " << m.expected << "  got " << m.actual << "\n";
    }
    if (report.mismatches.size() > shown)
        out << "  ... " << report.mismatches.size() - shown << " more mismatches\n";
    return out.str();
}

} // namespace wmcfg
