#include "wmcfg/generator.hpp"

#include "wmcfg/error.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace wmcfg {

Symbol opening_bracket(const std::string& rule_id, std::size_t component) {
    return "[" + rule_id + "." + std::to_string(component);
}

Symbol closing_bracket(const std::string& rule_id, std::size_t component) {
    return "]" + rule_id + "." + std::to_string(component);
}

Symbol terminal_opening(const Symbol& terminal) { return "[t:" + terminal + ".1"; }
Symbol terminal_closing(const Symbol& terminal) { return "]t:" + terminal + ".1"; }

BracketAlphabet generator_alphabet(const Grammar& g) {
    std::vector<Symbol> opening;
    std::vector<Symbol> closing;
    std::vector<std::vector<Symbol>> cells;
    for (const auto& rule : g.productions()) {
        std::vector<Symbol> cell;
        for (std::size_t j = 1; j <= rule.composition.fanout(); ++j) {
            opening.push_back(opening_bracket(rule.id, j));
            closing.push_back(closing_bracket(rule.id, j));
            cell.push_back(opening.back());
        }
        if (!cell.empty()) cells.push_back(std::move(cell));
    }
    for (const auto& t : g.terminals()) {
        opening.push_back(terminal_opening(t));
        closing.push_back(terminal_closing(t));
        cells.push_back({opening.back()});
    }
    return BracketAlphabet(std::move(opening), std::move(closing), std::move(cells));
}

Fsa generator_automaton(const Grammar& g) {
    auto ba = generator_alphabet(g);
    std::set<Symbol> alphabet(ba.opening().begin(), ba.opening().end());
    alphabet.insert(ba.closing().begin(), ba.closing().end());

    auto item_first = [&](const std::vector<std::string>& rhs, const Token& item) {
        std::vector<Symbol> out;
        if (const auto* v = std::get_if<Variable>(&item)) {
            for (std::size_t p : g.productions_of(rhs[v->argument]))
                out.push_back(opening_bracket(g.production(p).id, v->component + 1));
        } else {
            out.push_back(terminal_opening(std::get<Symbol>(item)));
        }
        return out;
    };
    auto item_last = [&](const std::vector<std::string>& rhs, const Token& item) {
        std::vector<Symbol> out;
        if (const auto* v = std::get_if<Variable>(&item)) {
            for (std::size_t p : g.productions_of(rhs[v->argument]))
                out.push_back(closing_bracket(g.production(p).id, v->component + 1));
        } else {
            out.push_back(terminal_closing(std::get<Symbol>(item)));
        }
        return out;
    };

    std::set<std::pair<Symbol, Symbol>> follow;
    auto link = [&](const std::vector<Symbol>& from, const std::vector<Symbol>& to) {
        for (const auto& a : from)
            for (const auto& b : to) follow.emplace(a, b);
    };
    for (const auto& rule : g.productions()) {
        const auto& comps = rule.composition.components();
        for (std::size_t j = 0; j < comps.size(); ++j) {
            const auto& items = comps[j];
            std::vector<Symbol> open{opening_bracket(rule.id, j + 1)};
            std::vector<Symbol> close{closing_bracket(rule.id, j + 1)};
            if (items.empty()) {
                link(open, close);
                continue;
            }
            link(open, item_first(rule.rhs, items.front()));
            for (std::size_t t = 0; t + 1 < items.size(); ++t)
                link(item_last(rule.rhs, items[t]), item_first(rule.rhs, items[t + 1]));
            link(item_last(rule.rhs, items.back()), close);
            for (const auto& item : items)
                if (const auto* s = std::get_if<Symbol>(&item))
                    follow.emplace(terminal_opening(*s), terminal_closing(*s));
        }
    }

    std::vector<std::string> names{"start"};
    std::map<Symbol, State> state_of;
    auto symbols = ba.opening();
    symbols.insert(symbols.end(), ba.closing().begin(), ba.closing().end());
    for (const auto& s : symbols) {
        state_of.emplace(s, names.size());
        names.push_back("q" + s);
    }
    std::vector<Transition> transitions;
    std::set<State> finals;
    for (std::size_t p : g.productions_of(g.initial())) {
        const auto& id = g.production(p).id;
        transitions.push_back({0, {opening_bracket(id, 1)}, state_of.at(opening_bracket(id, 1))});
        finals.insert(state_of.at(closing_bracket(id, 1)));
    }
    for (const auto& [a, b] : follow) transitions.push_back({state_of.at(a), {b}, state_of.at(b)});
    return Fsa(std::move(names), std::move(alphabet), 0, std::move(finals), std::move(transitions));
}

WeightedHom bracket_hom(const Grammar& g) {
    auto ba = generator_alphabet(g);
    std::set<Symbol> source(ba.opening().begin(), ba.opening().end());
    source.insert(ba.closing().begin(), ba.closing().end());
    std::map<Symbol, Word> table;
    for (const auto& s : source) table.emplace(s, Word{});
    for (const auto& t : g.terminals()) table[terminal_opening(t)] = {t};
    return make_unweighted_hom(std::move(source), g.terminals(), table);
}

namespace {

Tuple encode(const Grammar& g, const Derivation& d) {
    std::vector<Tuple> children;
    for (const auto& c : d.children) children.push_back(encode(g, c));
    const auto& rule = g.production(d.production);
    Tuple out;
    const auto& comps = rule.composition.components();
    for (std::size_t j = 0; j < comps.size(); ++j) {
        Word w{opening_bracket(rule.id, j + 1)};
        for (const auto& item : comps[j]) {
            if (const auto* v = std::get_if<Variable>(&item)) {
                const auto& part = children[v->argument][v->component];
                w.insert(w.end(), part.begin(), part.end());
            } else {
                w.push_back(terminal_opening(std::get<Symbol>(item)));
                w.push_back(terminal_closing(std::get<Symbol>(item)));
            }
        }
        w.push_back(closing_bracket(rule.id, j + 1));
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace

Tuple to_brackets_tuple(const Grammar& g, const Derivation& d) {
    if (d.production >= g.productions().size()) throw ValidationError("derivation refers to an unknown production");
    check_well_sorted(g, d, g.production(d.production).lhs);
    return encode(g, d);
}

Word to_brackets(const Grammar& g, const Derivation& d) {
    check_well_sorted(g, d, g.initial());
    return encode(g, d).front();
}

// ---------------------------------------------------------------------------
// from_brackets

namespace {

struct Segment {
    std::size_t position;   // index of the opening symbol
    Symbol opening;
    std::vector<std::size_t> children;
};

struct BracketInfo {
    bool terminal = false;
    std::size_t production = 0;
    std::size_t component = 0;
    Symbol symbol;   // the terminal for terminal brackets
};

} // namespace

Derivation from_brackets(const Grammar& g, const Word& word, const FromBracketsOptions& options) {
    std::map<Symbol, BracketInfo> opening;
    std::map<Symbol, Symbol> partner;
    for (std::size_t p = 0; p < g.productions().size(); ++p)
        for (std::size_t j = 0; j < g.production(p).composition.fanout(); ++j) {
            auto o = opening_bracket(g.production(p).id, j + 1);
            opening[o] = {false, p, j, {}};
            partner[closing_bracket(g.production(p).id, j + 1)] = o;
        }
    for (const auto& t : g.terminals()) {
        opening[terminal_opening(t)] = {true, 0, 0, t};
        partner[terminal_closing(t)] = terminal_opening(t);
    }

    // Matching structure.
    std::vector<Segment> segments;
    std::vector<std::size_t> roots;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < word.size(); ++i) {
        const auto& s = word[i];
        if (opening.contains(s)) {
            std::size_t id = segments.size();
            segments.push_back({i, s, {}});
            (stack.empty() ? roots : segments[stack.back()].children).push_back(id);
            stack.push_back(id);
            continue;
        }
        auto it = partner.find(s);
        if (it == partner.end()) throw DecodeError("'" + s + "' is not a generator bracket", i);
        if (stack.empty() || segments[stack.back()].opening != it->second)
            throw DecodeError("'" + s + "' does not close the innermost open bracket", i);
        stack.pop_back();
    }
    if (!stack.empty()) throw DecodeError("unclosed bracket '" + segments[stack.back()].opening + "'", segments[stack.back()].position);
    if (roots.size() != 1) throw DecodeError("expected exactly one outermost bracket pair", roots.empty() ? 0 : segments[roots[1]].position);

    std::function<Derivation(std::size_t, const std::vector<std::size_t>&)> decode =
        [&](std::size_t p, const std::vector<std::size_t>& comps) -> Derivation {
        const auto& rule = g.production(p);
        std::size_t rank = rule.rhs.size();
        std::vector<std::vector<std::optional<std::size_t>>> child_comps(rank);
        std::vector<std::optional<std::size_t>> child_rule(rank);
        for (std::size_t i = 0; i < rank; ++i) child_comps[i].resize(g.sort(rule.rhs[i]));
        for (std::size_t j = 0; j < comps.size(); ++j) {
            const auto& seg = segments[comps[j]];
            const auto& pattern = rule.composition.components()[j];
            if (seg.children.size() != pattern.size())
                throw DecodeError("component " + std::to_string(j + 1) + " of rule " + rule.id + " has " +
                                      std::to_string(pattern.size()) + " items, found " +
                                      std::to_string(seg.children.size()),
                                  seg.position);
            for (std::size_t t = 0; t < pattern.size(); ++t) {
                const auto& child = segments[seg.children[t]];
                const auto& info = opening.at(child.opening);
                if (const auto* v = std::get_if<Variable>(&pattern[t])) {
                    if (info.terminal)
                        throw DecodeError("expected a bracket of " + rule.rhs[v->argument] + ", found terminal bracket",
                                          child.position);
                    const auto& child_rule_def = g.production(info.production);
                    if (!options.skip_consistency_check) {
                        if (child_rule_def.lhs != rule.rhs[v->argument] || info.component != v->component)
                            throw DecodeError("expected component " + std::to_string(v->component + 1) + " of " +
                                                  rule.rhs[v->argument] + ", found '" + child.opening + "'",
                                              child.position);
                        if (child_rule[v->argument] && *child_rule[v->argument] != info.production)
                            throw DecodeError("components of child " + std::to_string(v->argument + 1) + " of rule " +
                                                  rule.id + " open with brackets of different rules",
                                              child.position);
                    }
                    if (!child_rule[v->argument]) child_rule[v->argument] = info.production;
                    child_comps[v->argument][v->component] = seg.children[t];
                } else {
                    const auto& symbol = std::get<Symbol>(pattern[t]);
                    if (!info.terminal || info.symbol != symbol || !child.children.empty())
                        throw DecodeError("expected '" + terminal_opening(symbol) + " " + terminal_closing(symbol) + "'",
                                          child.position);
                }
            }
        }
        Derivation d{p, {}};
        for (std::size_t i = 0; i < rank; ++i) {
            if (!child_rule[i]) throw DecodeError("child " + std::to_string(i + 1) + " of rule " + rule.id + " is missing", segments[comps.front()].position);
            std::size_t q = *child_rule[i];
            std::vector<std::size_t> parts;
            for (std::size_t j = 0; j < g.production(q).composition.fanout(); ++j) {
                if (j >= child_comps[i].size() || !child_comps[i][j])
                    throw DecodeError("component " + std::to_string(j + 1) + " of child " + std::to_string(i + 1) +
                                          " of rule " + rule.id + " is missing",
                                      segments[comps.front()].position);
                parts.push_back(*child_comps[i][j]);
            }
            d.children.push_back(decode(q, parts));
        }
        return d;
    };

    const auto& top = segments[roots.front()];
    const auto& info = opening.at(top.opening);
    if (info.terminal || info.component != 0 || g.production(info.production).lhs != g.initial())
        throw DecodeError("the outermost bracket must open component 1 of a rule for " + g.initial(), top.position);
    if (g.production(info.production).composition.fanout() != 1)
        throw DecodeError("rule for the initial nonterminal must have fan-out 1", top.position);
    Derivation d = decode(info.production, {roots.front()});
    if (!options.skip_consistency_check && to_brackets(g, d) != word)
        throw DecodeError("decoded derivation does not re-encode to the input", 0);
    return d;
}

// ---------------------------------------------------------------------------
// Decomposition

CsDecomposition build_decomposition(const Grammar& g) {
    auto pruned = prune_unproductive(g);
    auto normal = to_nondeleting(pruned.grammar);
    auto distinct = make_rhs_distinct(normal.grammar);
    auto separation = boolean_part(distinct.grammar);
    const Grammar& gb = separation.boolean_grammar;
    auto brackets = generator_alphabet(gb);
    auto automaton = generator_automaton(gb);
    auto hom = bracket_hom(gb);
    auto projection = compose_alphabetic(separation.weight_hom, hom);
    bool empty = pruned.empty_language;
    return CsDecomposition{g,
                           empty,
                           std::move(separation),
                           std::move(brackets),
                           std::move(automaton),
                           std::move(hom),
                           std::move(projection)};
}

std::optional<std::size_t> sufficient_bracket_bound(const CsDecomposition& cs, std::size_t max_word_length) {
    const Grammar& gb = cs.boolean_grammar();
    ProductionCost cost = [&](std::size_t p) {
        const auto& c = gb.production(p).composition;
        return 2 * c.fanout() + 2 * c.terminal_count();
    };
    std::size_t bound = 0;
    for (std::size_t n = 0; n <= max_word_length; ++n) {
        auto growth = derivation_growth(cs.normalized(), n, cost);
        if (growth.unbounded) return std::nullopt;
        if (growth.any) bound = std::max(bound, growth.max_cost);
    }
    return bound;
}

namespace {

// Depth-first search through the automaton, keeping only prefixes that can
// still become Dyck words within the length bound and whose projection passes `allow`.
class BracketSearch {
public:
    BracketSearch(const CsDecomposition& cs, std::size_t max_length) : cs_(cs), max_length_(max_length), member_(cs.brackets) {
        const auto& a = cs.automaton;
        steps_.resize(a.state_count());
        for (State q = 0; q < a.state_count(); ++q)
            for (std::size_t t : a.outgoing(q)) {
                const auto& tr = a.transitions()[t];
                const auto& s = tr.label.front();
                Step step;
                step.symbol = &s;
                step.to = tr.to;
                step.bracket = static_cast<int>(cs.brackets.index(s));
                step.opening = cs.brackets.is_opening(s);
                const auto& image = cs.projection.image(s);
                step.projected = image.word.empty() ? nullptr : &image.word.front();
                steps_[q].push_back(step);
            }

        // Fewest symbols from each state to a final state.
        distance_.assign(a.state_count(), unreachable);
        std::vector<std::vector<State>> reverse(a.state_count());
        for (const auto& tr : a.transitions()) reverse[tr.to].push_back(tr.from);
        std::deque<State> queue;
        for (State f : a.finals()) {
            distance_[f] = 0;
            queue.push_back(f);
        }
        while (!queue.empty()) {
            State q = queue.front();
            queue.pop_front();
            for (State p : reverse[q])
                if (distance_[p] == unreachable) {
                    distance_[p] = distance_[q] + 1;
                    queue.push_back(p);
                }
        }

        const auto& ba = cs.brackets;
        cell_of_.resize(ba.opening().size());
        for (std::size_t c = 0; c < ba.cells().size(); ++c)
            for (const auto& s : ba.cells()[c]) cell_of_[ba.index(s)] = c;
        cell_members_.resize(ba.cells().size());
        for (std::size_t b = 0; b < cell_of_.size(); ++b) cell_members_[cell_of_[b]].push_back(b);
    }

    // allow(symbol, position): may the projection emit `symbol` at `position`?
    template <typename Allow, typename Visit>
    void run(Allow&& allow, Visit&& visit) {
        Word prefix;
        std::vector<int> stack;
        std::size_t emitted = 0;
        // Every cell of an mD word holds each of its brackets equally often;
        // each missing occurrence costs an opening and a closing symbol.
        std::vector<std::size_t> count(cell_of_.size(), 0);
        std::vector<std::size_t> deficit(cell_members_.size(), 0);
        std::size_t total_deficit = 0;
        auto recount = [&](std::size_t c) {
            std::size_t top = 0, d = 0;
            for (std::size_t b : cell_members_[c]) top = std::max(top, count[b]);
            for (std::size_t b : cell_members_[c]) d += top - count[b];
            total_deficit = total_deficit - deficit[c] + d;
            deficit[c] = d;
        };
        auto needed = [&](State q) { return std::max(stack.size() + 2 * total_deficit, distance_[q]); };

        std::function<void(State)> rec = [&](State q) {
            if (stack.empty() && total_deficit == 0 && cs_.automaton.finals().contains(q) && member_(prefix))
                visit(prefix);
            if (prefix.size() >= max_length_) return;
            for (const auto& step : steps_[q]) {
                if (distance_[step.to] == unreachable) continue;
                if (!step.opening && (stack.empty() || stack.back() != step.bracket)) continue;
                if (step.projected && !allow(*step.projected, emitted)) continue;
                prefix.push_back(*step.symbol);
                if (step.opening) {
                    stack.push_back(step.bracket);
                    ++count[step.bracket];
                    recount(cell_of_[step.bracket]);
                } else {
                    stack.pop_back();
                }
                if (step.projected) ++emitted;
                if (prefix.size() + needed(step.to) <= max_length_) rec(step.to);
                if (step.projected) --emitted;
                if (step.opening) {
                    stack.pop_back();
                    --count[step.bracket];
                    recount(cell_of_[step.bracket]);
                } else {
                    stack.push_back(step.bracket);
                }
                prefix.pop_back();
            }
        };
        rec(cs_.automaton.initial());
    }

private:
    struct Step {
        const Symbol* symbol = nullptr;
        State to = 0;
        int bracket = 0;
        bool opening = false;
        const Symbol* projected = nullptr;
    };

    static constexpr std::size_t unreachable = static_cast<std::size_t>(-1);

    const CsDecomposition& cs_;
    std::size_t max_length_;
    MembershipChecker member_;
    std::vector<std::vector<Step>> steps_;
    std::vector<std::size_t> distance_;
    std::vector<std::size_t> cell_of_;
    std::vector<std::vector<std::size_t>> cell_members_;
};

} // namespace

SemanticsResult weighted_cs_semantics(const CsDecomposition& cs, const Word& word, std::size_t max_bracket_length) {
    const auto& algebra = cs.source.algebra();
    SemanticsResult result{Weight::zero(algebra), 0, false};
    BracketSearch search(cs, max_bracket_length);
    search.run(
        [&](const Symbol& s, std::size_t position) { return position < word.size() && word[position] == s; },
        [&](const Word& u) {
            auto m = apply_hom(cs.projection, u);
            if (m.word != word) return;
            result.value = plus(result.value, m.weight);
            ++result.derivation_count;
        });
    auto bound = sufficient_bracket_bound(cs, word.size());
    result.truncated = !bound || *bound > max_bracket_length;
    return result;
}

WeightedLanguage weighted_cs_language(const CsDecomposition& cs, std::size_t max_word_length,
                                      std::size_t max_bracket_length) {
    WeightedLanguage out;
    BracketSearch search(cs, max_bracket_length);
    search.run([&](const Symbol&, std::size_t position) { return position < max_word_length; },
               [&](const Word& u) {
                   auto m = apply_hom(cs.projection, u);
                   if (m.is_zero()) return;
                   auto it = out.find(m.word);
                   if (it == out.end())
                       out.emplace(m.word, m.weight);
                   else
                       it->second = plus(it->second, m.weight);
               });
    std::erase_if(out, [](const auto& entry) { return entry.second.is_zero(); });
    return out;
}

std::set<Word> generator_intersection(const CsDecomposition& cs, std::size_t max_bracket_length) {
    std::set<Word> out;
    BracketSearch search(cs, max_bracket_length);
    search.run([](const Symbol&, std::size_t) { return true; }, [&](const Word& u) { out.insert(u); });
    return out;
}

} // namespace wmcfg
