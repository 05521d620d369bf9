#include "wmcfg/transform.hpp"

#include "wmcfg/error.hpp"

#include <algorithm>
#include <deque>

namespace wmcfg {

namespace {

std::set<std::string> productive_nonterminals(const Grammar& g) {
    std::set<std::string> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            if (productive.contains(p.lhs)) continue;
            if (std::all_of(p.rhs.begin(), p.rhs.end(), [&](const auto& b) { return productive.contains(b); })) {
                productive.insert(p.lhs);
                changed = true;
            }
        }
    }
    return productive;
}

std::set<std::string> reachable_nonterminals(const Grammar& g) {
    std::set<std::string> seen{g.initial()};
    std::deque<std::string> work{g.initial()};
    while (!work.empty()) {
        auto a = work.front();
        work.pop_front();
        for (std::size_t p : g.productions_of(a))
            for (const auto& b : g.production(p).rhs)
                if (seen.insert(b).second) work.push_back(b);
    }
    return seen;
}

// Keeps productions whose nonterminals all satisfy `keep`.
TransformResult restrict_grammar(const Grammar& g, const std::set<std::string>& keep,
                                 const std::vector<std::size_t>& origin) {
    std::map<std::string, std::size_t> sorts;
    for (const auto& [nt, sort] : g.nonterminals())
        if (keep.contains(nt) || nt == g.initial()) sorts.emplace(nt, sort);
    std::vector<Production> productions;
    std::vector<Weight> weights;
    std::vector<std::size_t> source;
    for (std::size_t p = 0; p < g.productions().size(); ++p) {
        const auto& rule = g.production(p);
        if (!keep.contains(rule.lhs)) continue;
        if (!std::all_of(rule.rhs.begin(), rule.rhs.end(), [&](const auto& b) { return keep.contains(b); })) continue;
        productions.push_back(rule);
        weights.push_back(g.weight(p));
        source.push_back(origin.empty() ? p : origin[p]);
    }
    return {Grammar(g.algebra(), std::move(sorts), g.terminals(), g.initial(), std::move(productions),
                    std::move(weights)),
            std::move(source)};
}

std::string psi_name(const std::string& base, const std::set<std::size_t>& psi) {
    if (psi.empty()) return base;
    std::string out = base + "{";
    bool first = true;
    for (std::size_t i : psi) {
        out += (first ? "" : ",") + std::to_string(i + 1);
        first = false;
    }
    return out + "}";
}

} // namespace

PruneResult prune_unproductive(const Grammar& g) {
    auto productive = productive_nonterminals(g);
    bool empty = !productive.contains(g.initial());
    if (empty) productive.clear();
    return {restrict_grammar(g, productive, {}).grammar, empty};
}

TransformResult to_nondeleting(const Grammar& g) {
    using Key = std::pair<std::string, std::set<std::size_t>>;
    std::map<Key, std::string> names;
    std::map<std::string, std::size_t> sorts;
    std::deque<Key> work;
    auto request = [&](const std::string& nt, const std::set<std::size_t>& psi) {
        Key key{nt, psi};
        auto it = names.find(key);
        if (it != names.end()) return it->second;
        auto name = psi_name(nt, psi);
        if (!psi.empty() && g.has_nonterminal(name))
            throw UsageError("nonterminal name " + name + " clashes with the non-deleting normal form");
        names.emplace(key, name);
        sorts.emplace(name, g.sort(nt) - psi.size());
        work.push_back(key);
        return name;
    };
    request(g.initial(), {});

    std::vector<Production> productions;
    std::vector<Weight> weights;
    std::vector<std::size_t> source;
    while (!work.empty()) {
        auto [nt, psi] = work.front();
        work.pop_front();
        auto lhs = names.at({nt, psi});
        for (std::size_t p : g.productions_of(nt)) {
            const auto& rule = g.production(p);
            const auto& comps = rule.composition.components();
            std::vector<std::vector<Token>> kept;
            for (std::size_t j = 0; j < comps.size(); ++j)
                if (!psi.contains(j)) kept.push_back(comps[j]);
            // Components of each child that no kept component mentions.
            std::vector<std::set<std::size_t>> child_psi(rule.rhs.size());
            std::vector<std::vector<bool>> used(rule.rhs.size());
            for (std::size_t i = 0; i < rule.rhs.size(); ++i) used[i].assign(g.sort(rule.rhs[i]), false);
            for (const auto& comp : kept)
                for (const auto& tok : comp)
                    if (const auto* v = std::get_if<Variable>(&tok)) used[v->argument][v->component] = true;
            std::vector<std::vector<std::size_t>> renumber(rule.rhs.size());
            std::vector<std::size_t> arg_sorts;
            std::vector<std::string> rhs;
            for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
                std::size_t next = 0;
                renumber[i].assign(used[i].size(), 0);
                for (std::size_t j = 0; j < used[i].size(); ++j) {
                    if (used[i][j])
                        renumber[i][j] = next++;
                    else
                        child_psi[i].insert(j);
                }
                arg_sorts.push_back(next);
                rhs.push_back(request(rule.rhs[i], child_psi[i]));
            }
            for (auto& comp : kept)
                for (auto& tok : comp)
                    if (auto* v = std::get_if<Variable>(&tok)) v->component = renumber[v->argument][v->component];
            std::string id = psi.empty() ? rule.id : psi_name(rule.id, psi);
            productions.push_back(Production{id, lhs, Composition(arg_sorts, std::move(kept)), std::move(rhs)});
            weights.push_back(g.weight(p));
            source.push_back(p);
        }
    }
    Grammar raw(g.algebra(), std::move(sorts), g.terminals(), names.at({g.initial(), {}}), std::move(productions),
                std::move(weights));
    auto productive = productive_nonterminals(raw);
    auto pruned = restrict_grammar(raw, productive, source);
    auto reachable = reachable_nonterminals(pruned.grammar);
    return restrict_grammar(pruned.grammar, reachable, pruned.source_production);
}

TransformResult make_rhs_distinct(const Grammar& g) {
    std::vector<Production> productions;
    std::vector<Weight> weights;
    std::vector<std::size_t> source;
    std::vector<std::pair<std::string, std::size_t>> copies;
    std::set<std::pair<std::string, std::size_t>> requested;
    auto copy_name = [](const std::string& nt, std::size_t n) { return nt + "#" + std::to_string(n); };

    for (std::size_t p = 0; p < g.productions().size(); ++p) {
        Production rule = g.production(p);
        std::map<std::string, std::size_t> seen;
        for (auto& b : rule.rhs) {
            std::size_t n = ++seen[b];
            if (n == 1) continue;
            if (requested.insert({b, n}).second) copies.emplace_back(b, n);
            b = copy_name(b, n);
        }
        productions.push_back(std::move(rule));
        weights.push_back(g.weight(p));
        source.push_back(p);
    }
    auto sorts = g.nonterminals();
    for (const auto& [nt, n] : copies) {
        auto name = copy_name(nt, n);
        if (g.has_nonterminal(name)) throw UsageError("nonterminal name " + name + " clashes with a copy");
        sorts.emplace(name, g.sort(nt));
        for (std::size_t p : g.productions_of(nt)) {
            Production rule = productions[p];
            rule.lhs = name;
            rule.id = copy_name(rule.id, n);
            if (g.find_production(rule.id)) throw UsageError("rule id " + rule.id + " clashes with a copy");
            productions.push_back(std::move(rule));
            weights.push_back(g.weight(p));
            source.push_back(p);
        }
    }
    return {Grammar(g.algebra(), std::move(sorts), g.terminals(), g.initial(), std::move(productions),
                    std::move(weights)),
            std::move(source)};
}

Symbol marker_symbol(const std::string& rule_id, std::size_t component) {
    return rule_id + "^" + std::to_string(component);
}

SeparationResult boolean_part(const Grammar& g) {
    if (!g.is_non_deleting()) throw UsageError("weight separation needs a non-deleting grammar");
    std::map<std::string, std::size_t> sorts;
    for (const auto& [nt, sort] : g.nonterminals()) sorts.emplace(nt, std::max<std::size_t>(sort, 1));

    std::set<Symbol> markers;
    std::set<Symbol> terminals = g.terminals();
    std::map<Symbol, Monomial> table;
    auto algebra = g.algebra();
    for (const auto& t : g.terminals()) table.emplace(t, Monomial{{t}, Weight::one(algebra)});

    std::vector<Production> productions;
    for (std::size_t p = 0; p < g.productions().size(); ++p) {
        const auto& rule = g.production(p);
        std::vector<std::vector<Token>> comps = rule.composition.components();
        if (comps.empty()) comps.emplace_back();
        for (std::size_t j = 0; j < comps.size(); ++j) {
            auto marker = marker_symbol(rule.id, j + 1);
            if (g.terminals().contains(marker))
                throw UsageError("marker " + marker + " collides with a terminal of the grammar");
            if (!markers.insert(marker).second) throw UsageError("marker " + marker + " is not unique");
            comps[j].insert(comps[j].begin(), Token{marker});
            terminals.insert(marker);
            table.emplace(marker, j == 0 ? Monomial{{}, g.weight(p)} : Monomial{{}, Weight::one(algebra)});
        }
        std::vector<std::size_t> arg_sorts;
        for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
            std::size_t s = g.sort(rule.rhs[i]);
            if (s == 0) comps[0].push_back(Variable{i, 0});
            arg_sorts.push_back(std::max<std::size_t>(s, 1));
        }
        productions.push_back(Production{rule.id, rule.lhs, Composition(arg_sorts, std::move(comps)), rule.rhs});
    }
    Grammar boolean = make_unweighted(std::move(sorts), terminals, g.initial(), std::move(productions));
    WeightedHom weight_hom(algebra, terminals, g.terminals(), std::move(table));
    return {g, std::move(boolean), std::move(markers), std::move(weight_hom)};
}

Derivation to_deriv(const SeparationResult& sep, const Word& word) {
    const Grammar& gb = sep.boolean_grammar;
    std::map<Symbol, std::pair<std::size_t, std::size_t>> marker_at;
    for (std::size_t p = 0; p < gb.productions().size(); ++p)
        for (std::size_t j = 0; j < gb.production(p).composition.fanout(); ++j)
            marker_at.emplace(marker_symbol(gb.production(p).id, j + 1), std::make_pair(p, j));

    std::map<Position, std::size_t> assigned;
    std::size_t cursor = 0;
    std::function<void(const Position&, const std::string&, std::size_t)> descend =
        [&](const Position& pos, const std::string& expected, std::size_t j) {
            if (cursor >= word.size())
                throw DecodeError("word ends where a marker for " + expected + " is expected", cursor);
            auto it = marker_at.find(word[cursor]);
            if (it == marker_at.end())
                throw DecodeError("expected a marker for " + expected + ", found '" + word[cursor] + "'", cursor);
            auto [p, c] = it->second;
            const auto& rule = gb.production(p);
            if (rule.lhs != expected)
                throw DecodeError("marker " + word[cursor] + " derives " + rule.lhs + ", expected " + expected, cursor);
            if (c != j)
                throw DecodeError("marker " + word[cursor] + " opens component " + std::to_string(c + 1) +
                                      ", expected component " + std::to_string(j + 1),
                                  cursor);
            auto [at, fresh] = assigned.emplace(pos, p);
            if (!fresh && at->second != p)
                throw DecodeError("marker " + word[cursor] + " disagrees with rule " + gb.production(at->second).id +
                                      " chosen earlier at node " + format_position(pos),
                                  cursor);
            ++cursor;
            const auto& comp = rule.composition.components()[j];
            for (std::size_t t = 1; t < comp.size(); ++t) {
                if (const auto* v = std::get_if<Variable>(&comp[t])) {
                    Position child = pos;
                    child.push_back(v->argument + 1);
                    descend(child, rule.rhs[v->argument], v->component);
                } else {
                    const auto& symbol = std::get<Symbol>(comp[t]);
                    if (cursor >= word.size() || word[cursor] != symbol)
                        throw DecodeError("expected terminal '" + symbol + "'", cursor);
                    ++cursor;
                }
            }
        };
    descend({}, gb.initial(), 0);
    if (cursor != word.size()) throw DecodeError("trailing symbols after a complete derivation", cursor);

    std::function<Derivation(const Position&)> build = [&](const Position& pos) {
        Derivation d{assigned.at(pos), {}};
        for (std::size_t i = 0; i < gb.production(d.production).rhs.size(); ++i) {
            Position child = pos;
            child.push_back(i + 1);
            d.children.push_back(build(child));
        }
        return d;
    };
    return build({});
}

Word separated_yield(const SeparationResult& sep, const Derivation& d) {
    check_well_sorted(sep.source, d, sep.source.initial());
    return yield(sep.boolean_grammar, d).front();
}

} // namespace wmcfg
