#include "wmcfg/grammar.hpp"

#include "wmcfg/error.hpp"
#include "wmcfg/transform.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace wmcfg {

namespace {

struct Item {
    Derivation derivation;
    Tuple yield;
};

std::size_t total_length(const Tuple& t) {
    std::size_t n = 0;
    for (const auto& c : t) n += c.size();
    return n;
}

// Calls visit(children) for every choice of one entry per argument list.
template <typename T, typename F>
void cartesian(const std::vector<const std::vector<T>*>& lists, F&& visit) {
    for (const auto* list : lists)
        if (list->empty()) return;
    std::vector<std::size_t> index(lists.size(), 0);
    std::vector<const T*> chosen(lists.size());
    while (true) {
        for (std::size_t i = 0; i < lists.size(); ++i) chosen[i] = &(*lists[i])[index[i]];
        visit(chosen);
        std::size_t i = lists.size();
        while (i > 0) {
            --i;
            if (++index[i] < lists[i]->size()) break;
            index[i] = 0;
            if (i == 0) return;
        }
        if (lists.empty()) return;
    }
}

// Height-layered enumeration; `keep` filters items as they are built.
std::map<std::string, std::vector<Item>> layered_items(const Grammar& g, std::size_t max_height,
                                                       const std::function<bool(const Tuple&)>& keep) {
    std::map<std::string, std::vector<Item>> level;
    static const std::vector<Item> none;
    for (std::size_t k = 1; k <= max_height; ++k) {
        std::map<std::string, std::vector<Item>> next;
        for (std::size_t p = 0; p < g.productions().size(); ++p) {
            const auto& rule = g.production(p);
            std::vector<const std::vector<Item>*> lists;
            for (const auto& b : rule.rhs) {
                auto it = level.find(b);
                lists.push_back(it == level.end() ? &none : &it->second);
            }
            cartesian(lists, [&](const std::vector<const Item*>& chosen) {
                std::vector<Tuple> args;
                args.reserve(chosen.size());
                for (const auto* c : chosen) args.push_back(c->yield);
                Tuple y = rule.composition.apply(args);
                if (keep && !keep(y)) return;
                Derivation d{p, {}};
                for (const auto* c : chosen) d.children.push_back(c->derivation);
                next[rule.lhs].push_back({std::move(d), std::move(y)});
            });
        }
        level = std::move(next);
    }
    return level;
}

} // namespace

std::vector<Derivation> enumerate_derivations(const Grammar& g, const std::string& nonterminal,
                                              std::size_t max_height) {
    if (!g.has_nonterminal(nonterminal)) throw UsageError("unknown nonterminal " + nonterminal);
    auto items = layered_items(g, max_height, {});
    std::vector<Derivation> out;
    for (auto& item : items[nonterminal]) out.push_back(std::move(item.derivation));
    canonical_sort(g, out);
    return out;
}

std::vector<Derivation> derivations_of(const Grammar& g, const Word& word, std::size_t max_height) {
    for (const auto& s : word)
        if (!g.terminals().contains(s)) return {};
    std::function<bool(const Tuple&)> keep;
    std::set<Word> factors;
    if (g.is_non_deleting()) {
        // Every component of a subderivation survives as a factor of the final word.
        for (std::size_t i = 0; i <= word.size(); ++i)
            for (std::size_t j = i; j <= word.size(); ++j) factors.emplace(word.begin() + i, word.begin() + j);
        keep = [&](const Tuple& t) {
            if (total_length(t) > word.size()) return false;
            return std::all_of(t.begin(), t.end(), [&](const Word& c) { return factors.contains(c); });
        };
    }
    auto items = layered_items(g, max_height, keep);
    std::vector<Derivation> out;
    const Tuple target{word};
    for (auto& item : items[g.initial()])
        if (item.yield == target) out.push_back(std::move(item.derivation));
    canonical_sort(g, out);
    return out;
}

SemanticsResult weighted_semantics(const Grammar& g, const Word& word, std::size_t max_height) {
    auto ds = derivations_of(g, word, max_height);
    std::vector<Weight> weights;
    weights.reserve(ds.size());
    for (const auto& d : ds) weights.push_back(derivation_weight(g, d));
    SemanticsResult result{sum(g.algebra(), weights), ds.size(), false};

    bool in_alphabet = std::all_of(word.begin(), word.end(), [&](const Symbol& s) { return g.terminals().contains(s); });
    if (in_alphabet) {
        GrowthBound growth = g.is_non_deleting() ? derivation_growth(g, word.size())
                                                 : derivation_growth(to_nondeleting(g).grammar, word.size());
        result.truncated = growth.unbounded || (growth.any && growth.max_height > max_height);
    }
    return result;
}

// ---------------------------------------------------------------------------
// derivation_growth

namespace {

class Growth {
public:
    Growth(const Grammar& g, std::size_t limit, const ProductionCost& cost) : g_(g), limit_(limit), cost_(cost) {
        for (const auto& [nt, sort] : g.nonterminals()) exists_[nt].assign(limit + 1, false);
        compute_existence();
    }

    bool exists(const std::string& nt, std::size_t m) const { return exists_.at(nt)[m]; }

    struct Value {
        std::size_t height = 0;
        std::size_t cost = 0;
    };

    // Returns nullopt when a cycle is reachable (infinitely many derivations).
    std::optional<Value> evaluate(const std::string& nt, std::size_t m) {
        auto key = std::make_pair(nt, m);
        auto it = state_.find(key);
        if (it != state_.end()) {
            if (it->second == 1) return std::nullopt;
            return values_.at(key);
        }
        state_[key] = 1;
        Value best;
        for (std::size_t p : g_.productions_of(nt)) {
            const auto& rule = g_.production(p);
            std::size_t t = rule.composition.terminal_count();
            if (t > m) continue;
            std::size_t budget = m - t;
            std::size_t k = rule.rhs.size();
            std::size_t own = cost_ ? cost_(p) : 0;
            if (k == 0) {
                if (budget != 0) continue;
                best.height = std::max<std::size_t>(best.height, 1);
                best.cost = std::max(best.cost, own);
                continue;
            }
            // prefix[j][s]: children 0..j-1 can have total length s.
            std::vector<std::vector<bool>> prefix(k + 1, std::vector<bool>(budget + 1, false));
            std::vector<std::vector<bool>> suffix(k + 1, std::vector<bool>(budget + 1, false));
            prefix[0][0] = true;
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t s = 0; s <= budget; ++s)
                    if (prefix[j][s])
                        for (std::size_t x = 0; s + x <= budget; ++x)
                            if (exists(rule.rhs[j], x)) prefix[j + 1][s + x] = true;
            if (!prefix[k][budget]) continue;
            suffix[k][0] = true;
            for (std::size_t j = k; j-- > 0;)
                for (std::size_t s = 0; s <= budget; ++s)
                    if (suffix[j + 1][s])
                        for (std::size_t x = 0; s + x <= budget; ++x)
                            if (exists(rule.rhs[j], x)) suffix[j][s + x] = true;

            // Child lengths occurring in some complete split.
            std::vector<std::vector<std::optional<Value>>> child(k, std::vector<std::optional<Value>>(budget + 1));
            std::size_t height = 0;
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t x = 0; x <= budget; ++x) {
                    if (!exists(rule.rhs[j], x)) continue;
                    bool valid = false;
                    for (std::size_t a = 0; a + x <= budget && !valid; ++a)
                        valid = prefix[j][a] && suffix[j + 1][budget - a - x];
                    if (!valid) continue;
                    auto v = evaluate(rule.rhs[j], x);
                    if (!v) return std::nullopt;
                    child[j][x] = v;
                    height = std::max(height, v->height);
                }
            // best[s]: maximal summed cost of children 0..j-1 with total length s.
            std::vector<std::optional<std::size_t>> dp(budget + 1);
            dp[0] = 0;
            for (std::size_t j = 0; j < k; ++j) {
                std::vector<std::optional<std::size_t>> next(budget + 1);
                for (std::size_t s = 0; s <= budget; ++s) {
                    if (!dp[s]) continue;
                    for (std::size_t x = 0; s + x <= budget; ++x) {
                        if (!child[j][x]) continue;
                        std::size_t c = *dp[s] + child[j][x]->cost;
                        if (!next[s + x] || *next[s + x] < c) next[s + x] = c;
                    }
                }
                dp = std::move(next);
            }
            best.height = std::max(best.height, height + 1);
            if (dp[budget]) best.cost = std::max(best.cost, own + *dp[budget]);
        }
        state_[key] = 2;
        values_[key] = best;
        return best;
    }

private:
    void compute_existence() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& rule : g_.productions()) {
                std::size_t t = rule.composition.terminal_count();
                if (t > limit_) continue;
                std::vector<bool> reach(limit_ + 1, false);
                reach[t] = true;
                for (const auto& b : rule.rhs) {
                    std::vector<bool> next(limit_ + 1, false);
                    for (std::size_t s = 0; s <= limit_; ++s)
                        if (reach[s])
                            for (std::size_t x = 0; s + x <= limit_; ++x)
                                if (exists_[b][x]) next[s + x] = true;
                    reach = std::move(next);
                }
                auto& row = exists_[rule.lhs];
                for (std::size_t s = 0; s <= limit_; ++s)
                    if (reach[s] && !row[s]) {
                        row[s] = true;
                        changed = true;
                    }
            }
        }
    }

    const Grammar& g_;
    std::size_t limit_;
    const ProductionCost& cost_;
    std::map<std::string, std::vector<bool>> exists_;
    std::map<std::pair<std::string, std::size_t>, int> state_;
    std::map<std::pair<std::string, std::size_t>, Value> values_;
};

} // namespace

GrowthBound derivation_growth(const Grammar& g, std::size_t yield_length, const ProductionCost& cost) {
    if (!g.is_non_deleting()) throw UsageError("derivation_growth needs a non-deleting grammar");
    Growth growth(g, yield_length, cost);
    GrowthBound bound;
    bound.any = growth.exists(g.initial(), yield_length);
    if (!bound.any) return bound;
    auto v = growth.evaluate(g.initial(), yield_length);
    if (!v) {
        bound.unbounded = true;
        return bound;
    }
    bound.max_height = v->height;
    bound.max_cost = v->cost;
    return bound;
}

// ---------------------------------------------------------------------------
// bounded_tuples

namespace {

using ITuple = std::vector<std::vector<int>>;

struct Interner {
    std::map<Symbol, int> ids;
    std::vector<Symbol> names;
    int operator()(const Symbol& s) {
        auto [it, fresh] = ids.emplace(s, static_cast<int>(names.size()));
        if (fresh) names.push_back(s);
        return it->second;
    }
};

struct CompiledRule {
    std::size_t lhs;
    std::vector<std::size_t> rhs;
    std::size_t terminals;
    // token >= 0: terminal id; token < 0: variable -(1 + argument * stride + component)
    std::vector<std::vector<long>> components;
};

} // namespace

std::map<std::string, std::set<Tuple>> bounded_tuples(const Grammar& g, std::size_t max_total_length) {
    if (!g.is_non_deleting()) throw UsageError("bounded_tuples needs a non-deleting grammar");
    const std::size_t L = max_total_length;
    Interner interner;
    std::vector<std::string> nts;
    std::map<std::string, std::size_t> nt_index;
    for (const auto& [nt, sort] : g.nonterminals()) {
        nt_index[nt] = nts.size();
        nts.push_back(nt);
    }
    const long stride = static_cast<long>(g.fanout()) + 1;
    std::vector<CompiledRule> rules;
    for (const auto& p : g.productions()) {
        CompiledRule r{nt_index.at(p.lhs), {}, p.composition.terminal_count(), {}};
        for (const auto& b : p.rhs) r.rhs.push_back(nt_index.at(b));
        for (const auto& comp : p.composition.components()) {
            std::vector<long> tokens;
            for (const auto& tok : comp) {
                if (const auto* v = std::get_if<Variable>(&tok))
                    tokens.push_back(-(1 + static_cast<long>(v->argument) * stride + static_cast<long>(v->component)));
                else
                    tokens.push_back(interner(std::get<Symbol>(tok)));
            }
            r.components.push_back(std::move(tokens));
        }
        rules.push_back(std::move(r));
    }

    // table[A][n]: tuples of total length exactly n.
    std::vector<std::vector<std::set<ITuple>>> table(nts.size(), std::vector<std::set<ITuple>>(L + 1));
    // Sorted copies for iteration during a stratum.
    auto apply = [&](const CompiledRule& r, const std::vector<const ITuple*>& args) {
        ITuple out;
        out.reserve(r.components.size());
        for (const auto& comp : r.components) {
            std::vector<int> word;
            for (long tok : comp) {
                if (tok >= 0) {
                    word.push_back(static_cast<int>(tok));
                } else {
                    long code = -tok - 1;
                    const auto& part = (*args[static_cast<std::size_t>(code / stride)])[static_cast<std::size_t>(code % stride)];
                    word.insert(word.end(), part.begin(), part.end());
                }
            }
            out.push_back(std::move(word));
        }
        return out;
    };

    // Productions in which a nonterminal occurs, with its position, for the same-stratum closure.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> uses(nts.size());
    for (std::size_t p = 0; p < rules.size(); ++p)
        if (rules[p].terminals == 0)
            for (std::size_t i = 0; i < rules[p].rhs.size(); ++i) uses[rules[p].rhs[i]].emplace_back(p, i);

    for (std::size_t n = 0; n <= L; ++n) {
        std::deque<std::pair<std::size_t, ITuple>> work;
        auto add = [&](std::size_t nt, ITuple t) {
            if (table[nt][n].insert(t).second) work.emplace_back(nt, std::move(t));
        };
        // Splits where every child is strictly shorter than n.
        for (const auto& r : rules) {
            if (r.terminals > n) continue;
            std::size_t budget = n - r.terminals;
            std::size_t k = r.rhs.size();
            if (k == 0) {
                if (budget == 0) add(r.lhs, apply(r, {}));
                continue;
            }
            std::vector<const ITuple*> args(k);
            std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t left) {
                if (j == k) {
                    if (left == 0) add(r.lhs, apply(r, args));
                    return;
                }
                for (std::size_t x = 0; x <= left && x < n; ++x)
                    for (const auto& t : table[r.rhs[j]][x]) {
                        args[j] = &t;
                        rec(j + 1, left - x);
                    }
            };
            rec(0, budget);
        }
        // One child of length n, all others of length zero.
        while (!work.empty()) {
            auto [nt, tuple] = std::move(work.front());
            work.pop_front();
            for (auto [p, i] : uses[nt]) {
                const auto& r = rules[p];
                std::vector<const ITuple*> args(r.rhs.size());
                args[i] = &tuple;
                std::vector<ITuple> produced;
                std::function<void(std::size_t)> rec = [&](std::size_t j) {
                    if (j == r.rhs.size()) {
                        produced.push_back(apply(r, args));
                        return;
                    }
                    if (j == i) {
                        rec(j + 1);
                        return;
                    }
                    for (const auto& t : table[r.rhs[j]][0]) {
                        args[j] = &t;
                        rec(j + 1);
                    }
                };
                rec(0);
                for (auto& t : produced) add(r.lhs, std::move(t));
            }
        }
    }

    std::map<std::string, std::set<Tuple>> out;
    for (std::size_t a = 0; a < nts.size(); ++a) {
        auto& target = out[nts[a]];
        for (const auto& stratum : table[a])
            for (const auto& t : stratum) {
                Tuple converted;
                for (const auto& comp : t) {
                    Word w;
                    for (int s : comp) w.push_back(interner.names[static_cast<std::size_t>(s)]);
                    converted.push_back(std::move(w));
                }
                target.insert(std::move(converted));
            }
    }
    return out;
}

std::set<Word> bounded_language(const Grammar& g, std::size_t max_length) {
    auto tuples = bounded_tuples(g, max_length);
    std::set<Word> out;
    for (const auto& t : tuples[g.initial()]) out.insert(t.front());
    return out;
}

} // namespace wmcfg
