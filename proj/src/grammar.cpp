#include "wmcfg/grammar.hpp"

#include "wmcfg/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace wmcfg {

Word parse_word(std::string_view text) {
    Word word;
    std::istringstream in{std::string(text)};
    for (std::string token; in >> token;) word.push_back(token);
    return word;
}

std::string format_word(const Word& word) {
    std::string out;
    for (const auto& s : word) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Composition

Composition::Composition(std::vector<std::size_t> argument_sorts, std::vector<std::vector<Token>> components)
    : argument_sorts_(std::move(argument_sorts)), components_(std::move(components)) {
    for (const auto& component : components_)
        for (const auto& token : component) {
            if (const auto* v = std::get_if<Variable>(&token)) {
                if (v->argument >= argument_sorts_.size())
                    throw ValidationError("variable " + format_token(token) + " refers to argument " +
                                          std::to_string(v->argument + 1) + " of a rank-" +
                                          std::to_string(argument_sorts_.size()) + " composition");
                if (v->component >= argument_sorts_[v->argument])
                    throw ValidationError("variable " + format_token(token) + " exceeds sort " +
                                          std::to_string(argument_sorts_[v->argument]) + " of argument " +
                                          std::to_string(v->argument + 1));
            } else if (std::get<Symbol>(token).empty()) {
                throw ValidationError("empty terminal symbol");
            }
        }
}

namespace {

std::map<Variable, std::size_t> variable_counts(const std::vector<std::vector<Token>>& components) {
    std::map<Variable, std::size_t> counts;
    for (const auto& component : components)
        for (const auto& token : component)
            if (const auto* v = std::get_if<Variable>(&token)) ++counts[*v];
    return counts;
}

} // namespace

bool Composition::is_linear() const {
    auto counts = variable_counts(components_);
    return std::all_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second <= 1; });
}

bool Composition::is_non_deleting() const {
    auto counts = variable_counts(components_);
    for (std::size_t i = 0; i < argument_sorts_.size(); ++i)
        for (std::size_t j = 0; j < argument_sorts_[i]; ++j)
            if (!counts.contains(Variable{i, j})) return false;
    return true;
}

bool Composition::is_terminal_free() const { return terminal_count() == 0; }

std::size_t Composition::terminal_count() const {
    std::size_t n = 0;
    for (const auto& component : components_)
        n += static_cast<std::size_t>(std::count_if(component.begin(), component.end(),
                                                    [](const Token& t) { return !is_variable(t); }));
    return n;
}

Tuple Composition::apply(std::span<const Tuple> args) const {
    if (args.size() != rank())
        throw UsageError("composition of rank " + std::to_string(rank()) + " applied to " +
                         std::to_string(args.size()) + " arguments");
    for (std::size_t i = 0; i < args.size(); ++i)
        if (args[i].size() != argument_sorts_[i])
            throw UsageError("argument " + std::to_string(i + 1) + " has " + std::to_string(args[i].size()) +
                             " components, expected " + std::to_string(argument_sorts_[i]));
    Tuple result(components_.size());
    for (std::size_t c = 0; c < components_.size(); ++c)
        for (const auto& token : components_[c]) {
            if (const auto* v = std::get_if<Variable>(&token)) {
                const Word& part = args[v->argument][v->component];
                result[c].insert(result[c].end(), part.begin(), part.end());
            } else {
                result[c].push_back(std::get<Symbol>(token));
            }
        }
    return result;
}

std::string format_token(const Token& t) {
    if (const auto* v = std::get_if<Variable>(&t))
        return "x" + std::to_string(v->argument + 1) + "." + std::to_string(v->component + 1);
    return "'" + std::get<Symbol>(t) + "'";
}

std::string Composition::to_string() const {
    if (components_.empty()) return "[!]";
    std::string out = "[";
    for (std::size_t c = 0; c < components_.size(); ++c) {
        if (c > 0) out += "; ";
        for (std::size_t k = 0; k < components_[c].size(); ++k) {
            if (k > 0) out += ' ';
            out += format_token(components_[c][k]);
        }
    }
    return out + "]";
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

bool valid_symbol_name(const std::string& s) {
    return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '\'';
    });
}

} // namespace

Grammar::Grammar(AlgebraPtr algebra, std::map<std::string, std::size_t> nonterminals, std::set<Symbol> terminals,
                 std::string initial, std::vector<Production> productions, std::vector<Weight> weights)
    : algebra_(std::move(algebra)), sorts_(std::move(nonterminals)), terminals_(std::move(terminals)),
      initial_(std::move(initial)), productions_(std::move(productions)), weights_(std::move(weights)) {
    if (!algebra_) throw UsageError("grammar without algebra");
    for (const auto& t : terminals_)
        if (!valid_symbol_name(t)) throw ValidationError("invalid terminal name '" + t + "'");
    for (const auto& [name, sort] : sorts_) {
        (void)sort;
        if (!valid_symbol_name(name)) throw ValidationError("invalid nonterminal name '" + name + "'");
        if (terminals_.contains(name))
            throw ValidationError("'" + name + "' is both a terminal and a nonterminal");
    }
    auto initial_it = sorts_.find(initial_);
    if (initial_it == sorts_.end()) throw ValidationError("initial nonterminal '" + initial_ + "' is undeclared");
    if (initial_it->second != 1)
        throw ValidationError("initial nonterminal '" + initial_ + "' has sort " +
                              std::to_string(initial_it->second) + ", expected 1");
    if (weights_.size() != productions_.size())
        throw UsageError("weight count does not match production count");

    for (std::size_t p = 0; p < productions_.size(); ++p) {
        const auto& rule = productions_[p];
        const std::string where = "rule " + rule.id + ": ";
        if (rule.id.empty()) throw ValidationError("production without id");
        if (!by_id_.emplace(rule.id, p).second) throw ValidationError("duplicate rule id '" + rule.id + "'");
        auto lhs = sorts_.find(rule.lhs);
        if (lhs == sorts_.end()) throw ValidationError(where + "unknown nonterminal '" + rule.lhs + "'");
        if (rule.composition.fanout() != lhs->second)
            throw ValidationError(where + "sort mismatch: composition has fan-out " +
                                  std::to_string(rule.composition.fanout()) + " but " + rule.lhs + " has sort " +
                                  std::to_string(lhs->second));
        if (rule.composition.rank() != rule.rhs.size())
            throw ValidationError(where + "composition rank differs from right-hand side length");
        for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
            auto child = sorts_.find(rule.rhs[i]);
            if (child == sorts_.end()) throw ValidationError(where + "unknown nonterminal '" + rule.rhs[i] + "'");
            if (rule.composition.argument_sorts()[i] != child->second)
                throw ValidationError(where + "sort mismatch for argument " + std::to_string(i + 1) + " (" +
                                      rule.rhs[i] + ")");
        }
        if (!rule.composition.is_linear()) throw ValidationError(where + "composition is not linear");
        for (const auto& component : rule.composition.components())
            for (const auto& token : component)
                if (const auto* s = std::get_if<Symbol>(&token); s && !terminals_.contains(*s))
                    throw ValidationError(where + "undeclared terminal '" + *s + "'");
        if (weights_[p].algebra() != algebra_)
            throw ValidationError(where + "weight belongs to algebra " + weights_[p].algebra()->name());
        if (weights_[p].is_zero()) throw ValidationError(where + "weight must not be zero");

        by_lhs_[rule.lhs].push_back(p);
        fanout_ = std::max(fanout_, rule.composition.fanout());
        rank_ = std::max(rank_, rule.composition.rank());
    }
}

std::size_t Grammar::sort(const std::string& nonterminal) const {
    auto it = sorts_.find(nonterminal);
    if (it == sorts_.end()) throw UsageError("unknown nonterminal '" + nonterminal + "'");
    return it->second;
}

const std::vector<std::size_t>& Grammar::productions_of(const std::string& nonterminal) const {
    static const std::vector<std::size_t> none;
    auto it = by_lhs_.find(nonterminal);
    return it == by_lhs_.end() ? none : it->second;
}

std::optional<std::size_t> Grammar::find_production(std::string_view id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

bool Grammar::is_non_deleting() const {
    return std::all_of(productions_.begin(), productions_.end(),
                       [](const Production& p) { return p.composition.is_non_deleting(); });
}

bool Grammar::is_unweighted() const {
    return std::all_of(weights_.begin(), weights_.end(), [](const Weight& w) { return w.is_one(); });
}

Grammar make_unweighted(std::map<std::string, std::size_t> nonterminals, std::set<Symbol> terminals,
                        std::string initial, std::vector<Production> productions) {
    auto boolean = algebra_by_name("boolean");
    std::vector<Weight> weights(productions.size(), Weight::one(boolean));
    return Grammar(boolean, std::move(nonterminals), std::move(terminals), std::move(initial),
                   std::move(productions), std::move(weights));
}

// ---------------------------------------------------------------------------
// Derivations

std::size_t Derivation::height() const {
    std::size_t h = 0;
    for (const auto& c : children) h = std::max(h, c.height());
    return h + 1;
}

std::size_t Derivation::size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
}

void check_well_sorted(const Grammar& g, const Derivation& d, const std::string& root) {
    if (d.production >= g.productions().size())
        throw ValidationError("derivation refers to unknown production #" + std::to_string(d.production));
    const auto& p = g.production(d.production);
    if (p.lhs != root)
        throw ValidationError("ill-sorted derivation: " + p.id + " derives " + p.lhs + ", expected " + root);
    if (d.children.size() != p.rhs.size())
        throw ValidationError("ill-sorted derivation: " + p.id + " needs " + std::to_string(p.rhs.size()) +
                              " children, got " + std::to_string(d.children.size()));
    for (std::size_t i = 0; i < d.children.size(); ++i) check_well_sorted(g, d.children[i], p.rhs[i]);
}

namespace {

void listing_rec(const Grammar& g, const Derivation& d, Position& pos,
                 std::vector<std::pair<Position, std::string>>& out) {
    out.emplace_back(pos, g.production(d.production).id);
    for (std::size_t i = 0; i < d.children.size(); ++i) {
        pos.push_back(i + 1);
        listing_rec(g, d.children[i], pos, out);
        pos.pop_back();
    }
}

Tuple yield_rec(const Grammar& g, const Derivation& d) {
    std::vector<Tuple> args;
    args.reserve(d.children.size());
    for (const auto& c : d.children) args.push_back(yield_rec(g, c));
    return g.production(d.production).composition.apply(args);
}

} // namespace

std::vector<std::pair<Position, std::string>> derivation_listing(const Grammar& g, const Derivation& d) {
    std::vector<std::pair<Position, std::string>> out;
    Position pos;
    listing_rec(g, d, pos, out);
    return out;
}

Derivation derivation_from_listing(const Grammar& g,
                                   const std::vector<std::pair<Position, std::string>>& listing) {
    std::map<Position, std::string> at;
    for (const auto& [pos, id] : listing)
        if (!at.emplace(pos, id).second)
            throw ValidationError("position " + format_position(pos) + " listed twice");
    std::size_t used = 0;
    std::function<Derivation(const Position&)> build = [&](const Position& pos) {
        auto it = at.find(pos);
        if (it == at.end()) throw ValidationError("missing position " + format_position(pos));
        auto index = g.find_production(it->second);
        if (!index) throw ValidationError("unknown rule '" + it->second + "'");
        ++used;
        Derivation d{*index, {}};
        for (std::size_t i = 0; i < g.production(*index).rhs.size(); ++i) {
            Position child = pos;
            child.push_back(i + 1);
            d.children.push_back(build(child));
        }
        return d;
    };
    Derivation d = build({});
    if (used != at.size()) throw ValidationError("listing contains positions outside the tree");
    return d;
}

std::string format_position(const Position& p) {
    if (p.empty()) return "ε";
    bool single_digits = std::all_of(p.begin(), p.end(), [](std::size_t i) { return i >= 1 && i <= 9; });
    std::string out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (!single_digits && k > 0) out += '.';
        out += std::to_string(p[k]);
    }
    return out;
}

Position parse_position(std::string_view text) {
    if (text.empty() || text == "ε" || text == "e" || text == "-") return {};
    Position p;
    auto bad = [&] { return ParseError("malformed tree position '" + std::string(text) + "'"); };
    if (text.find('.') != std::string_view::npos) {
        std::string part;
        std::istringstream in{std::string(text)};
        while (std::getline(in, part, '.')) {
            if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return std::isdigit(c); }))
                throw bad();
            p.push_back(std::stoul(part));
        }
    } else {
        for (char c : text) {
            if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0') throw bad();
            p.push_back(static_cast<std::size_t>(c - '0'));
        }
    }
    for (auto i : p)
        if (i == 0) throw bad();
    return p;
}

std::string format_derivation(const Grammar& g, const Derivation& d) {
    std::string out = g.production(d.production).id;
    if (!d.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < d.children.size(); ++i) {
            if (i > 0) out += ", ";
            out += format_derivation(g, d.children[i]);
        }
        out += ')';
    }
    return out;
}

Derivation parse_derivation(const Grammar& g, std::string_view text) {
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    std::function<Derivation()> node = [&]() -> Derivation {
        skip();
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && text[pos] != ',' &&
               !std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        std::string id(text.substr(start, pos - start));
        if (id.empty()) throw ParseError("expected a rule id at offset " + std::to_string(start));
        auto index = g.find_production(id);
        if (!index) throw ParseError("unknown rule '" + id + "'");
        Derivation d{*index, {}};
        skip();
        if (pos < text.size() && text[pos] == '(') {
            ++pos;
            skip();
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
                return d;
            }
            while (true) {
                d.children.push_back(node());
                skip();
                if (pos < text.size() && text[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (pos < text.size() && text[pos] == ')') {
                    ++pos;
                    break;
                }
                throw ParseError("expected ',' or ')' at offset " + std::to_string(pos));
            }
        }
        return d;
    };
    Derivation d = node();
    skip();
    if (pos != text.size()) throw ParseError("trailing text after derivation at offset " + std::to_string(pos));
    return d;
}

void canonical_sort(const Grammar& g, std::vector<Derivation>& ds) {
    std::vector<std::pair<std::vector<std::pair<Position, std::string>>, std::size_t>> keyed;
    keyed.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) keyed.emplace_back(derivation_listing(g, ds[i]), i);
    std::sort(keyed.begin(), keyed.end());
    std::vector<Derivation> sorted;
    sorted.reserve(ds.size());
    for (const auto& [key, i] : keyed) sorted.push_back(std::move(ds[i]));
    ds = std::move(sorted);
}

Tuple yield(const Grammar& g, const Derivation& d) {
    if (d.production >= g.productions().size())
        throw ValidationError("derivation refers to unknown production #" + std::to_string(d.production));
    check_well_sorted(g, d, g.production(d.production).lhs);
    return yield_rec(g, d);
}

Weight derivation_weight(const Grammar& g, const Derivation& d) {
    if (d.production >= g.productions().size())
        throw ValidationError("derivation refers to unknown production #" + std::to_string(d.production));
    check_well_sorted(g, d, g.production(d.production).lhs);
    Weight total = Weight::one(g.algebra());
    std::function<void(const Derivation&)> visit = [&](const Derivation& node) {
        total = times(total, g.weight(node.production));
        for (const auto& c : node.children) visit(c);
    };
    visit(d);
    return total;
}

} // namespace wmcfg
