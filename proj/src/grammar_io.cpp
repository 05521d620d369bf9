#include "wmcfg/grammar.hpp"

#include "wmcfg/error.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wmcfg {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

struct RawRule {
    std::size_t line = 0;
    std::string id;
    std::string lhs;
    std::vector<std::vector<Token>> components;
    std::vector<std::string> rhs;
    std::string weight;   // empty: one
};

std::vector<Token> parse_component(std::string_view text, std::size_t line) {
    std::vector<Token> tokens;
    std::size_t pos = 0;
    while (true) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) break;
        if (text[pos] == '\'') {
            auto close = text.find('\'', pos + 1);
            if (close == std::string_view::npos) throw ParseError("unterminated terminal quote", line);
            std::string symbol(text.substr(pos + 1, close - pos - 1));
            if (symbol.empty()) throw ParseError("empty terminal ''", line);
            tokens.emplace_back(std::move(symbol));
            pos = close + 1;
            continue;
        }
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string word(text.substr(start, pos - start));
        auto dot = word.find('.');
        auto digits = [](std::string_view s) {
            return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(c); });
        };
        if (word.size() < 4 || word[0] != 'x' || dot == std::string::npos ||
            !digits(std::string_view(word).substr(1, dot - 1)) || !digits(std::string_view(word).substr(dot + 1)))
            throw ParseError("expected 'terminal' or x<i>.<j>, got '" + word + "'", line);
        auto i = std::stoul(word.substr(1, dot - 1));
        auto j = std::stoul(word.substr(dot + 1));
        if (i == 0 || j == 0) throw ParseError("variable indices start at 1: '" + word + "'", line);
        tokens.emplace_back(Variable{i - 1, j - 1});
    }
    return tokens;
}

RawRule parse_rule(std::string_view text, std::size_t line) {
    RawRule rule;
    rule.line = line;
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("rule needs '<id>:'", line);
    rule.id = trim(text.substr(0, colon));
    if (rule.id.empty()) throw ParseError("rule id is empty", line);
    text.remove_prefix(colon + 1);

    auto arrow = text.find("->");
    if (arrow == std::string_view::npos) throw ParseError("rule needs '->'", line);
    rule.lhs = trim(text.substr(0, arrow));
    if (rule.lhs.empty()) throw ParseError("rule has no left-hand side", line);
    text.remove_prefix(arrow + 2);

    auto open = text.find('[');
    if (open == std::string_view::npos || !trim(text.substr(0, open)).empty())
        throw ParseError("expected '[' after '->'", line);
    // Find the closing bracket, skipping quoted terminals.
    std::size_t pos = open + 1;
    std::vector<std::string_view> parts;
    std::size_t part_start = pos;
    bool closed = false;
    while (pos < text.size()) {
        char c = text[pos];
        if (c == '\'') {
            auto q = text.find('\'', pos + 1);
            if (q == std::string_view::npos) throw ParseError("unterminated terminal quote", line);
            pos = q + 1;
            continue;
        }
        if (c == ';' || c == ']') {
            parts.push_back(text.substr(part_start, pos - part_start));
            part_start = pos + 1;
            if (c == ']') {
                closed = true;
                break;
            }
        }
        ++pos;
    }
    if (!closed) throw ParseError("missing ']'", line);
    text.remove_prefix(pos + 1);
    if (parts.size() == 1 && trim(parts[0]) == "!") {
        // fan-out 0
    } else {
        for (auto part : parts) rule.components.push_back(parse_component(part, line));
    }

    auto lparen = text.find('(');
    if (lparen == std::string_view::npos || !trim(text.substr(0, lparen)).empty())
        throw ParseError("expected '(' with the right-hand side", line);
    auto rparen = text.find(')', lparen);
    if (rparen == std::string_view::npos) throw ParseError("missing ')'", line);
    std::string_view args = text.substr(lparen + 1, rparen - lparen - 1);
    if (!trim(args).empty()) {
        int depth = 0;
        std::size_t start = 0;
        for (std::size_t k = 0; k <= args.size(); ++k) {
            if (k < args.size() && args[k] == '{') ++depth;
            if (k < args.size() && args[k] == '}') --depth;
            if (k == args.size() || (args[k] == ',' && depth == 0)) {
                auto name = trim(args.substr(start, k - start));
                if (name.empty()) throw ParseError("empty nonterminal in right-hand side", line);
                rule.rhs.push_back(name);
                start = k + 1;
            }
        }
    }
    text.remove_prefix(rparen + 1);

    auto rest = trim(text);
    if (!rest.empty()) {
        if (rest[0] != '@') throw ParseError("unexpected text '" + rest + "'", line);
        rule.weight = trim(std::string_view(rest).substr(1));
        if (rule.weight.empty()) throw ParseError("missing weight after '@'", line);
    }
    return rule;
}

} // namespace

AlgebraResolver default_algebra_resolver(std::string base_dir) {
    return [base_dir = std::move(base_dir)](std::string_view name) -> AlgebraPtr {
        constexpr std::string_view prefix = "lattice:";
        if (name.starts_with(prefix)) {
            std::filesystem::path path(std::string(name.substr(prefix.size())));
            if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
            std::ifstream in(path);
            if (!in) throw UsageError("cannot read lattice file " + path.string());
            std::stringstream buffer;
            buffer << in.rdbuf();
            return parse_lattice(buffer.str());
        }
        return algebra_by_name(name);
    };
}

Grammar parse_grammar(std::string_view text, const AlgebraResolver& resolver) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;

    AlgebraPtr algebra;
    std::string start;
    std::set<Symbol> terminals;
    std::map<std::string, std::size_t> declared;
    std::vector<RawRule> rules;

    while (std::getline(in, line)) {
        ++line_no;
        auto content = trim(line);
        if (content.empty() || content[0] == '#') continue;
        std::istringstream words(content);
        std::string head;
        words >> head;
        if (head == "algebra") {
            std::string name;
            if (!(words >> name)) throw ParseError("algebra needs a name", line_no);
            try {
                algebra = resolver(name);
            } catch (const UsageError& e) {
                throw ParseError(e.what(), line_no);
            }
        } else if (head == "start") {
            if (!(words >> start)) throw ParseError("start needs a nonterminal", line_no);
        } else if (head == "terminals") {
            for (std::string t; words >> t;) terminals.insert(t);
        } else if (head == "nonterminal") {
            std::string name;
            std::size_t sort = 0;
            if (!(words >> name >> sort)) throw ParseError("expected 'nonterminal <name> <sort>'", line_no);
            declared[name] = sort;
        } else if (head == "rule") {
            rules.push_back(parse_rule(std::string_view(content).substr(4), line_no));
        } else {
            throw ParseError("unknown directive '" + head + "'", line_no);
        }
    }
    if (!algebra) algebra = algebra_by_name("boolean");
    if (start.empty()) {
        if (rules.empty()) throw ParseError("grammar has neither 'start' nor rules");
        start = rules.front().lhs;
    }

    // Sorts: declarations first, then left-hand sides, then variable usage.
    std::map<std::string, std::size_t> sorts = declared;
    auto assign = [&](const std::string& nt, std::size_t sort, std::size_t line) {
        auto [it, fresh] = sorts.emplace(nt, sort);
        if (!fresh && it->second != sort)
            throw ValidationError("line " + std::to_string(line) + ": sort mismatch for " + nt + " (" +
                                  std::to_string(it->second) + " vs " + std::to_string(sort) + ")");
    };
    for (const auto& r : rules) assign(r.lhs, r.components.size(), r.line);
    std::map<std::string, std::size_t> inferred;
    for (const auto& r : rules) {
        for (const auto& nt : r.rhs) inferred.emplace(nt, 0);
        for (const auto& component : r.components)
            for (const auto& token : component)
                if (const auto* v = std::get_if<Variable>(&token); v && v->argument < r.rhs.size()) {
                    auto& s = inferred[r.rhs[v->argument]];
                    s = std::max(s, v->component + 1);
                }
    }
    for (const auto& [nt, sort] : inferred) sorts.emplace(nt, sort);
    sorts.emplace(start, 1);

    std::vector<Production> productions;
    std::vector<Weight> weights;
    for (const auto& r : rules) {
        for (const auto& component : r.components)
            for (const auto& token : component)
                if (const auto* s = std::get_if<Symbol>(&token)) terminals.insert(*s);
        std::vector<std::size_t> arg_sorts;
        for (const auto& nt : r.rhs) arg_sorts.push_back(sorts.at(nt));
        try {
            productions.push_back(Production{r.id, r.lhs, Composition(arg_sorts, r.components), r.rhs});
            weights.push_back(r.weight.empty() ? Weight::one(algebra) : parse_weight(algebra, r.weight));
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(r.line) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError(e.what(), r.line);
        }
    }
    return Grammar(algebra, std::move(sorts), std::move(terminals), std::move(start), std::move(productions),
                   std::move(weights));
}

Grammar load_grammar_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read grammar file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto dir = std::filesystem::path(path).parent_path().string();
    return parse_grammar(buffer.str(), default_algebra_resolver(dir.empty() ? "." : dir));
}

std::string format_grammar(const Grammar& g) {
    std::ostringstream out;
    out << "algebra " << g.algebra()->name() << "\n";
    out << "start " << g.initial() << "\n";
    if (!g.terminals().empty()) {
        out << "terminals";
        for (const auto& t : g.terminals()) out << ' ' << t;
        out << "\n";
    }
    for (const auto& [nt, sort] : g.nonterminals())
        if (g.productions_of(nt).empty() && nt != g.initial()) out << "nonterminal " << nt << ' ' << sort << "\n";
    for (std::size_t p = 0; p < g.productions().size(); ++p) {
        const auto& rule = g.production(p);
        out << "rule " << rule.id << ": " << rule.lhs << " -> " << rule.composition.to_string() << '(';
        for (std::size_t i = 0; i < rule.rhs.size(); ++i) out << (i > 0 ? ", " : "") << rule.rhs[i];
        out << ')';
        if (!g.weight(p).is_one()) out << " @ " << g.weight(p).to_string();
        out << "\n";
    }
    return out.str();
}

} // namespace wmcfg
