#include "wmcfg/homomorphism.hpp"

#include "wmcfg/error.hpp"

#include <sstream>

namespace wmcfg {

WeightedHom::WeightedHom(AlgebraPtr algebra, std::set<Symbol> source, std::set<Symbol> target,
                         std::map<Symbol, Monomial> table)
    : algebra_(std::move(algebra)), source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
    for (const auto& s : source_)
        if (!table_.contains(s)) throw ValidationError("homomorphism has no image for '" + s + "'");
    for (auto& [s, m] : table_) {
        if (!source_.contains(s)) throw ValidationError("homomorphism maps '" + s + "' outside its source alphabet");
        if (m.weight.algebra() != algebra_)
            throw ValidationError("image of '" + s + "' uses algebra " + m.weight.algebra()->name());
        if (m.is_zero()) m.word.clear();
        for (const auto& t : m.word)
            if (!target_.contains(t))
                throw ValidationError("image of '" + s + "' uses '" + t + "' outside the target alphabet");
        if (m.word.size() > 1) alphabetic_ = false;
    }
}

const Monomial& WeightedHom::image(const Symbol& symbol) const {
    auto it = table_.find(symbol);
    if (it == table_.end()) throw UsageError("symbol '" + symbol + "' is outside the homomorphism's source alphabet");
    return it->second;
}

WeightedHom make_unweighted_hom(std::set<Symbol> source, std::set<Symbol> target,
                                const std::map<Symbol, Word>& table) {
    auto boolean = algebra_by_name("boolean");
    std::map<Symbol, Monomial> monomials;
    for (const auto& [s, w] : table) monomials.emplace(s, Monomial{w, Weight::one(boolean)});
    return WeightedHom(boolean, std::move(source), std::move(target), std::move(monomials));
}

WeightedHom identity_hom(const AlgebraPtr& algebra, const std::set<Symbol>& alphabet) {
    std::map<Symbol, Monomial> table;
    for (const auto& s : alphabet) table.emplace(s, Monomial{{s}, Weight::one(algebra)});
    return WeightedHom(algebra, alphabet, alphabet, std::move(table));
}

Monomial apply_hom(const WeightedHom& h, const Word& word) {
    Monomial out{{}, Weight::one(h.algebra())};
    for (const auto& s : word) {
        const auto& m = h.image(s);
        out.weight = times(out.weight, m.weight);
        out.word.insert(out.word.end(), m.word.begin(), m.word.end());
    }
    if (out.is_zero()) out.word.clear();
    return out;
}

WeightedHom compose_alphabetic(const WeightedHom& h1, const WeightedHom& h2) {
    if (!h1.is_alphabetic() || !h2.is_alphabetic()) throw UsageError("compose_alphabetic needs alphabetic homomorphisms");
    for (const auto& [s, m] : h2.table())
        if (!m.is_zero() && !m.weight.is_one())
            throw UsageError("the inner homomorphism of compose_alphabetic must be unweighted");
    for (const auto& t : h2.target())
        if (!h1.source().contains(t)) throw UsageError("'" + t + "' is not in the source of the outer homomorphism");
    std::map<Symbol, Monomial> table;
    for (const auto& [s, m] : h2.table()) {
        if (m.is_zero())
            table.emplace(s, Monomial::zero(h1.algebra()));
        else if (m.word.empty())
            table.emplace(s, Monomial{{}, Weight::one(h1.algebra())});
        else
            table.emplace(s, h1.image(m.word.front()));
    }
    return WeightedHom(h1.algebra(), h2.source(), h1.target(), std::move(table));
}

WeightedLanguage image_weighted(const WeightedHom& h, const std::set<Word>& language) {
    WeightedLanguage out;
    for (const auto& u : language) {
        auto m = apply_hom(h, u);
        if (m.is_zero()) continue;
        auto it = out.find(m.word);
        if (it == out.end())
            out.emplace(m.word, m.weight);
        else
            it->second = plus(it->second, m.weight);
    }
    std::erase_if(out, [](const auto& entry) { return entry.second.is_zero(); });
    return out;
}

WeightedLanguage image_weighted(const WeightedHom& h, const WeightedLanguage& language) {
    WeightedLanguage out;
    for (const auto& [u, weight] : language) {
        auto m = apply_hom(h, u);
        m.weight = times(weight, m.weight);
        if (m.is_zero()) continue;
        auto it = out.find(m.word);
        if (it == out.end())
            out.emplace(m.word, m.weight);
        else
            it->second = plus(it->second, m.weight);
    }
    std::erase_if(out, [](const auto& entry) { return entry.second.is_zero(); });
    return out;
}

std::string format_hom(const WeightedHom& h) {
    std::ostringstream out;
    for (const auto& [s, m] : h.table()) {
        out << s << " -> '" << format_word(m.word) << "' @ " << m.weight.to_string() << "\n";
    }
    return out.str();
}

WeightedHom parse_hom(std::string_view text, const AlgebraPtr& algebra) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::set<Symbol> source;
    std::set<Symbol> target;
    std::map<Symbol, Monomial> table;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto arrow = line.find("->");
        auto open = line.find('\'', arrow == std::string::npos ? 0 : arrow);
        auto close = open == std::string::npos ? open : line.find('\'', open + 1);
        auto at = close == std::string::npos ? close : line.find('@', close);
        if (arrow == std::string::npos || close == std::string::npos || at == std::string::npos)
            throw ParseError("expected `symbol -> 'word' @ weight`", line_no);
        auto symbol = parse_word(line.substr(0, arrow));
        if (symbol.size() != 1) throw ParseError("expected exactly one source symbol", line_no);
        Word image = parse_word(line.substr(open + 1, close - open - 1));
        Weight weight = parse_weight(algebra, line.substr(at + 1));
        source.insert(symbol.front());
        target.insert(image.begin(), image.end());
        if (!table.emplace(symbol.front(), Monomial{std::move(image), std::move(weight)}).second)
            throw ParseError("symbol '" + symbol.front() + "' mapped twice", line_no);
    }
    return WeightedHom(algebra, std::move(source), std::move(target), std::move(table));
}

} // namespace wmcfg
