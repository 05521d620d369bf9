#pragma once

#include "wmcfg/algebra.hpp"
#include "wmcfg/grammar.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace wmcfg {

/// The weighted language mu.w with support {w} (or empty support when mu is zero).
struct Monomial {
    Word word;
    Weight weight;

    /// The canonical zero monomial 0.epsilon.
    static Monomial zero(const AlgebraPtr& algebra) { return {{}, Weight::zero(algebra)}; }
    bool is_zero() const { return weight.is_zero(); }

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// A weighted string homomorphism given by one monomial per source symbol.
/// Boolean-algebra homomorphisms with weight-one images are the unweighted case.
class WeightedHom {
public:
    /// Throws ValidationError if the table is not total on `source`, refers to
    /// symbols outside the alphabets, or mixes algebras. Images of weight zero
    /// are normalised to 0.epsilon.
    WeightedHom(AlgebraPtr algebra, std::set<Symbol> source, std::set<Symbol> target,
                std::map<Symbol, Monomial> table);

    const AlgebraPtr& algebra() const noexcept { return algebra_; }
    const std::set<Symbol>& source() const noexcept { return source_; }
    const std::set<Symbol>& target() const noexcept { return target_; }
    const std::map<Symbol, Monomial>& table() const noexcept { return table_; }

    const Monomial& image(const Symbol& symbol) const;

    /// Every image word has length at most one.
    bool is_alphabetic() const noexcept { return alphabetic_; }

private:
    AlgebraPtr algebra_;
    std::set<Symbol> source_;
    std::set<Symbol> target_;
    std::map<Symbol, Monomial> table_;
    bool alphabetic_ = true;
};

/// An unweighted homomorphism from a symbol-to-word table.
WeightedHom make_unweighted_hom(std::set<Symbol> source, std::set<Symbol> target, const std::map<Symbol, Word>& table);

/// The identity on `alphabet`, over the given algebra.
WeightedHom identity_hom(const AlgebraPtr& algebra, const std::set<Symbol>& alphabet);

/// Concatenates the images and multiplies their weights.
Monomial apply_hom(const WeightedHom& h, const Word& word);

/// h1 after h2 for alphabetic h1 (weighted) and alphabetic unweighted h2.
WeightedHom compose_alphabetic(const WeightedHom& h1, const WeightedHom& h2);

/// A finite weighted language; absent words have weight zero.
using WeightedLanguage = std::map<Word, Weight>;

/// w -> sum over u in L of h(u)(w).
WeightedLanguage image_weighted(const WeightedHom& h, const std::set<Word>& language);

/// As above with the weight of each u multiplied into its image.
WeightedLanguage image_weighted(const WeightedHom& h, const WeightedLanguage& language);

/// One line per source symbol: `sym -> 'w1 w2' @ weight`.
std::string format_hom(const WeightedHom& h);

/// Reads the format written by format_hom. Source and target alphabets are
/// the symbols occurring on the left and right of the arrows.
WeightedHom parse_hom(std::string_view text, const AlgebraPtr& algebra);

} // namespace wmcfg
