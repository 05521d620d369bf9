#pragma once

#include "wmcfg/algebra.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wmcfg {

using Symbol = std::string;
using Word = std::vector<Symbol>;
using Tuple = std::vector<Word>;

/// Splits a whitespace-separated token list into a word.
Word parse_word(std::string_view text);
std::string format_word(const Word& word);

/// The variable x_i^j, stored zero-based: argument i-1, component j-1.
struct Variable {
    std::size_t argument = 0;
    std::size_t component = 0;
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

using Token = std::variant<Symbol, Variable>;

inline bool is_variable(const Token& t) { return std::holds_alternative<Variable>(t); }

/// A composition representation [u_1, ..., u_s] of sort (s_1 ... s_l, s).
class Composition {
public:
    Composition() = default;

    /// Throws ValidationError if some variable is out of the sort bounds.
    Composition(std::vector<std::size_t> argument_sorts, std::vector<std::vector<Token>> components);

    std::size_t rank() const noexcept { return argument_sorts_.size(); }
    std::size_t fanout() const noexcept { return components_.size(); }
    const std::vector<std::size_t>& argument_sorts() const noexcept { return argument_sorts_; }
    const std::vector<std::vector<Token>>& components() const noexcept { return components_; }

    bool is_linear() const;
    bool is_non_deleting() const;
    bool is_terminal_free() const;
    std::size_t terminal_count() const;

    /// Replaces every x_i^j by component j of args[i].
    Tuple apply(std::span<const Tuple> args) const;

    /// Bracketed text form, e.g. `['a' x1.1; 'c' x1.2]`; fan-out 0 prints as `[!]`.
    std::string to_string() const;

    friend bool operator==(const Composition&, const Composition&) = default;

private:
    std::vector<std::size_t> argument_sorts_;
    std::vector<std::vector<Token>> components_;
};

struct Production {
    std::string id;
    std::string lhs;
    Composition composition;
    std::vector<std::string> rhs;
};

/// A weighted multiple context-free grammar (N, Delta, S, P, mu).
///
/// An unweighted MCFG is the same record over the boolean algebra with every
/// weight equal to one.
class Grammar {
public:
    /// Validates sorts, linearity, non-zero weights, and that the initial
    /// nonterminal has sort 1. Nonterminals referenced by productions must be
    /// listed in `nonterminals`.
    Grammar(AlgebraPtr algebra, std::map<std::string, std::size_t> nonterminals, std::set<Symbol> terminals,
            std::string initial, std::vector<Production> productions, std::vector<Weight> weights);

    const AlgebraPtr& algebra() const noexcept { return algebra_; }
    const std::map<std::string, std::size_t>& nonterminals() const noexcept { return sorts_; }
    const std::set<Symbol>& terminals() const noexcept { return terminals_; }
    const std::string& initial() const noexcept { return initial_; }
    const std::vector<Production>& productions() const noexcept { return productions_; }
    const std::vector<Weight>& weights() const noexcept { return weights_; }

    const Production& production(std::size_t index) const { return productions_.at(index); }
    const Weight& weight(std::size_t index) const { return weights_.at(index); }

    std::size_t sort(const std::string& nonterminal) const;
    bool has_nonterminal(const std::string& nonterminal) const { return sorts_.contains(nonterminal); }

    /// Indices of the productions with the given left-hand side, in declaration order.
    const std::vector<std::size_t>& productions_of(const std::string& nonterminal) const;

    std::optional<std::size_t> find_production(std::string_view id) const;

    std::size_t fanout() const noexcept { return fanout_; }
    std::size_t rank() const noexcept { return rank_; }
    bool is_non_deleting() const;

    /// True iff every production's weight is the algebra's one.
    bool is_unweighted() const;

private:
    AlgebraPtr algebra_;
    std::map<std::string, std::size_t> sorts_;
    std::set<Symbol> terminals_;
    std::string initial_;
    std::vector<Production> productions_;
    std::vector<Weight> weights_;

    std::map<std::string, std::vector<std::size_t>> by_lhs_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
    std::size_t fanout_ = 0;
    std::size_t rank_ = 0;
};

/// Builds an unweighted grammar (boolean algebra, all weights one).
Grammar make_unweighted(std::map<std::string, std::size_t> nonterminals, std::set<Symbol> terminals,
                        std::string initial, std::vector<Production> productions);

// ---------------------------------------------------------------------------
// Derivations

/// A derivation tree; `production` indexes into the grammar's production list.
struct Derivation {
    std::size_t production = 0;
    std::vector<Derivation> children;

    std::size_t height() const;
    std::size_t size() const;

    friend bool operator==(const Derivation&, const Derivation&) = default;
};

/// Tree positions are child-index paths (1-based, root = empty path).
using Position = std::vector<std::size_t>;

/// Throws ValidationError unless `d` is well-sorted and rooted at `root`.
void check_well_sorted(const Grammar& g, const Derivation& d, const std::string& root);

/// Position -> production-id listing in preorder.
std::vector<std::pair<Position, std::string>> derivation_listing(const Grammar& g, const Derivation& d);

/// Rebuilds a derivation from a position -> production-id listing.
Derivation derivation_from_listing(const Grammar& g, const std::vector<std::pair<Position, std::string>>& listing);

std::string format_position(const Position& p);
Position parse_position(std::string_view text);

/// Term notation, e.g. `r1(r2(r4), r5)`.
std::string format_derivation(const Grammar& g, const Derivation& d);
Derivation parse_derivation(const Grammar& g, std::string_view text);

/// Sorts derivations canonically: lexicographically by their listings.
void canonical_sort(const Grammar& g, std::vector<Derivation>& ds);

Tuple yield(const Grammar& g, const Derivation& d);

/// Product of the production weights at every node.
Weight derivation_weight(const Grammar& g, const Derivation& d);

/// All derivations from `nonterminal` of height at most `max_height`, in canonical order.
std::vector<Derivation> enumerate_derivations(const Grammar& g, const std::string& nonterminal,
                                              std::size_t max_height);

/// Derivations from the initial nonterminal of height at most `max_height` whose yield is (word).
std::vector<Derivation> derivations_of(const Grammar& g, const Word& word, std::size_t max_height);

struct SemanticsResult {
    Weight value;
    std::size_t derivation_count = 0;
    /// The height bound may have cut off derivations of the word.
    bool truncated = false;
};

/// Sum of the derivation weights of `word` over derivations of height at most `max_height`.
SemanticsResult weighted_semantics(const Grammar& g, const Word& word, std::size_t max_height);

// ---------------------------------------------------------------------------
// Bounded analyses (non-deleting grammars)

/// Worst case over all derivations from the initial nonterminal whose yield has a given length.
struct GrowthBound {
    bool unbounded = false;
    bool any = false;           ///< some derivation has this yield length
    std::size_t max_height = 0;
    std::size_t max_cost = 0;   ///< maximum of the summed per-production costs
};

/// Per-production cost used by derivation_growth.
using ProductionCost = std::function<std::size_t(std::size_t production)>;

/// Exact worst-case height and cost over derivations with total yield length
/// `yield_length`. Unbounded iff some such derivation can be pumped without
/// changing the yield length. Requires a non-deleting grammar.
GrowthBound derivation_growth(const Grammar& g, std::size_t yield_length, const ProductionCost& cost = {});

/// Every tuple derivable from each nonterminal whose total length is at most
/// `max_total_length`. Exact for non-deleting grammars, where no subderivation
/// is longer than the derivation containing it.
std::map<std::string, std::set<Tuple>> bounded_tuples(const Grammar& g, std::size_t max_total_length);

/// The words of L(G) up to the given length, via bounded_tuples.
std::set<Word> bounded_language(const Grammar& g, std::size_t max_length);

// ---------------------------------------------------------------------------
// Text format

/// Resolves the argument of an `algebra` line.
using AlgebraResolver = std::function<AlgebraPtr(std::string_view)>;

/// Resolves shipped names, and `lattice:<path>` relative to `base_dir`.
AlgebraResolver default_algebra_resolver(std::string base_dir = ".");

Grammar parse_grammar(std::string_view text, const AlgebraResolver& resolver = default_algebra_resolver());
Grammar load_grammar_file(const std::string& path);
std::string format_grammar(const Grammar& g);

/// Formats a token as in grammar files: `'a'` or `x1.2`.
std::string format_token(const Token& t);

} // namespace wmcfg
