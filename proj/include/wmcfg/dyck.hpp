#pragma once

#include "wmcfg/grammar.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wmcfg {

/// Opening symbols, their closing partners, and a partition of the opening symbols into cells.
class BracketAlphabet {
public:
    /// `closing[i]` is the partner of `opening[i]`; each cell lists opening symbols
    /// in its fixed enumeration order. Throws ValidationError unless the cells
    /// partition the opening symbols and opening and closing symbols are disjoint.
    BracketAlphabet(std::vector<Symbol> opening, std::vector<Symbol> closing, std::vector<std::vector<Symbol>> cells);

    /// Closing symbols named `~` + opening name.
    static BracketAlphabet with_default_closing(std::vector<Symbol> opening, std::vector<std::vector<Symbol>> cells);

    /// Every symbol in a cell of its own.
    static BracketAlphabet singletons(std::vector<Symbol> opening, std::vector<Symbol> closing);

    const std::vector<Symbol>& opening() const noexcept { return opening_; }
    const std::vector<Symbol>& closing() const noexcept { return closing_; }
    const std::vector<std::vector<Symbol>>& cells() const noexcept { return cells_; }

    bool is_opening(const Symbol& s) const { return opening_index_.contains(s); }
    bool is_closing(const Symbol& s) const { return closing_index_.contains(s); }
    bool contains(const Symbol& s) const { return is_opening(s) || is_closing(s); }

    /// Index of an opening symbol, or of the opening partner of a closing symbol.
    std::size_t index(const Symbol& s) const;
    const Symbol& bar(const Symbol& opening) const;
    std::size_t cell_of(std::size_t opening_index) const { return cell_of_.at(opening_index); }

    /// Maximal cell size.
    std::size_t dimension() const;

private:
    std::vector<Symbol> opening_;
    std::vector<Symbol> closing_;
    std::vector<std::vector<Symbol>> cells_;
    std::map<Symbol, std::size_t> opening_index_;
    std::map<Symbol, std::size_t> closing_index_;
    std::vector<std::size_t> cell_of_;
};

/// Partition file: `symbols ...`, optional `closing ...` (same order), then `cell ...` lines.
BracketAlphabet parse_partition(std::string_view text);
BracketAlphabet load_partition_file(const std::string& path);
std::string format_partition(const BracketAlphabet& ba);

/// Two cells joined into one (for corruption tests).
BracketAlphabet merge_cells(const BracketAlphabet& ba, std::size_t first, std::size_t second);

/// Throws UsageError on symbols outside the alphabet.
bool is_dyck(const BracketAlphabet& ba, const Word& word);

/// Algorithm 1. Throws UsageError unless `word` is a Dyck word.
std::vector<Word> split(const BracketAlphabet& ba, const Word& word);

/// Algorithm 2 with memoisation on the recursed word.
///
/// Reuse one checker across calls to share the memo table.
class MembershipChecker {
public:
    explicit MembershipChecker(const BracketAlphabet& ba);
    ~MembershipChecker();
    MembershipChecker(MembershipChecker&&) noexcept;
    MembershipChecker& operator=(MembershipChecker&&) noexcept;

    /// Throws UsageError on symbols outside the alphabet.
    bool operator()(const Word& word);

    /// Runs without memoisation, logging every step in the style of a call table.
    bool trace(const Word& word, std::ostream& log);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool is_member(const BracketAlphabet& ba, const Word& word);

/// A set whose symbols carry sorts >= 1.
using SortedAlphabet = std::map<Symbol, std::size_t>;

struct DyckGrammarOptions {
    std::size_t max_rules = 10000;
    /// Lift the desk-scale guard rank, sort <= 2.
    bool allow_large = false;
};

/// The symbol delta^[i] (1-based) and its barred partner.
Symbol indexed_symbol(const Symbol& delta, std::size_t i);
Symbol indexed_bar(const Symbol& delta, std::size_t i);

/// The multiple Dyck grammar over Delta with rank bound r. Nonterminals are
/// A1..Ak and the initial nonterminal is A1. Throws UsageError if r < k or a
/// guard is exceeded.
Grammar multiple_dyck_grammar(const SortedAlphabet& delta, std::size_t r, const DyckGrammarOptions& options = {});

struct PartitionGrammar {
    Grammar grammar;
    /// Cell names p1, p2, ... in cell order.
    SortedAlphabet cells;
    /// g: indexed cell symbols (and their bars) to opening (and closing) symbols.
    std::map<Symbol, Symbol> relabel;
};

PartitionGrammar partition_grammar(const BracketAlphabet& ba, std::size_t r, const DyckGrammarOptions& options = {});

} // namespace wmcfg
