#pragma once

#include "wmcfg/automata.hpp"
#include "wmcfg/dyck.hpp"
#include "wmcfg/grammar.hpp"
#include "wmcfg/homomorphism.hpp"
#include "wmcfg/transform.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace wmcfg {

/// `[<id>.<j>` and `]<id>.<j>` for component j (1-based) of a production.
Symbol opening_bracket(const std::string& rule_id, std::size_t component);
Symbol closing_bracket(const std::string& rule_id, std::size_t component);

/// `[t:<terminal>.1` and `]t:<terminal>.1`.
Symbol terminal_opening(const Symbol& terminal);
Symbol terminal_closing(const Symbol& terminal);

/// One linked cell per production (its fan-out many brackets) and one
/// singleton cell per terminal.
BracketAlphabet generator_alphabet(const Grammar& g);

/// Deterministic automaton for the local language of bracket words of `g`.
/// States are `start` and one state per bracket symbol (the last one read).
Fsa generator_automaton(const Grammar& g);

/// Terminal opening brackets to their terminal, everything else to epsilon.
WeightedHom bracket_hom(const Grammar& g);

/// Tuple-valued encoding of a derivation from any nonterminal.
Tuple to_brackets_tuple(const Grammar& g, const Derivation& d);

/// Encoding of a derivation from the initial nonterminal.
Word to_brackets(const Grammar& g, const Derivation& d);

struct FromBracketsOptions {
    /// Mutation switch for tests: accept children whose components open with
    /// brackets of different rules, and skip the final re-encoding check.
    bool skip_consistency_check = false;
};

/// Inverse of to_brackets. Throws DecodeError for words outside R and mD.
Derivation from_brackets(const Grammar& g, const Word& word, const FromBracketsOptions& options = {});

/// The decomposition L = h(R and mD) of a weighted grammar.
struct CsDecomposition {
    Grammar source;
    /// The source derives no word at all.
    bool empty_language = false;
    /// Separation of the normalised (pruned, non-deleting, rhs-distinct) grammar.
    SeparationResult separation;
    BracketAlphabet brackets;
    Fsa automaton;
    WeightedHom bracket_hom;
    /// wts after bracket_hom.
    WeightedHom projection;

    const Grammar& normalized() const noexcept { return separation.source; }
    const Grammar& boolean_grammar() const noexcept { return separation.boolean_grammar; }
};

CsDecomposition build_decomposition(const Grammar& g);

/// Exact bracket-length bound: the longest encoding of a derivation whose
/// yield has length at most `max_word_length`; nullopt if there is none.
std::optional<std::size_t> sufficient_bracket_bound(const CsDecomposition& cs, std::size_t max_word_length);

/// Sum of the projection weights of the accepted bracket words of length at
/// most `max_bracket_length` that lie in mD and project onto `word`.
/// `truncated` is set if longer encodings of words of this length exist.
SemanticsResult weighted_cs_semantics(const CsDecomposition& cs, const Word& word, std::size_t max_bracket_length);

/// The same sum for every word of length at most `max_word_length` at once.
WeightedLanguage weighted_cs_language(const CsDecomposition& cs, std::size_t max_word_length,
                                      std::size_t max_bracket_length);

/// Accepted bracket words of length at most `max_bracket_length` that lie in mD.
std::set<Word> generator_intersection(const CsDecomposition& cs, std::size_t max_bracket_length);

} // namespace wmcfg
