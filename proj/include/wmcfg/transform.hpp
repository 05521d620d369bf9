#pragma once

#include "wmcfg/grammar.hpp"
#include "wmcfg/homomorphism.hpp"

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace wmcfg {

struct PruneResult {
    Grammar grammar;
    /// The initial nonterminal is unproductive; `grammar` has no productions.
    bool empty_language = false;
};

/// Removes nonterminals without any finite subderivation, and the productions using them.
PruneResult prune_unproductive(const Grammar& g);

/// A transformed grammar together with the production each new production was built from.
struct TransformResult {
    Grammar grammar;
    std::vector<std::size_t> source_production;
};

/// Equivalent non-deleting grammar.
///
/// Nonterminals become pairs A{Psi} where Psi is the set of deleted component
/// indices; A{} keeps the plain name A. Every derivation of the source maps to
/// exactly one derivation of the result with the same shape, and weights are
/// inherited, so weighted semantics and derivation heights are preserved.
/// Fan-out-0 nonterminals may appear. Only nonterminals reachable from the
/// initial one and productive are kept.
TransformResult to_nondeleting(const Grammar& g);

/// Renames repeated right-hand side nonterminals to numbered copies `A#n`
/// whose productions duplicate those of A (transitively).
TransformResult make_rhs_distinct(const Grammar& g);

/// The marker terminal rho^i, written `<rule-id>^<i>` (i is 1-based).
Symbol marker_symbol(const std::string& rule_id, std::size_t component);

/// Weight separation of a non-deleting weighted grammar.
///
/// Production i of `boolean_grammar` is built from production i of `source`
/// by prefixing component j with the marker rho^j. A production of fan-out 0
/// gets a single component holding only its marker, and every use of such a
/// nonterminal is appended as a variable to the end of the parent's first
/// component; the markers map to epsilon, so yields are unchanged.
struct SeparationResult {
    Grammar source;
    Grammar boolean_grammar;
    std::set<Symbol> markers;
    /// Gamma -> Delta: terminals to themselves with weight one, rho^1 to mu(rho).epsilon,
    /// other markers to 1.epsilon.
    WeightedHom weight_hom;
};

/// Throws UsageError for deleting grammars and when a marker name collides with a terminal.
SeparationResult boolean_part(const Grammar& g);

/// Decodes a word of L(G_B) into the corresponding derivation of the source grammar.
/// Throws DecodeError at the first position that cannot be explained.
Derivation to_deriv(const SeparationResult& sep, const Word& word);

/// The word of L(G_B) that encodes a derivation of the source grammar.
Word separated_yield(const SeparationResult& sep, const Derivation& d);

} // namespace wmcfg
