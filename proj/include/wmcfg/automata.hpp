#pragma once

#include "wmcfg/grammar.hpp"

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wmcfg {

using State = std::size_t;

struct Transition {
    State from = 0;
    Word label;   ///< possibly empty or longer than one symbol
    State to = 0;
    friend bool operator==(const Transition&, const Transition&) = default;
};

/// A finite-state automaton whose transitions read words.
class Fsa {
public:
    /// Throws ValidationError on dangling states, duplicate state names, or
    /// labels outside the alphabet.
    Fsa(std::vector<std::string> state_names, std::set<Symbol> alphabet, State initial, std::set<State> finals,
        std::vector<Transition> transitions);

    const std::vector<std::string>& state_names() const noexcept { return state_names_; }
    std::size_t state_count() const noexcept { return state_names_.size(); }
    const std::set<Symbol>& alphabet() const noexcept { return alphabet_; }
    State initial() const noexcept { return initial_; }
    const std::set<State>& finals() const noexcept { return finals_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    /// Indices into transitions() leaving `state`.
    const std::vector<std::size_t>& outgoing(State state) const { return outgoing_.at(state); }

private:
    std::vector<std::string> state_names_;
    std::set<Symbol> alphabet_;
    State initial_;
    std::set<State> finals_;
    std::vector<Transition> transitions_;
    std::vector<std::vector<std::size_t>> outgoing_;
};

/// Words with a symbol outside the alphabet are rejected.
bool accepts(const Fsa& a, const Word& word);

/// All accepted words of length at most `max_length`.
std::set<Word> enumerate_language(const Fsa& a, std::size_t max_length);

/// Returning false from `viable` cuts off every extension of the prefix.
using PrefixFilter = std::function<bool(const Word& prefix)>;

/// Depth-first enumeration of the accepted words of length at most
/// `max_length` whose prefixes all pass `viable`. Each word is visited once.
void for_each_word(const Fsa& a, std::size_t max_length, const PrefixFilter& viable,
                   const std::function<void(const Word&)>& visit);

/// No epsilon transitions and no state with two transitions whose labels
/// start with the same symbol.
bool is_deterministic(const Fsa& a);

/// `initial q`, `final q ...`, then one `q -- a b --> q'` line per transition.
std::string format_fsa(const Fsa& a);

} // namespace wmcfg
