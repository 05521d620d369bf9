#pragma once

#include "wmcfg/dyck.hpp"
#include "wmcfg/generator.hpp"
#include "wmcfg/grammar.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wmcfg {

enum class Status { pass, fail, truncated };

std::string status_name(Status status);

struct Mismatch {
    std::string input;
    std::string expected;
    std::string actual;
};

/// Outcome of an exhaustive bounded check.
struct Report {
    std::string property;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::size_t checked = 0;
    std::vector<Mismatch> mismatches;
    /// pass iff no mismatches and not truncated; fail wins over truncated.
    Status status = Status::pass;
    std::vector<std::string> notes;
};

/// Compares weighted_semantics with the bracket-word semantics of the
/// decomposition on every word of length at most `max_word_length`.
Report check_theorem(const Grammar& g, std::size_t max_word_length, std::size_t bracket_bound);

/// As above against a caller-supplied (possibly corrupted) decomposition of g.
Report check_theorem(const Grammar& g, const CsDecomposition& cs, std::size_t max_word_length,
                     std::size_t bracket_bound);

struct BijectionOptions {
    /// Decode with FromBracketsOptions::skip_consistency_check.
    bool corrupt_from_brackets = false;
    /// Bound for the set comparison; defaults to the longest encoding of an enumerated derivation.
    std::optional<std::size_t> bracket_bound;
};

/// Round trips between derivations, separated words and bracket words for
/// every derivation of height at most `max_height`, plus the set equality of
/// encodings and accepted mD words up to the bracket bound.
Report check_bijection(const Grammar& g, std::size_t max_height, const BijectionOptions& options = {});

/// is_member against the relabelled bounded language of the partition grammar.
Report check_dyck_oracle(const BracketAlphabet& ba, std::size_t r, std::size_t max_length);

/// All Dyck words over `ba` of length at most `max_length`, by direct generation.
std::set<Word> dyck_words(const BracketAlphabet& ba, std::size_t max_length);

std::string report_json(const Report& report);
std::string format_report(const Report& report);

} // namespace wmcfg
