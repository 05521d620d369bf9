#pragma once

#include "wmcfg/grammar.hpp"

#include <string>

namespace test {

inline std::string data(const std::string& name) { return std::string(WMCFG_DATA_DIR) + "/" + name; }

inline wmcfg::Word w(const char* text) { return wmcfg::parse_word(text); }

inline wmcfg::Grammar grammar(const char* text) { return wmcfg::parse_grammar(text); }

inline wmcfg::Grammar example22() { return wmcfg::load_grammar_file(data("example22.mcfg")); }

} // namespace test
