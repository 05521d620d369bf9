#include "wmcfg/dyck.hpp"

#include "wmcfg/error.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace wmcfg {

// ---------------------------------------------------------------------------
// BracketAlphabet

BracketAlphabet::BracketAlphabet(std::vector<Symbol> opening, std::vector<Symbol> closing,
                                 std::vector<std::vector<Symbol>> cells)
    : opening_(std::move(opening)), closing_(std::move(closing)), cells_(std::move(cells)) {
    if (opening_.size() != closing_.size())
        throw ValidationError("opening and closing symbol lists differ in length");
    for (std::size_t i = 0; i < opening_.size(); ++i) {
        if (!opening_index_.emplace(opening_[i], i).second)
            throw ValidationError("opening symbol '" + opening_[i] + "' listed twice");
        if (!closing_index_.emplace(closing_[i], i).second)
            throw ValidationError("closing symbol '" + closing_[i] + "' listed twice");
    }
    for (const auto& c : closing_)
        if (opening_index_.contains(c)) throw ValidationError("'" + c + "' is both opening and closing");
    cell_of_.assign(opening_.size(), cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        if (cells_[c].empty()) throw ValidationError("empty cell");
        for (const auto& s : cells_[c]) {
            auto it = opening_index_.find(s);
            if (it == opening_index_.end()) throw ValidationError("cell mentions unknown symbol '" + s + "'");
            if (cell_of_[it->second] != cells_.size()) throw ValidationError("'" + s + "' lies in two cells");
            cell_of_[it->second] = c;
        }
    }
    for (std::size_t i = 0; i < opening_.size(); ++i)
        if (cell_of_[i] == cells_.size()) throw ValidationError("'" + opening_[i] + "' lies in no cell");
}

BracketAlphabet BracketAlphabet::with_default_closing(std::vector<Symbol> opening,
                                                      std::vector<std::vector<Symbol>> cells) {
    std::vector<Symbol> closing;
    for (const auto& s : opening) closing.push_back("~" + s);
    return BracketAlphabet(std::move(opening), std::move(closing), std::move(cells));
}

BracketAlphabet BracketAlphabet::singletons(std::vector<Symbol> opening, std::vector<Symbol> closing) {
    std::vector<std::vector<Symbol>> cells;
    for (const auto& s : opening) cells.push_back({s});
    return BracketAlphabet(std::move(opening), std::move(closing), std::move(cells));
}

std::size_t BracketAlphabet::index(const Symbol& s) const {
    if (auto it = opening_index_.find(s); it != opening_index_.end()) return it->second;
    if (auto it = closing_index_.find(s); it != closing_index_.end()) return it->second;
    throw UsageError("symbol '" + s + "' is not in the bracket alphabet");
}

const Symbol& BracketAlphabet::bar(const Symbol& opening) const {
    auto it = opening_index_.find(opening);
    if (it == opening_index_.end()) throw UsageError("'" + opening + "' is not an opening symbol");
    return closing_[it->second];
}

std::size_t BracketAlphabet::dimension() const {
    std::size_t d = 0;
    for (const auto& c : cells_) d = std::max(d, c.size());
    return d;
}

BracketAlphabet parse_partition(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::vector<Symbol>> opening;
    std::optional<std::vector<Symbol>> closing;
    std::vector<std::vector<Symbol>> cells;
    while (std::getline(in, line)) {
        ++line_no;
        auto words = parse_word(line);
        if (words.empty() || words.front().starts_with("#")) continue;
        std::vector<Symbol> rest(words.begin() + 1, words.end());
        if (words.front() == "symbols") {
            if (opening) throw ParseError("'symbols' given twice", line_no);
            opening = std::move(rest);
        } else if (words.front() == "closing") {
            if (closing) throw ParseError("'closing' given twice", line_no);
            closing = std::move(rest);
        } else if (words.front() == "cell") {
            if (rest.empty()) throw ParseError("empty cell", line_no);
            cells.push_back(std::move(rest));
        } else {
            throw ParseError("unknown directive '" + words.front() + "'", line_no);
        }
    }
    if (!opening) throw ParseError("partition file has no 'symbols' line");
    if (!closing) return BracketAlphabet::with_default_closing(std::move(*opening), std::move(cells));
    return BracketAlphabet(std::move(*opening), std::move(*closing), std::move(cells));
}

BracketAlphabet load_partition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read partition file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_partition(buffer.str());
}

std::string format_partition(const BracketAlphabet& ba) {
    std::ostringstream out;
    out << "symbols " << format_word(ba.opening()) << "\n";
    out << "closing " << format_word(ba.closing()) << "\n";
    for (const auto& cell : ba.cells()) out << "cell " << format_word(cell) << "\n";
    return out.str();
}

BracketAlphabet merge_cells(const BracketAlphabet& ba, std::size_t first, std::size_t second) {
    if (first == second || first >= ba.cells().size() || second >= ba.cells().size())
        throw UsageError("merge_cells needs two distinct cell indices");
    std::vector<std::vector<Symbol>> cells;
    for (std::size_t c = 0; c < ba.cells().size(); ++c) {
        if (c == second) continue;
        cells.push_back(ba.cells()[c]);
        if (c == first) cells.back().insert(cells.back().end(), ba.cells()[second].begin(), ba.cells()[second].end());
    }
    return BracketAlphabet(ba.opening(), ba.closing(), std::move(cells));
}

// ---------------------------------------------------------------------------
// Dyck words

namespace {

// Opening symbol i is encoded as i, its partner as n + i.
std::vector<int> encode(const BracketAlphabet& ba, const Word& word) {
    const int n = static_cast<int>(ba.opening().size());
    std::vector<int> out;
    out.reserve(word.size());
    for (const auto& s : word) {
        int i = static_cast<int>(ba.index(s));
        out.push_back(ba.is_opening(s) ? i : n + i);
    }
    return out;
}

bool dyck_codes(const std::vector<int>& w, int n) {
    std::vector<int> stack;
    for (int c : w) {
        if (c < n) {
            stack.push_back(c);
        } else {
            if (stack.empty() || stack.back() != c - n) return false;
            stack.pop_back();
        }
    }
    return stack.empty();
}

struct Piece {
    int sigma;
    std::size_t begin;   // interior [begin, end)
    std::size_t end;
};

// Algorithm 1 on a Dyck word.
std::vector<Piece> split_codes(const std::vector<int>& w, int n) {
    std::vector<Piece> out;
    std::size_t depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < n) {
            if (depth++ == 0) start = i;
        } else if (--depth == 0) {
            out.push_back({w[start], start + 1, i});
        }
    }
    return out;
}

struct VectorHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = v.size();
        for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

} // namespace

bool is_dyck(const BracketAlphabet& ba, const Word& word) {
    return dyck_codes(encode(ba, word), static_cast<int>(ba.opening().size()));
}

std::vector<Word> split(const BracketAlphabet& ba, const Word& word) {
    auto codes = encode(ba, word);
    if (!dyck_codes(codes, static_cast<int>(ba.opening().size())))
        throw UsageError("split needs a Dyck word, got '" + format_word(word) + "'");
    std::vector<Word> out;
    for (const auto& piece : split_codes(codes, static_cast<int>(ba.opening().size())))
        out.emplace_back(word.begin() + static_cast<std::ptrdiff_t>(piece.begin - 1),
                         word.begin() + static_cast<std::ptrdiff_t>(piece.end + 1));
    return out;
}

// ---------------------------------------------------------------------------
// Algorithm 2

struct MembershipChecker::Impl {
    const BracketAlphabet& ba;
    int n;
    std::vector<std::vector<int>> cells;   // opening codes per cell
    std::vector<std::size_t> cell_of;
    std::unordered_map<std::vector<int>, bool, VectorHash> memo;

    explicit Impl(const BracketAlphabet& alphabet) : ba(alphabet), n(static_cast<int>(alphabet.opening().size())) {
        for (const auto& cell : ba.cells()) {
            std::vector<int> codes;
            for (const auto& s : cell) codes.push_back(static_cast<int>(ba.index(s)));
            cells.push_back(std::move(codes));
        }
        for (std::size_t i = 0; i < ba.opening().size(); ++i) cell_of.push_back(ba.cell_of(i));
    }

    std::vector<int> block_word(const std::vector<int>& w, const std::vector<Piece>& pieces,
                                const std::vector<std::size_t>& block) const {
        std::vector<int> out;
        for (std::size_t i : block) out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(pieces[i].begin),
                                               w.begin() + static_cast<std::ptrdiff_t>(pieces[i].end));
        return out;
    }

    // Calls visit(block) for every block containing `first` whose symbols form its cell.
    template <typename F>
    void blocks_from(const std::vector<Piece>& pieces, const std::vector<bool>& taken, std::size_t first, F&& visit) const {
        const auto& cell = cells[cell_of[static_cast<std::size_t>(pieces[first].sigma)]];
        std::vector<int> needed;
        for (int s : cell)
            if (s != pieces[first].sigma) needed.push_back(s);
        std::vector<std::size_t> block{first};
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
            if (k == needed.size()) {
                auto sorted = block;
                std::sort(sorted.begin(), sorted.end());
                visit(sorted);
                return;
            }
            for (std::size_t j = first + 1; j < pieces.size(); ++j)
                if (!taken[j] && pieces[j].sigma == needed[k] &&
                    std::find(block.begin(), block.end(), j) == block.end()) {
                    block.push_back(j);
                    rec(k + 1);
                    block.pop_back();
                }
        };
        rec(0);
    }

    bool balanced_cells(const std::vector<Piece>& pieces) const {
        std::vector<std::size_t> count(static_cast<std::size_t>(n), 0);
        for (const auto& p : pieces) ++count[static_cast<std::size_t>(p.sigma)];
        for (const auto& cell : cells)
            for (int s : cell)
                if (count[static_cast<std::size_t>(s)] != count[static_cast<std::size_t>(cell.front())]) return false;
        return true;
    }

    bool member(const std::vector<int>& w) {
        if (w.empty()) return true;
        if (auto it = memo.find(w); it != memo.end()) return it->second;
        bool result = false;
        if (dyck_codes(w, n)) {
            auto pieces = split_codes(w, n);
            if (balanced_cells(pieces)) {
                std::vector<bool> taken(pieces.size(), false);
                result = search(w, pieces, taken);
            }
        }
        memo.emplace(w, result);
        return result;
    }

    // Depth-first over partitions, checking each block as soon as it is chosen.
    bool search(const std::vector<int>& w, const std::vector<Piece>& pieces, std::vector<bool>& taken) {
        auto first = std::find(taken.begin(), taken.end(), false);
        if (first == taken.end()) return true;
        auto i = static_cast<std::size_t>(first - taken.begin());
        bool found = false;
        blocks_from(pieces, taken, i, [&](const std::vector<std::size_t>& block) {
            if (found) return;
            if (!member(block_word(w, pieces, block))) return;
            for (std::size_t j : block) taken[j] = true;
            found = search(w, pieces, taken);
            for (std::size_t j : block) taken[j] = false;
        });
        return found;
    }

    // Every partition of the pieces into cell-shaped blocks, blocks ordered by least element.
    void all_partitions(const std::vector<Piece>& pieces, std::vector<bool>& taken,
                        std::vector<std::vector<std::size_t>>& current,
                        std::vector<std::vector<std::vector<std::size_t>>>& out) const {
        auto first = std::find(taken.begin(), taken.end(), false);
        if (first == taken.end()) {
            out.push_back(current);
            return;
        }
        auto i = static_cast<std::size_t>(first - taken.begin());
        blocks_from(pieces, taken, i, [&](const std::vector<std::size_t>& block) {
            for (std::size_t j : block) taken[j] = true;
            current.push_back(block);
            all_partitions(pieces, taken, current, out);
            current.pop_back();
            for (std::size_t j : block) taken[j] = false;
        });
    }

    std::string show(const std::vector<int>& w) const {
        if (w.empty()) return "ε";
        std::string out;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i > 0) out += ' ';
            out += w[i] < n ? ba.opening()[static_cast<std::size_t>(w[i])]
                            : ba.closing()[static_cast<std::size_t>(w[i] - n)];
        }
        return out;
    }

    static std::string show_block(const std::vector<std::size_t>& block) {
        std::string out = "{";
        for (std::size_t k = 0; k < block.size(); ++k) out += (k > 0 ? "," : "") + std::to_string(block[k] + 1);
        return out + "}";
    }

    static std::string show_partition(const std::vector<std::vector<std::size_t>>& partition) {
        std::string out = "{";
        for (std::size_t k = 0; k < partition.size(); ++k) out += (k > 0 ? ", " : "") + show_block(partition[k]);
        return out + "}";
    }

    // Follows the pseudo code literally: all partitions first, no short cut inside a partition.
    bool traced(const std::vector<int>& w, std::ostream& log, std::size_t depth) const {
        const std::string indent(depth * 4, ' ');
        if (w.empty()) {
            log << indent << "l.2: return 1\n";
            return true;
        }
        if (!dyck_codes(w, n)) {
            log << indent << "l.3: return 0\n";
            return false;
        }
        auto pieces = split_codes(w, n);
        log << indent << "l.4: ";
        for (std::size_t i = 0; i < pieces.size(); ++i)
            log << (i > 0 ? ", " : "") << "σ" << i + 1 << " = "
                << ba.opening()[static_cast<std::size_t>(pieces[i].sigma)];
        for (std::size_t i = 0; i < pieces.size(); ++i)
            log << ", u" << i + 1 << " = " << show(std::vector<int>(w.begin() + static_cast<std::ptrdiff_t>(pieces[i].begin),
                                                                  w.begin() + static_cast<std::ptrdiff_t>(pieces[i].end)));
        log << "\n";
        std::vector<std::vector<std::vector<std::size_t>>> partitions;
        std::vector<bool> taken(pieces.size(), false);
        std::vector<std::vector<std::size_t>> current;
        all_partitions(pieces, taken, current, partitions);
        log << indent << "l.5: 𝓘 = ";
        if (partitions.empty()) {
            log << "∅\n";
        } else {
            log << "{";
            for (std::size_t k = 0; k < partitions.size(); ++k) log << (k > 0 ? ", " : "") << show_partition(partitions[k]);
            log << "}\n";
        }
        for (const auto& partition : partitions) {
            log << indent << "l.6: I = " << show_partition(partition) << "\n";
            int b = 1;
            for (const auto& block : partition) {
                log << indent << "l.8: k = " << block.size();
                for (std::size_t k = 0; k < block.size(); ++k) log << ", i" << k + 1 << " = " << block[k] + 1;
                log << "\n";
                auto inner = block_word(w, pieces, block);
                log << indent << "l.9: b = " << b << " · isMember(" << show(inner) << ")\n";
                int r = traced(inner, log, depth + 1) ? 1 : 0;
                log << indent << "l.9: b = " << b << " · " << r << " = " << (b * r) << "\n";
                b *= r;
            }
            if (b == 1) {
                log << indent << "l.11: return 1\n";
                return true;
            }
        }
        log << indent << "l.13: return 0\n";
        return false;
    }
};

MembershipChecker::MembershipChecker(const BracketAlphabet& ba) : impl_(std::make_unique<Impl>(ba)) {}
MembershipChecker::~MembershipChecker() = default;
MembershipChecker::MembershipChecker(MembershipChecker&&) noexcept = default;
MembershipChecker& MembershipChecker::operator=(MembershipChecker&&) noexcept = default;

bool MembershipChecker::operator()(const Word& word) { return impl_->member(encode(impl_->ba, word)); }

bool MembershipChecker::trace(const Word& word, std::ostream& log) {
    auto codes = encode(impl_->ba, word);
    log << "isMember(" << impl_->show(codes) << ")\n";
    return impl_->traced(codes, log, 0);
}

bool is_member(const BracketAlphabet& ba, const Word& word) { return MembershipChecker(ba)(word); }

// ---------------------------------------------------------------------------
// Multiple Dyck grammars

Symbol indexed_symbol(const Symbol& delta, std::size_t i) { return delta + "[" + std::to_string(i) + "]"; }
Symbol indexed_bar(const Symbol& delta, std::size_t i) { return "~" + indexed_symbol(delta, i); }

namespace {

std::string sort_nonterminal(std::size_t s) { return "A" + std::to_string(s); }

} // namespace

Grammar multiple_dyck_grammar(const SortedAlphabet& delta, std::size_t r, const DyckGrammarOptions& options) {
    std::size_t k = 1;
    for (const auto& [d, s] : delta) {
        if (s == 0) throw UsageError("symbol '" + d + "' has sort 0; sorts must be at least 1");
        k = std::max(k, s);
    }
    if (r < k) throw UsageError("rank bound " + std::to_string(r) + " is below the maximal sort " + std::to_string(k));
    if (!options.allow_large && (r > 2 || k > 2))
        throw UsageError("rank and sort above 2 exceed the desk-scale guard");

    std::map<std::string, std::size_t> sorts;
    for (std::size_t s = 1; s <= k; ++s) sorts.emplace(sort_nonterminal(s), s);
    std::set<Symbol> terminals;
    for (const auto& [d, s] : delta)
        for (std::size_t i = 1; i <= s; ++i) {
            terminals.insert(indexed_symbol(d, i));
            terminals.insert(indexed_bar(d, i));
        }

    std::vector<Production> productions;
    std::set<std::tuple<std::string, std::vector<std::vector<Token>>, std::vector<std::string>>> seen;
    std::size_t family_counter[4] = {0, 0, 0, 0};
    auto add = [&](int family, const std::string& suffix, std::size_t s, std::vector<std::size_t> arg_sorts,
                   std::vector<std::vector<Token>> comps) {
        std::vector<std::string> rhs;
        for (std::size_t a : arg_sorts) rhs.push_back(sort_nonterminal(a));
        if (!seen.emplace(sort_nonterminal(s), comps, rhs).second) return;
        if (productions.size() >= options.max_rules)
            throw UsageError("multiple Dyck grammar exceeds the cap of " + std::to_string(options.max_rules) + " rules");
        std::string id = std::string(static_cast<std::size_t>(family), 'i') +
                         (suffix.empty() ? std::to_string(++family_counter[family]) : "_" + suffix);
        productions.push_back(
            Production{id, sort_nonterminal(s), Composition(arg_sorts, std::move(comps)), std::move(rhs)});
    };

    // (i) every linear, non-deleting, terminal-free composition of rank <= r and sorts <= k.
    for (std::size_t rank = 0; rank <= r; ++rank) {
        std::vector<std::size_t> arg_sorts(rank, 1);
        while (true) {
            std::vector<Variable> vars;
            for (std::size_t i = 0; i < rank; ++i)
                for (std::size_t j = 0; j < arg_sorts[i]; ++j) vars.push_back(Variable{i, j});
            std::sort(vars.begin(), vars.end());
            for (std::size_t s = 1; s <= k; ++s) {
                auto perm = vars;
                do {
                    // Cut the permutation into s consecutive, possibly empty, pieces.
                    std::vector<std::size_t> cuts(s - 1, 0);
                    while (true) {
                        std::vector<std::vector<Token>> comps(s);
                        std::size_t part = 0;
                        for (std::size_t v = 0; v <= perm.size(); ++v) {
                            while (part < s - 1 && cuts[part] == v) ++part;
                            if (v < perm.size()) comps[part].emplace_back(perm[v]);
                        }
                        add(1, "", s, arg_sorts, std::move(comps));
                        // Next non-decreasing cut vector.
                        std::size_t c = cuts.size();
                        while (c > 0 && cuts[c - 1] == perm.size()) --c;
                        if (c == 0) break;
                        ++cuts[c - 1];
                        for (std::size_t d = c; d < cuts.size(); ++d) cuts[d] = cuts[c - 1];
                    }
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
            std::size_t i = rank;
            while (i > 0 && arg_sorts[i - 1] == k) arg_sorts[--i] = 1;
            if (i == 0) break;
            ++arg_sorts[i - 1];
        }
    }

    // (ii) one rule per symbol wrapping every component in its indexed brackets.
    for (const auto& [d, s] : delta) {
        std::vector<std::vector<Token>> comps;
        for (std::size_t i = 1; i <= s; ++i)
            comps.push_back({Token{indexed_symbol(d, i)}, Token{Variable{0, i - 1}}, Token{indexed_bar(d, i)}});
        add(2, d, s, {s}, std::move(comps));
    }

    // (iii) components padded with a sort-1 bracket pair on either side.
    std::vector<Symbol> unary;
    for (const auto& [d, s] : delta)
        if (s == 1) unary.push_back(d);
    for (std::size_t s = 1; s <= k; ++s) {
        const std::size_t choices = 1 + 2 * unary.size();
        std::vector<std::size_t> pick(s, 0);
        while (true) {
            std::vector<std::vector<Token>> comps;
            for (std::size_t i = 0; i < s; ++i) {
                Token var{Variable{0, i}};
                if (pick[i] == 0) {
                    comps.push_back({var});
                } else {
                    const auto& d = unary[(pick[i] - 1) / 2];
                    Token open{indexed_symbol(d, 1)};
                    Token close{indexed_bar(d, 1)};
                    if ((pick[i] - 1) % 2 == 0)
                        comps.push_back({var, open, close});
                    else
                        comps.push_back({open, close, var});
                }
            }
            add(3, "", s, {s}, std::move(comps));
            std::size_t i = s;
            while (i > 0 && pick[i - 1] + 1 == choices) pick[--i] = 0;
            if (i == 0) break;
            ++pick[i - 1];
        }
    }

    return make_unweighted(std::move(sorts), std::move(terminals), sort_nonterminal(1), std::move(productions));
}

PartitionGrammar partition_grammar(const BracketAlphabet& ba, std::size_t r, const DyckGrammarOptions& options) {
    if (r < ba.dimension())
        throw UsageError("rank bound " + std::to_string(r) + " is below the dimension " +
                         std::to_string(ba.dimension()));
    SortedAlphabet cells;
    std::map<Symbol, Symbol> relabel;
    for (std::size_t c = 0; c < ba.cells().size(); ++c) {
        auto name = "p" + std::to_string(c + 1);
        const auto& cell = ba.cells()[c];
        cells.emplace(name, cell.size());
        for (std::size_t i = 0; i < cell.size(); ++i) {
            relabel.emplace(indexed_symbol(name, i + 1), cell[i]);
            relabel.emplace(indexed_bar(name, i + 1), ba.bar(cell[i]));
        }
    }
    return {multiple_dyck_grammar(cells, r, options), cells, std::move(relabel)};
}

} // namespace wmcfg
