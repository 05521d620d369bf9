#include "wmcfg/cli.hpp"

#include "wmcfg/dyck.hpp"
#include "wmcfg/error.hpp"
#include "wmcfg/generator.hpp"
#include "wmcfg/grammar.hpp"
#include "wmcfg/transform.hpp"
#include "wmcfg/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace wmcfg {

namespace {

using Json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_input = 2;
constexpr int exit_truncated = 3;

std::string show(const Word& w) { return w.empty() ? "ε" : format_word(w); }

struct Context {
    std::ostream& out;
    std::ostream& err;
    Word word;
    bool json = false;

    void emit(const std::string& command, Json inputs, Json result) const {
        Json j;
        j["command"] = command;
        j["inputs"] = std::move(inputs);
        j["result"] = std::move(result);
        out << j.dump(2) << "\n";
    }
};

Json word_json(const Word& w) { return Json(w); }

Json listing_json(const Grammar& g, const Derivation& d) {
    Json rows = Json::array();
    for (const auto& [pos, id] : derivation_listing(g, d)) rows.push_back({{"position", format_position(pos)}, {"rule", id}});
    return rows;
}

void print_listing(std::ostream& out, const Grammar& g, const Derivation& d) {
    for (const auto& [pos, id] : derivation_listing(g, d)) out << format_position(pos) << ' ' << id << "\n";
}

std::vector<std::pair<Position, std::string>> read_listing(const std::string& path) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (path != "-") {
        file.open(path);
        if (!file) throw UsageError("cannot read derivation listing " + path);
        in = &file;
    }
    std::vector<std::pair<Position, std::string>> listing;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(*in, line)) {
        ++line_no;
        auto tokens = parse_word(line);
        if (tokens.empty() || tokens.front().starts_with("#")) continue;
        if (tokens.size() != 2) throw ParseError("expected '<position> <rule-id>'", line_no);
        listing.emplace_back(parse_position(tokens[0]), tokens[1]);
    }
    return listing;
}

/// Height bound covering every derivation of words of this length, if finite.
std::optional<std::size_t> covering_height(const Grammar& g, std::size_t length) {
    const Grammar nondeleting = g.is_non_deleting() ? g : to_nondeleting(g).grammar;
    auto growth = derivation_growth(nondeleting, length);
    if (growth.unbounded) return std::nullopt;
    return growth.any ? growth.max_height : 0;
}

int cmd_weight(const Context& ctx, const std::string& file, std::optional<std::size_t> height, bool via_cs,
               std::optional<std::size_t> bracket_bound) {
    auto g = load_grammar_file(file);
    SemanticsResult r{Weight::zero(g.algebra()), 0, false};
    std::size_t bound = 0;
    if (via_cs) {
        auto cs = build_decomposition(g);
        auto sufficient = sufficient_bracket_bound(cs, ctx.word.size());
        bound = bracket_bound.value_or(sufficient.value_or(0));
        r = weighted_cs_semantics(cs, ctx.word, bound);
    } else {
        auto covering = covering_height(g, ctx.word.size());
        bound = height.value_or(covering.value_or(0));
        r = weighted_semantics(g, ctx.word, bound);
    }
    if (ctx.json) {
        ctx.emit("weight", {{"grammar", file}, {"word", word_json(ctx.word)}, {"via", via_cs ? "cs" : "derivations"},
                            {via_cs ? "bracket_bound" : "height", bound}},
                 {{"weight", r.value.to_string()}, {"derivations", r.derivation_count}, {"truncated", r.truncated}});
    } else {
        ctx.out << r.value.to_string() << "\n";
        if (r.truncated) ctx.err << "warning: the bound " << bound << " may miss derivations of this word\n";
    }
    return exit_ok;
}

int cmd_derivations(const Context& ctx, const std::string& file, std::optional<std::size_t> height) {
    auto g = load_grammar_file(file);
    auto covering = covering_height(g, ctx.word.size());
    std::size_t h = height.value_or(covering.value_or(0));
    auto ds = derivations_of(g, ctx.word, h);
    bool truncated = !covering || *covering > h;
    if (ctx.json) {
        Json rows = Json::array();
        for (const auto& d : ds)
            rows.push_back({{"term", format_derivation(g, d)}, {"weight", derivation_weight(g, d).to_string()}});
        ctx.emit("derivations", {{"grammar", file}, {"word", word_json(ctx.word)}, {"height", h}},
                 {{"derivations", rows}, {"truncated", truncated}});
    } else {
        for (const auto& d : ds) ctx.out << format_derivation(g, d) << " @ " << derivation_weight(g, d).to_string() << "\n";
        if (truncated) ctx.err << "warning: the height " << h << " may miss derivations of this word\n";
    }
    return exit_ok;
}

int cmd_separate(const Context& ctx, const std::string& file) {
    auto cs = build_decomposition(load_grammar_file(file));
    const auto& sep = cs.separation;
    if (ctx.json) {
        ctx.emit("separate", {{"grammar", file}},
                 {{"boolean_grammar", format_grammar(sep.boolean_grammar)}, {"weights", format_hom(sep.weight_hom)}});
    } else {
        ctx.out << format_grammar(sep.boolean_grammar) << "\n# weights\n" << format_hom(sep.weight_hom);
    }
    return exit_ok;
}

int cmd_to_deriv(const Context& ctx, const std::string& file) {
    auto cs = build_decomposition(load_grammar_file(file));
    auto d = to_deriv(cs.separation, ctx.word);
    if (ctx.json)
        ctx.emit("to-deriv", {{"grammar", file}, {"word", word_json(ctx.word)}},
                 {{"term", format_derivation(cs.normalized(), d)}, {"listing", listing_json(cs.normalized(), d)}});
    else
        print_listing(ctx.out, cs.normalized(), d);
    return exit_ok;
}

int cmd_decompose(const Context& ctx, const std::string& file) {
    auto cs = build_decomposition(load_grammar_file(file));
    if (ctx.json) {
        ctx.emit("decompose", {{"grammar", file}},
                 {{"empty_language", cs.empty_language},
                  {"partition", format_partition(cs.brackets)},
                  {"automaton", format_fsa(cs.automaton)},
                  {"projection", format_hom(cs.projection)}});
    } else {
        ctx.out << "# partition\n" << format_partition(cs.brackets) << "\n# automaton\n" << format_fsa(cs.automaton)
                << "\n# projection\n" << format_hom(cs.projection);
    }
    return exit_ok;
}

int cmd_to_brackets(const Context& ctx, const std::string& file, const std::string& listing_path) {
    auto cs = build_decomposition(load_grammar_file(file));
    auto d = derivation_from_listing(cs.normalized(), read_listing(listing_path));
    check_well_sorted(cs.normalized(), d, cs.normalized().initial());
    auto u = to_brackets(cs.boolean_grammar(), d);
    if (ctx.json)
        ctx.emit("to-brackets", {{"grammar", file}, {"listing", listing_path}}, {{"brackets", word_json(u)}});
    else
        ctx.out << show(u) << "\n";
    return exit_ok;
}

int cmd_from_brackets(const Context& ctx, const std::string& file) {
    auto cs = build_decomposition(load_grammar_file(file));
    auto d = from_brackets(cs.boolean_grammar(), ctx.word);
    if (ctx.json)
        ctx.emit("from-brackets", {{"grammar", file}, {"word", word_json(ctx.word)}},
                 {{"term", format_derivation(cs.normalized(), d)}, {"listing", listing_json(cs.normalized(), d)}});
    else
        print_listing(ctx.out, cs.normalized(), d);
    return exit_ok;
}

int cmd_dyck_member(const Context& ctx, const std::string& file, bool trace) {
    auto ba = load_partition_file(file);
    MembershipChecker checker(ba);
    std::ostringstream log;
    bool member = trace ? checker.trace(ctx.word, log) : checker(ctx.word);
    if (ctx.json) {
        Json result{{"member", member}};
        if (trace) result["trace"] = log.str();
        ctx.emit("dyck-member", {{"partition", file}, {"word", word_json(ctx.word)}}, result);
    } else {
        ctx.out << log.str() << (member ? "1" : "0") << "\n";
    }
    return member ? exit_ok : exit_negative;
}

int cmd_split(const Context& ctx, const std::string& file) {
    auto ba = load_partition_file(file);
    auto parts = split(ba, ctx.word);
    if (ctx.json) {
        Json rows = Json::array();
        for (const auto& p : parts) rows.push_back(word_json(p));
        ctx.emit("split", {{"partition", file}, {"word", word_json(ctx.word)}}, {{"components", rows}});
    } else {
        for (const auto& p : parts) ctx.out << show(p) << "\n";
    }
    return exit_ok;
}

int cmd_mdg(const Context& ctx, std::size_t rank, bool allow_large) {
    SortedAlphabet delta;
    for (const auto& token : ctx.word) {
        auto colon = token.rfind(':');
        std::size_t sort = 0;
        if (colon == std::string::npos || colon == 0 || colon + 1 == token.size() ||
            !std::all_of(token.begin() + static_cast<std::ptrdiff_t>(colon) + 1, token.end(),
                         [](char c) { return c >= '0' && c <= '9'; }))
            throw ParseError("expected '<symbol>:<sort>', got '" + token + "'");
        sort = std::stoul(token.substr(colon + 1));
        if (!delta.emplace(token.substr(0, colon), sort).second)
            throw ParseError("symbol '" + token.substr(0, colon) + "' given twice");
    }
    DyckGrammarOptions options;
    options.allow_large = allow_large;
    auto g = multiple_dyck_grammar(delta, rank, options);
    if (ctx.json)
        ctx.emit("mdg", {{"alphabet", word_json(ctx.word)}, {"rank", rank}},
                 {{"rules", g.productions().size()}, {"grammar", format_grammar(g)}});
    else
        ctx.out << format_grammar(g);
    return exit_ok;
}

int cmd_verify(const Context& ctx, const std::string& file, const std::string& property, std::size_t max_len,
               std::optional<std::size_t> bracket_bound, std::size_t height) {
    Report report;
    Json inputs{{"file", file}, {"property", property}};
    if (property == "theorem") {
        auto g = load_grammar_file(file);
        auto cs = build_decomposition(g);
        std::size_t bound = bracket_bound.value_or(sufficient_bracket_bound(cs, max_len).value_or(0));
        inputs["max_len"] = max_len;
        inputs["bracket_bound"] = bound;
        report = check_theorem(g, cs, max_len, bound);
    } else if (property == "bijection") {
        BijectionOptions options;
        options.bracket_bound = bracket_bound;
        inputs["height"] = height;
        report = check_bijection(load_grammar_file(file), height, options);
    } else if (property == "dyck-oracle") {
        auto ba = load_partition_file(file);
        std::size_t rank = std::max<std::size_t>(ba.dimension(), 2);
        inputs["max_len"] = max_len;
        inputs["rank"] = rank;
        report = check_dyck_oracle(ba, rank, max_len);
    } else {
        throw UsageError("unknown property '" + property + "'");
    }
    if (ctx.json)
        ctx.emit("verify", inputs, Json::parse(report_json(report)));
    else
        ctx.out << format_report(report);
    switch (report.status) {
        case Status::pass: return exit_ok;
        case Status::fail: return exit_negative;
        case Status::truncated: return exit_truncated;
    }
    return exit_negative;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto sentinel = std::find(args.begin(), args.end(), "--");
    std::vector<std::string> options(args.begin(), sentinel);
    Context ctx{out, err, {}, false};
    if (sentinel != args.end()) ctx.word.assign(sentinel + 1, args.end());

    CLI::App app{"Weighted multiple context-free grammars and multiple Dyck languages", "wmcfg"};
    app.require_subcommand(1);
    app.add_flag("--json", ctx.json, "Print a JSON envelope {command, inputs, result}");

    std::string file, listing, property = "theorem";
    std::optional<std::size_t> height, bracket_bound;
    std::size_t max_len = 6, rank = 2, bijection_height = 4;
    bool trace = false, via_cs = false, allow_large = false;

    auto* weight = app.add_subcommand("weight", "Weight of the word after -- under the grammar");
    weight->add_option("grammar", file)->required();
    weight->add_option("--height", height, "Derivation height bound (default: covering bound)");
    weight->add_flag("--cs", via_cs, "Compute through the bracket decomposition");
    weight->add_option("--bracket-bound", bracket_bound, "Bracket word length bound for --cs");

    auto* derivations = app.add_subcommand("derivations", "Derivations of the word after --");
    derivations->add_option("grammar", file)->required();
    derivations->add_option("--height", height, "Derivation height bound (default: covering bound)");

    auto* separate = app.add_subcommand("separate", "Unweighted marker grammar and weight homomorphism");
    separate->add_option("grammar", file)->required();

    auto* to_deriv_cmd = app.add_subcommand("to-deriv", "Derivation of a marker word");
    to_deriv_cmd->add_option("grammar", file)->required();

    auto* decompose = app.add_subcommand("decompose", "Bracket partition, automaton and projection");
    decompose->add_option("grammar", file)->required();

    auto* to_brackets_cmd = app.add_subcommand("to-brackets", "Bracket word of a derivation listing");
    to_brackets_cmd->add_option("grammar", file)->required();
    to_brackets_cmd->add_option("listing", listing, "Lines '<position> <rule-id>', or - for stdin")->required();

    auto* from_brackets_cmd = app.add_subcommand("from-brackets", "Derivation listing of a bracket word");
    from_brackets_cmd->add_option("grammar", file)->required();

    auto* dyck_member = app.add_subcommand("dyck-member", "Membership in the congruence multiple Dyck language");
    dyck_member->add_option("partition", file)->required();
    dyck_member->add_flag("--trace", trace, "Log every step of the decision procedure");

    auto* split_cmd = app.add_subcommand("split", "Decompose a Dyck word into its irreducible factors");
    split_cmd->add_option("partition", file)->required();

    auto* mdg = app.add_subcommand("mdg", "Multiple Dyck grammar for the sorted alphabet after -- (symbol:sort)");
    mdg->add_option("--rank", rank, "Rank bound");
    mdg->add_flag("--allow-large", allow_large, "Lift the rank and sort limit of 2");

    auto* verify = app.add_subcommand("verify", "Bounded exhaustive checks");
    verify->add_option("file", file, "Grammar file, or partition file for dyck-oracle")->required();
    verify->add_option("--property", property, "theorem, bijection or dyck-oracle")
        ->check(CLI::IsMember({"theorem", "bijection", "dyck-oracle"}));
    verify->add_option("--max-len", max_len, "Word length bound");
    verify->add_option("--bracket-bound", bracket_bound, "Bracket word length bound (default: sufficient bound)");
    verify->add_option("--height", bijection_height, "Derivation height bound for bijection");

    for (auto* sub : app.get_subcommands({})) sub->add_flag("--json", ctx.json, "Print a JSON envelope");

    try {
        std::vector<std::string> reversed(options.rbegin(), options.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    }

    try {
        if (*weight) return cmd_weight(ctx, file, height, via_cs, bracket_bound);
        if (*derivations) return cmd_derivations(ctx, file, height);
        if (*separate) return cmd_separate(ctx, file);
        if (*to_deriv_cmd) return cmd_to_deriv(ctx, file);
        if (*decompose) return cmd_decompose(ctx, file);
        if (*to_brackets_cmd) return cmd_to_brackets(ctx, file, listing);
        if (*from_brackets_cmd) return cmd_from_brackets(ctx, file);
        if (*dyck_member) return cmd_dyck_member(ctx, file, trace);
        if (*split_cmd) return cmd_split(ctx, file);
        if (*mdg) return cmd_mdg(ctx, rank, allow_large);
        if (*verify) return cmd_verify(ctx, file, property, max_len, bracket_bound, bijection_height);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    }
    return exit_input;
}

} // namespace wmcfg
