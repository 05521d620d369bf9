#include "support.hpp"

#include "wmcfg/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wmcfg;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("weight") {
    auto g = test::data("example22.mcfg");
    CHECK(run({"weight", g, "--", "a", "c"}).out == "1/6\n");
    CHECK(run({"weight", g}).out == "1/3\n");
    CHECK(run({"weight", g, "--cs", "--", "a", "c"}).out == "1/6\n");
    CHECK(run({"weight", g, "--", "b", "a"}).out == "0\n");
    auto cut = run({"weight", g, "--height", "2", "--", "a", "c"});
    CHECK(cut.out == "0\n");
    CHECK(cut.err.find("warning") != std::string::npos);

    auto j = nlohmann::json::parse(run({"--json", "weight", g, "--", "a", "c"}).out);
    CHECK(j["command"] == "weight");
    CHECK(j["result"]["weight"] == "1/6");
    CHECK(j["inputs"]["word"] == nlohmann::json::array({"a", "c"}));
    CHECK(nlohmann::json::parse(run({"weight", g, "--json"}).out)["result"]["weight"] == "1/3");
}

TEST_CASE("derivations and separation") {
    auto g = test::data("example22.mcfg");
    CHECK(run({"derivations", g, "--", "a", "c"}).out == "r1(r2(r4), r5) @ 1/6\n");
    auto sep = run({"separate", g});
    CHECK(sep.code == 0);
    CHECK(sep.out.find("# weights") != std::string::npos);
    CHECK(sep.out.find("'r2^1' 'a' x1.1") != std::string::npos);
    auto dec = run({"decompose", g});
    for (const char* section : {"# partition", "# automaton", "# projection"})
        CHECK(dec.out.find(section) != std::string::npos);
}

TEST_CASE("to-deriv, to-brackets and from-brackets") {
    auto g = test::data("example22.mcfg");
    auto d = run({"to-deriv", g, "--", "r1^1", "r2^1", "a", "r4^1", "r5^1", "r2^2", "c", "r4^2", "r5^2"});
    CHECK(d.code == 0);
    CHECK(d.out == "ε r1\n1 r2\n11 r4\n2 r5\n");
    CHECK(run({"to-deriv", g, "--", "a"}).code == 2);

    auto path = std::filesystem::temp_directory_path() / "wmcfg-listing.txt";
    {
        std::ofstream f(path);
        f << d.out;
    }
    auto b = run({"to-brackets", g, path.string()});
    CHECK(b.code == 0);
    auto word = parse_word(b.out);
    CHECK(word.front() == "[r1.1");
    std::vector<std::string> args{"from-brackets", g, "--"};
    args.insert(args.end(), word.begin(), word.end());
    CHECK(run(args).out == d.out);
    std::filesystem::remove(path);
    CHECK(run({"from-brackets", g, "--", "[r1.1"}).code == 2);
}

TEST_CASE("dyck-member and split") {
    auto p = test::data("example32.cells");
    auto yes = run({"dyck-member", p, "--", "⟦", "(", ")", "⟧", "[", "⟨", "⟩", "]"});
    CHECK(yes.code == 0);
    CHECK(yes.out == "1\n");
    auto no = run({"dyck-member", p, "--trace", "--", "⟦", "(", ")", "⟧", "⟨", "[", "]", "⟩"});
    CHECK(no.code == 1);
    CHECK(no.out.find("l.13: return 0") != std::string::npos);
    CHECK(run({"split", p, "--", "(", ")", "⟨", "⟩"}).out == "( )\n⟨ ⟩\n");
    CHECK(run({"split", p, "--", "(", "⟩"}).code == 2);
}

TEST_CASE("mdg") {
    auto r = run({"mdg", "--", "δ:2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("'δ[1]' x1.1 '~δ[1]'") != std::string::npos);
    CHECK(run({"mdg", "--", "δ"}).code == 2);
    CHECK(run({"mdg", "--", "δ:3"}).code == 2);
    CHECK(run({"mdg", "--rank", "3", "--allow-large", "--", "δ:1"}).code == 0);
}

TEST_CASE("verify") {
    CHECK(run({"verify", test::data("example22.mcfg"), "--max-len", "3"}).code == 0);
    CHECK(run({"verify", test::data("example22.mcfg"), "--max-len", "3", "--bracket-bound", "8"}).code == 3);
    CHECK(run({"verify", test::data("anbn.mcfg"), "--property", "bijection", "--height", "3"}).code == 0);
    auto oracle = run({"verify", test::data("example32.cells"), "--property", "dyck-oracle", "--max-len", "6"});
    CHECK(oracle.code == 0);
    CHECK(oracle.out.find("pass") != std::string::npos);
    auto j = nlohmann::json::parse(run({"--json", "verify", test::data("anbn.mcfg"), "--max-len", "2"}).out);
    CHECK(j["result"]["status"] == "pass");
}

TEST_CASE("usage and input errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"weight", "/nonexistent.mcfg"}).code == 2);
    CHECK(run({"verify", test::data("anbn.mcfg"), "--property", "nope"}).code == 2);
    CHECK(run({"weight", test::data("example32.cells")}).code == 2);
}
