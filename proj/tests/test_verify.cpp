#include "support.hpp"

#include "wmcfg/verify.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace wmcfg;
using test::w;

TEST_CASE("theorem check on Example 2.2") {
    auto g = test::example22();
    auto cs = build_decomposition(g);
    auto bound = sufficient_bracket_bound(cs, 4);
    REQUIRE(bound);
    auto r = check_theorem(g, 4, *bound);
    CHECK(r.status == Status::pass);
    CHECK(r.checked == 341);
    CHECK(r.mismatches.empty());

    auto short_bound = check_theorem(g, 4, 10);
    CHECK(short_bound.status == Status::truncated);
}

TEST_CASE("theorem check on an empty language") {
    auto g = test::grammar("rule s: S -> [x1.1](C)\nrule c: C -> ['a' x1.1](C)");
    auto r = check_theorem(g, 3, 30);
    CHECK(r.status == Status::pass);
}

TEST_CASE("theorem check notices a corrupted partition") {
    auto g = test::example22();
    auto cs = build_decomposition(g);
    // Link the cells of r4 and r5: both components of each become interchangeable.
    std::size_t r4 = 0, r5 = 0;
    const auto& cells = cs.brackets.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].front() == opening_bracket("r4", 1)) r4 = i;
        if (cells[i].front() == opening_bracket("r5", 1)) r5 = i;
    }
    cs.brackets = merge_cells(cs.brackets, r4, r5);
    auto bound = sufficient_bracket_bound(cs, 4);
    REQUIRE(bound);
    auto r = check_theorem(g, cs, 4, *bound + 8);
    CHECK(r.status == Status::fail);
    CHECK_FALSE(r.mismatches.empty());
}

TEST_CASE("bijection check") {
    for (const char* file : {"example22.mcfg", "anbn.mcfg", "deleting1.mcfg"}) {
        CAPTURE(file);
        auto r = check_bijection(load_grammar_file(test::data(file)), 4);
        CHECK(r.status == Status::pass);
        CHECK(r.checked > 0);
    }
    auto vacuous = check_bijection(test::example22(), 1);
    CHECK(vacuous.status == Status::pass);
    CHECK(vacuous.checked == 0);

    auto broken = check_bijection(test::example22(), 4, {.corrupt_from_brackets = true});
    CHECK(broken.status == Status::fail);
}

TEST_CASE("Dyck oracle reports") {
    auto ba = load_partition_file(test::data("example32.cells"));
    auto r = check_dyck_oracle(ba, 2, 8);
    CHECK(r.status == Status::pass);
    CHECK(r.checked == 89);
    CHECK(dyck_words(BracketAlphabet({}, {}, {}), 6) == std::set<Word>{Word{}});
    CHECK(dyck_words(ba, 2).size() == 5);
}

TEST_CASE("report formats") {
    Report r;
    r.property = "theorem";
    r.parameters = {{"max-len", "3"}};
    r.checked = 7;
    r.mismatches.push_back({"a c", "1/6", "0"});
    r.status = Status::fail;
    r.notes.push_back("note");
    auto j = nlohmann::json::parse(report_json(r));
    CHECK(j["property"] == "theorem");
    CHECK(j["parameters"]["max-len"] == "3");
    CHECK(j["checked"] == 7);
    CHECK(j["status"] == "fail");
    CHECK(j["mismatches"][0]["expected"] == "1/6");
    CHECK(j["notes"][0] == "note");
    auto text = format_report(r);
    CHECK(text.find("fail") != std::string::npos);
    CHECK(text.find("a c") != std::string::npos);
    CHECK(status_name(Status::truncated) == "truncated");
}

TEST_CASE("a short bracket bound compares only covered lengths") {
    auto g = test::example22();
    auto cs = build_decomposition(g);
    auto r = check_theorem(g, cs, 4, *sufficient_bracket_bound(cs, 2));
    CHECK(r.status == Status::truncated);
    CHECK(r.checked == 85);
    CHECK(r.mismatches.empty());
}
