// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "../support/chain_fixture.hpp"
#include "../support/listing.hpp"
#include "pimledger/scorecard/answers_file.hpp"

using namespace pimledger;
using namespace pimledger::scorecard;
using pimledger::testing::error_of;
using pimledger::testing::read_file;

namespace {

// Answer left to right; the score is the last statement answered true.
int walk_oracle(const Answers& a) {
    int last_true = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) break;
        last_true = static_cast<int>(i) + 1;
    }
    return last_true;
}

Answers bits(unsigned v) {
    Answers a(5);
    for (std::size_t i = 0; i < 5; ++i) a[i] = (v >> i) & 1;
    return a;
}

const std::string kFixture = std::string(PIMLEDGER_SOURCE_DIR) + "/fixtures/paper-eval.toml";

}  // namespace

TEST_CASE("every answer vector matches the left-to-right walk") {
    for (unsigned v = 0; v < 32; ++v) REQUIRE(score_criterion(bits(v)) == walk_oracle(bits(v)));
}

TEST_CASE("worked examples") {
    CHECK(score_criterion({true, true, false, true, true}) == 2);
    CHECK(score_criterion({false, false, false, false, false}) == 0);
    CHECK(score_criterion({true, true, true, true, true}) == 5);
    CHECK(error_of([] { score_criterion({true, true}); }) == Errc::WrongLength);
    CHECK(error_of([] { score_criterion(Answers(6, true)); }) == Errc::WrongLength);
}

TEST_CASE("monotone and independent of answers after the first false") {
    for (unsigned v = 0; v < 32; ++v) {
        for (unsigned bit = 0; bit < 5; ++bit) {
            const unsigned up = v | (1u << bit);
            REQUIRE(score_criterion(bits(up)) >= score_criterion(bits(v)));
        }
        const int s = score_criterion(bits(v));
        if (s < 5) {
            // Everything after position s+1 (the first false) is irrelevant.
            for (unsigned tail = 0; tail < (1u << (4 - s)); ++tail) {
                const unsigned prefix = v & ((1u << (s + 1)) - 1);
                REQUIRE(score_criterion(bits(prefix | (tail << (s + 1)))) == s);
            }
        }
    }
}

TEST_CASE("totals span 0 to 25") {
    std::array<Answers, kCriteria> none, all;
    none.fill(Answers(5, false));
    all.fill(Answers(5, true));
    CHECK(score(none).total == 0);
    CHECK(score(all).total == 25);
}

TEST_CASE("overrides need a rationale and a score in range") {
    std::array<Answers, kCriteria> a;
    a.fill(Answers(5, false));
    CHECK(error_of([&] { score(a, {{2, Override{1, ""}}}); }) == Errc::OverrideWithoutRationale);
    CHECK(error_of([&] { score(a, {{2, Override{1, "  \n"}}}); }) == Errc::OverrideWithoutRationale);
    CHECK(error_of([&] { score(a, {{2, Override{6, "why"}}}); }) == Errc::OutOfRange);
    const auto r = score(a, {{2, Override{1, "why"}}});
    CHECK(r.total == 1);
    CHECK(r.criteria[2].computed == 0);
    CHECK(r.criteria[2].overridden());
}

TEST_CASE("the bundled evaluation reproduces the published scores") {
    const auto sheet = parse_answers(read_file(kFixture));
    const auto r = sheet.evaluate();
    std::array<int, 5> got{};
    for (std::size_t i = 0; i < 5; ++i) got[i] = r.criteria[i].score;
    CHECK(got == std::array<int, 5>{0, 3, 1, 1, 2});
    CHECK(r.total == 7);
    CHECK(r.criteria[2].overridden());
    CHECK(r.criteria[2].computed == 0);
    for (std::size_t i : {0u, 1u, 3u, 4u}) CHECK_FALSE(r.criteria[i].overridden());
    CHECK(score(sheet.answers).total == 6);

    const auto text = render_text(sheet, r);
    CHECK(text.find("Storage               0\n") != std::string::npos);
    CHECK(text.find("Accessibility         3\n") != std::string::npos);
    CHECK(text.find("Integrity             1 *\n") != std::string::npos);
    CHECK(text.find("Control & Identity    1\n") != std::string::npos);
    CHECK(text.find("Usability             2\n") != std::string::npos);
    CHECK(text.find("Total                 7 / 25\n") != std::string::npos);
    CHECK(text.find(sheet.overrides.at(2).rationale) != std::string::npos);
    CHECK(render_text(sheet, r) == text);

    const auto j = render_json(sheet, r);
    CHECK(j["total"] == 7);
    CHECK(j["criteria"][2]["rationale"] == sheet.overrides.at(2).rationale);
    CHECK(j["criteria"][3]["name"] == "Control & Identity");
}

TEST_CASE("report without overrides says so") {
    Sheet s;
    s.answers.fill(Answers(5, true));
    const auto text = render_text(s, s.evaluate());
    CHECK(text.find("Overrides\n  (none)\n") != std::string::npos);
    CHECK(text.find(" *") == std::string::npos);
}

TEST_CASE("rubric labels match the guideline table") {
    const auto& r = builtin_rubric();
    CHECK(Rubric::from_json(read_file(std::string(PIMLEDGER_SOURCE_DIR) + "/data/rubric-v1.json")) == r);
    const std::array<std::string_view, 5> names{"Storage", "Accessibility", "Integrity", "Control & Identity",
                                                "Usability"};
    for (std::size_t i = 0; i < 5; ++i) CHECK(r.criteria[i].name == names[i]);
    CHECK(r.criteria[0].statements[0] == "Solution has sufficient capacity for maximal use case.");
    CHECK(r.criteria[0].statements[4] == "Hosted on permissionless DL / DDb > 10,000 nodes.");
    CHECK(r.criteria[1].statements[3] == "DL actively employed for real world use cases, including corporates.");
    CHECK(r.criteria[2].statements[0] == "Source code test coverage > 80%.");
    CHECK(r.criteria[3].statements[3] == "DApp implements RBAC.");
    CHECK(r.criteria[3].statements[4] == "DL / DApp implements user-friendly self-sovereignty");
    CHECK(r.criteria[4].statements[4] == "DApp uses native interface.");
}

TEST_CASE("answer file errors") {
    const std::string ok =
        "[storage]\nanswers=[true,false,false,false,false]\n"
        "[accessibility]\nanswers=[true,false,false,false,false]\n"
        "[integrity]\nanswers=[true,false,false,false,false]\n"
        "[control_identity]\nanswers=[true,false,false,false,false]\n"
        "[usability]\nanswers = [ true , false, false, false, false, ] # trailing comma\n";
    CHECK(parse_answers(ok).evaluate().total == 5);
    const auto err = [](const std::string& s) { return error_of([&] { parse_answers(s); }); };
    CHECK(err("[storage]\nanswers=[true,true,true,true,true]\n") == Errc::MalformedAnswers);  // others missing
    CHECK(err(ok + "[storage]\n") == Errc::MalformedAnswers);
    CHECK(err("[nope]\n" + ok) == Errc::MalformedAnswers);
    CHECK(err("colour = \"blue\"\n" + ok) == Errc::MalformedAnswers);
    CHECK(err("title = 3\n" + ok) == Errc::MalformedAnswers);
    CHECK(err("title = \"open\n" + ok) == Errc::MalformedAnswers);
    CHECK(err("rubric = \"other\"\n" + ok) == Errc::MalformedAnswers);
    CHECK(err(ok + "rationale = \"no override\"\n") == Errc::MalformedAnswers);
    CHECK(err(ok + "override = 9\nrationale = \"x\"\n") == Errc::OutOfRange);
    auto short_row = ok;
    short_row.replace(short_row.find("[true,false,false,false,false]"), 30, "[true,false]");
    CHECK(err(short_row) == Errc::WrongLength);
    const auto s = parse_answers(ok + "override = 2\n");
    CHECK(error_of([&] { s.evaluate(); }) == Errc::OverrideWithoutRationale);
}
