// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Digital-preservation scorecard: five criteria of five ordered statements.
// Statements are answered left to right and a criterion scores the position
// of the last true answer reached before the first false one.

#include <array>
#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pimledger/error.hpp"

namespace pimledger::scorecard {

inline constexpr std::size_t kCriteria = 5;
inline constexpr std::size_t kStatements = 5;
inline constexpr int kMaxTotal = static_cast<int>(kCriteria * kStatements);

struct Criterion {
    std::string key;
    std::string name;
    std::array<std::string, kStatements> statements;

    bool operator==(const Criterion&) const = default;
};

struct Rubric {
    std::string id;
    int version = 0;
    std::array<Criterion, kCriteria> criteria;

    bool operator==(const Rubric&) const = default;

    std::optional<std::size_t> index_of(std::string_view key) const {
        for (std::size_t i = 0; i < kCriteria; ++i)
            if (criteria[i].key == key) return i;
        return std::nullopt;
    }

    static Rubric from_json(std::string_view text) {
        Rubric r;
        try {
            const auto j = nlohmann::json::parse(text);
            r.id = j.at("id").get<std::string>();
            r.version = j.at("version").get<int>();
            const auto& cs = j.at("criteria");
            if (!cs.is_array() || cs.size() != kCriteria) fail(Errc::WrongLength, "rubric must have 5 criteria");
            for (std::size_t i = 0; i < kCriteria; ++i) {
                auto& c = r.criteria[i];
                c.key = cs[i].at("key").get<std::string>();
                c.name = cs[i].at("name").get<std::string>();
                const auto& st = cs[i].at("statements");
                if (!st.is_array() || st.size() != kStatements)
                    fail(Errc::WrongLength, c.name + " must have 5 statements");
                for (std::size_t k = 0; k < kStatements; ++k) c.statements[k] = st[k].get<std::string>();
            }
        } catch (const nlohmann::json::exception& e) {
            fail(Errc::Malformed, std::string("rubric: ") + e.what());
        }
        return r;
    }
};

namespace detail {

// Same content as data/rubric-v1.json; a test keeps the two in step.
inline constexpr std::string_view kRubricV1 = R"({
  "id": "pimledger-rubric-v1",
  "version": 1,
  "criteria": [
    {"key": "storage", "name": "Storage", "statements": [
      "Solution has sufficient capacity for maximal use case.",
      "Data hosted in more than one location, in standardised format.",
      "Data hosted in multiple global locations.",
      "Hosted on permissionless DL / DDb < 10,000 nodes.",
      "Hosted on permissionless DL / DDb > 10,000 nodes."]},
    {"key": "accessibility", "name": "Accessibility", "statements": [
      "DL has active developer base.",
      "DL has open source ecosystem.",
      "DL has active research community.",
      "DL actively employed for real world use cases, including corporates.",
      "DL actively employed for real world use cases, including government."]},
    {"key": "integrity", "name": "Integrity", "statements": [
      "Source code test coverage > 80%.",
      "DApp uses industry standard libraries.",
      "DL sufficiently mature and stable.",
      "Smart contracts have been audited.",
      "Smart contracts are formally verified."]},
    {"key": "control_identity", "name": "Control & Identity", "statements": [
      "DApp identifies users.",
      "DApp encrypts personal data.",
      "DApp permits transfer of ownership.",
      "DApp implements RBAC.",
      "DL / DApp implements user-friendly self-sovereignty"]},
    {"key": "usability", "name": "Usability", "statements": [
      "User can complete use case.",
      "DApp is performant.",
      "DApp scales for multiple users.",
      "DApp uses human readable attributes.",
      "DApp uses native interface."]}
  ]
})";

}  // namespace detail

inline const Rubric& builtin_rubric() {
    static const Rubric r = Rubric::from_json(detail::kRubricV1);
    return r;
}

/// Answers for one criterion, statement 1 first.
using Answers = std::vector<bool>;

inline int score_criterion(const Answers& answers) {
    if (answers.size() != kStatements)
        fail(Errc::WrongLength, "expected 5 answers, got " + std::to_string(answers.size()));
    int score = 0;
    while (score < static_cast<int>(kStatements) && answers[static_cast<std::size_t>(score)]) ++score;
    return score;
}

struct Override {
    int score = 0;
    std::string rationale;
};

/// Keyed by criterion index.
using Overrides = std::map<std::size_t, Override>;

struct CriterionResult {
    int computed = 0;
    int score = 0;
    std::optional<std::string> rationale;  // set iff overridden

    bool overridden() const { return rationale.has_value(); }
};

struct ScorecardResult {
    std::array<CriterionResult, kCriteria> criteria;
    int total = 0;
};

inline ScorecardResult score(const std::array<Answers, kCriteria>& answers, const Overrides& overrides = {}) {
    ScorecardResult res;
    for (std::size_t i = 0; i < kCriteria; ++i) {
        res.criteria[i].computed = score_criterion(answers[i]);
        res.criteria[i].score = res.criteria[i].computed;
    }
    for (const auto& [idx, o] : overrides) {
        if (idx >= kCriteria) fail(Errc::OutOfRange, "override for unknown criterion");
        if (o.rationale.find_first_not_of(" \t\r\n") == std::string::npos)
            fail(Errc::OverrideWithoutRationale, "override of " + builtin_rubric().criteria[idx].name + " has no rationale");
        if (o.score < 0 || o.score > static_cast<int>(kStatements))
            fail(Errc::OutOfRange, "override score must be 0..5");
        res.criteria[idx].score = o.score;
        res.criteria[idx].rationale = o.rationale;
    }
    for (const auto& c : res.criteria) res.total += c.score;
    return res;
}

/// A filled-in answers file.
struct Sheet {
    std::string title;
    std::string rubric_id;
    std::array<Answers, kCriteria> answers;
    Overrides overrides;

    ScorecardResult evaluate() const { return score(answers, overrides); }
};

inline std::string render_text(const Sheet& sheet, const ScorecardResult& res, const Rubric& rubric = builtin_rubric()) {
    std::string out;
    const auto line = [&out](std::string_view s) { out.append(s).append("\n"); };
    const auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    line("Scorecard: " + (sheet.title.empty() ? std::string("(untitled)") : sheet.title));
    line("Rubric: " + rubric.id);
    line("");
    line(pad("Criteria", 22) + "Score");
    for (std::size_t i = 0; i < kCriteria; ++i) {
        const auto& c = res.criteria[i];
        line(pad(rubric.criteria[i].name, 22) + std::to_string(c.score) + (c.overridden() ? " *" : ""));
    }
    line(pad("Total", 22) + std::to_string(res.total) + " / " + std::to_string(kMaxTotal));
    line("");
    line("Answers");
    for (std::size_t i = 0; i < kCriteria; ++i) {
        line("  " + rubric.criteria[i].name);
        for (std::size_t k = 0; k < kStatements; ++k)
            line(std::string("    ") + std::to_string(k + 1) + " [" + (sheet.answers[i][k] ? "x" : " ") + "] " +
                 rubric.criteria[i].statements[k]);
    }
    line("");
    line("Overrides");
    bool any = false;
    for (std::size_t i = 0; i < kCriteria; ++i) {
        const auto& c = res.criteria[i];
        if (!c.overridden()) continue;
        any = true;
        line("  * " + rubric.criteria[i].name + ": computed " + std::to_string(c.computed) + ", awarded " +
             std::to_string(c.score) + ". " + *c.rationale);
    }
    if (!any) line("  (none)");
    return out;
}

inline nlohmann::ordered_json render_json(const Sheet& sheet, const ScorecardResult& res,
                                          const Rubric& rubric = builtin_rubric()) {
    nlohmann::ordered_json j;
    j["title"] = sheet.title;
    j["rubric"] = rubric.id;
    auto& cs = j["criteria"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < kCriteria; ++i) {
        const auto& c = res.criteria[i];
        nlohmann::ordered_json e;
        e["key"] = rubric.criteria[i].key;
        e["name"] = rubric.criteria[i].name;
        e["answers"] = sheet.answers[i];
        e["computed"] = c.computed;
        e["score"] = c.score;
        e["overridden"] = c.overridden();
        if (c.rationale) e["rationale"] = *c.rationale;
        cs.push_back(std::move(e));
    }
    j["total"] = res.total;
    j["max"] = kMaxTotal;
    return j;
}

}  // namespace pimledger::scorecard
