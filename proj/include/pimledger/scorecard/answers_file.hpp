// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reader for scorecard answer files, a small subset of TOML:
//
//   title = "Ethereum Calendar"
//   rubric = "pimledger-rubric-v1"
//
//   [integrity]
//   answers = [false, true, false, false, false]
//   override = 1
//   rationale = "..."
//
// Only '#' comments, basic strings, integers, booleans and single-line arrays
// of booleans are understood. Every criterion table must be present.

#include <charconv>
#include <string>
#include <string_view>
#include <variant>

#include "pimledger/scorecard/scorecard.hpp"

namespace pimledger::scorecard {

namespace detail {

using Value = std::variant<std::string, std::int64_t, bool, Answers>;

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class LineParser {
  public:
    LineParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

    [[noreturn]] void error(const std::string& what) const {
        fail(Errc::MalformedAnswers, "line " + std::to_string(line_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }

    // Nothing but whitespace or a comment may follow.
    void expect_end() {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] != '#') error("unexpected trailing text");
    }

    std::string key() {
        skip_ws();
        const auto start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
            ++pos_;
        if (pos_ == start) error("expected a key");
        return std::string(s_.substr(start, pos_ - start));
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != c) error(std::string("expected '") + c + "'");
        ++pos_;
    }

    Value value() {
        skip_ws();
        if (pos_ >= s_.size()) error("missing value");
        const char c = s_[pos_];
        if (c == '"') return string();
        if (c == '[') return array();
        if (s_.substr(pos_, 4) == "true") return pos_ += 4, true;
        if (s_.substr(pos_, 5) == "false") return pos_ += 5, false;
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc()) error("unsupported value");
        pos_ = static_cast<std::size_t>(p - s_.data());
        return v;
    }

  private:
    std::string string() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            char c = s_[pos_++];
            if (c != '\\') {
                out += c;
                continue;
            }
            if (pos_ >= s_.size()) break;
            switch (s_[pos_++]) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: error("unsupported escape in string");
            }
        }
        if (pos_ >= s_.size()) error("unterminated string");
        ++pos_;
        return out;
    }

    Answers array() {
        ++pos_;
        Answers out;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') return ++pos_, out;
        for (;;) {
            auto v = value();
            if (!std::holds_alternative<bool>(v)) error("arrays may only hold booleans");
            out.push_back(std::get<bool>(v));
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == ',') {
                ++pos_;
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == ']') return ++pos_, out;  // trailing comma
                continue;
            }
            expect(']');
            return out;
        }
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Sheet parse_answers(std::string_view text, const Rubric& rubric = builtin_rubric()) {
    Sheet sheet;
    std::array<bool, kCriteria> have_answers{};
    std::array<std::optional<std::int64_t>, kCriteria> override_score;
    std::array<std::optional<std::string>, kCriteria> rationale;
    std::optional<std::size_t> table;
    std::vector<std::string> seen_top;
    std::array<std::vector<std::string>, kCriteria> seen_in;
    std::array<bool, kCriteria> table_seen{};

    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;

        detail::LineParser p(line, line_no);
        if (line.front() == '[') {
            p.expect('[');
            const auto name = p.key();
            p.expect(']');
            p.expect_end();
            const auto idx = rubric.index_of(name);
            if (!idx) p.error("unknown criterion [" + name + "]");
            if (table_seen[*idx]) p.error("duplicate table [" + name + "]");
            table_seen[*idx] = true;
            table = idx;
            continue;
        }

        const auto key = p.key();
        p.expect('=');
        auto value = p.value();
        p.expect_end();
        auto& seen = table ? seen_in[*table] : seen_top;
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) p.error("duplicate key " + key);
        seen.push_back(key);

        const auto want = [&](auto* tag) -> decltype(auto) {
            using T = std::remove_pointer_t<decltype(tag)>;
            if (!std::holds_alternative<T>(value)) p.error("wrong type for " + key);
            return std::get<T>(value);
        };
        if (!table) {
            if (key == "title") sheet.title = want(static_cast<std::string*>(nullptr));
            else if (key == "rubric") sheet.rubric_id = want(static_cast<std::string*>(nullptr));
            else p.error("unknown key " + key);
            continue;
        }
        const auto i = *table;
        if (key == "answers") {
            sheet.answers[i] = want(static_cast<Answers*>(nullptr));
            have_answers[i] = true;
        } else if (key == "override") {
            override_score[i] = want(static_cast<std::int64_t*>(nullptr));
        } else if (key == "rationale") {
            rationale[i] = want(static_cast<std::string*>(nullptr));
        } else {
            p.error("unknown key " + key);
        }
    }

    if (!sheet.rubric_id.empty() && sheet.rubric_id != rubric.id)
        fail(Errc::MalformedAnswers, "answers are for rubric " + sheet.rubric_id + ", not " + rubric.id);
    for (std::size_t i = 0; i < kCriteria; ++i) {
        const auto& name = rubric.criteria[i].key;
        if (!have_answers[i]) fail(Errc::MalformedAnswers, "missing answers for [" + name + "]");
        if (sheet.answers[i].size() != kStatements)
            fail(Errc::WrongLength, "[" + name + "] needs 5 answers, has " + std::to_string(sheet.answers[i].size()));
        if (rationale[i] && !override_score[i]) fail(Errc::MalformedAnswers, "[" + name + "] has a rationale but no override");
        if (override_score[i]) {
            if (*override_score[i] < 0 || *override_score[i] > static_cast<std::int64_t>(kStatements))
                fail(Errc::OutOfRange, "[" + name + "] override must be 0..5");
            sheet.overrides[i] = Override{static_cast<int>(*override_score[i]), rationale[i].value_or("")};
        }
    }
    return sheet;
}

}  // namespace pimledger::scorecard
