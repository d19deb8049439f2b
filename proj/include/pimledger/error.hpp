// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pimledger {

enum class Errc {
    // ledger
    BadSignature,
    BadNonce,
    UnknownContract,
    NonMonotonicTimestamp,
    BrokenChain,
    StateMismatch,
    InsufficientBalance,
    // runtime
    UnknownKind,
    UnknownOperation,
    AccessDenied,
    QuotaExceeded,
    ReadOnlyViolation,
    ReentrancyBlocked,
    // contracts
    EmptyBody,
    InvalidRange,
    NotFound,
    InvalidWindow,
    TextTooLong,
    // codecs
    Malformed,
    OutOfRange,
    InvalidCivil,
    MalformedDateTime,
    MalformedDocument,
    // scorecard
    WrongLength,
    OverrideWithoutRationale,
    MalformedAnswers,
    // io
    Io,
    Transport,
};

constexpr std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::BadSignature: return "BadSignature";
        case Errc::BadNonce: return "BadNonce";
        case Errc::UnknownContract: return "UnknownContract";
        case Errc::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
        case Errc::BrokenChain: return "BrokenChain";
        case Errc::StateMismatch: return "StateMismatch";
        case Errc::InsufficientBalance: return "InsufficientBalance";
        case Errc::UnknownKind: return "UnknownKind";
        case Errc::UnknownOperation: return "UnknownOperation";
        case Errc::AccessDenied: return "AccessDenied";
        case Errc::QuotaExceeded: return "QuotaExceeded";
        case Errc::ReadOnlyViolation: return "ReadOnlyViolation";
        case Errc::ReentrancyBlocked: return "ReentrancyBlocked";
        case Errc::EmptyBody: return "EmptyBody";
        case Errc::InvalidRange: return "InvalidRange";
        case Errc::NotFound: return "NotFound";
        case Errc::InvalidWindow: return "InvalidWindow";
        case Errc::TextTooLong: return "TextTooLong";
        case Errc::Malformed: return "Malformed";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::InvalidCivil: return "InvalidCivil";
        case Errc::MalformedDateTime: return "MalformedDateTime";
        case Errc::MalformedDocument: return "MalformedDocument";
        case Errc::WrongLength: return "WrongLength";
        case Errc::OverrideWithoutRationale: return "OverrideWithoutRationale";
        case Errc::MalformedAnswers: return "MalformedAnswers";
        case Errc::Io: return "Io";
        case Errc::Transport: return "Transport";
    }
    return "Unknown";
}

inline std::optional<Errc> errc_from_string(std::string_view name) {
    for (int i = 0; i <= static_cast<int>(Errc::Transport); ++i)
        if (to_string(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
    return std::nullopt;
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    Errc code_;
    std::string detail_;
};

/// A block that cannot be accepted; carries the offending height.
class BlockError : public Error {
  public:
    BlockError(Errc code, std::uint64_t height, const std::string& message)
        : Error(code, message + " at height " + std::to_string(height)), height_(height) {}

    std::uint64_t height() const noexcept { return height_; }

  private:
    std::uint64_t height_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace pimledger
