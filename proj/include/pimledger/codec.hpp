// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Canonical binary encoding shared by everything that is hashed, signed or
// persisted. Integers are big-endian; variable-length fields carry a u32
// length prefix. Layouts are listed in docs/wire.md.

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "pimledger/bytes.hpp"
#include "pimledger/error.hpp"

namespace pimledger {

class Writer {
  public:
    Writer& u8(std::uint8_t v) {
        buf_.push_back(v);
        return *this;
    }
    Writer& u32(std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
        return *this;
    }
    Writer& u64(std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
        return *this;
    }
    Writer& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
    Writer& boolean(bool v) { return u8(v ? 1 : 0); }

    template <std::size_t N>
    Writer& fixed(const std::array<std::uint8_t, N>& a) {
        buf_.insert(buf_.end(), a.begin(), a.end());
        return *this;
    }
    Writer& raw(ByteView data) {
        buf_.insert(buf_.end(), data.begin(), data.end());
        return *this;
    }
    Writer& bytes(ByteView data) {
        if (data.size() > std::numeric_limits<std::uint32_t>::max()) fail(Errc::OutOfRange, "field exceeds u32 length");
        u32(static_cast<std::uint32_t>(data.size()));
        return raw(data);
    }
    Writer& str(std::string_view s) { return bytes(as_bytes(s)); }
    Writer& count(std::size_t n) {
        if (n > std::numeric_limits<std::uint32_t>::max()) fail(Errc::OutOfRange, "collection exceeds u32 count");
        return u32(static_cast<std::uint32_t>(n));
    }

    const Bytes& data() const& { return buf_; }
    Bytes take() && { return std::move(buf_); }
    std::size_t size() const { return buf_.size(); }

  private:
    Bytes buf_;
};

class Reader {
  public:
    explicit Reader(ByteView data) : data_(data) {}

    std::uint8_t u8() { return need(1)[0]; }
    std::uint32_t u32() {
        auto p = need(4);
        std::uint32_t v = 0;
        for (auto b : p) v = (v << 8) | b;
        return v;
    }
    std::uint64_t u64() {
        auto p = need(8);
        std::uint64_t v = 0;
        for (auto b : p) v = (v << 8) | b;
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    bool boolean() {
        const auto v = u8();
        if (v > 1) fail(Errc::Malformed, "boolean byte out of range");
        return v == 1;
    }

    template <std::size_t N>
    std::array<std::uint8_t, N> fixed() {
        auto p = need(N);
        std::array<std::uint8_t, N> out{};
        std::copy(p.begin(), p.end(), out.begin());
        return out;
    }
    ByteView raw(std::size_t n) { return need(n); }
    Bytes bytes() {
        const auto n = u32();
        auto p = need(n);
        return {p.begin(), p.end()};
    }
    std::string str() {
        const auto n = u32();
        auto p = need(n);
        return {reinterpret_cast<const char*>(p.data()), p.size()};
    }
    // A count is bounded by remaining input so corrupt prefixes cannot force huge allocations.
    std::uint32_t count(std::size_t min_element_size = 1) {
        const auto n = u32();
        if (min_element_size > 0 && n > remaining() / min_element_size) fail(Errc::Malformed, "count exceeds input");
        return n;
    }

    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    void expect_done() const {
        if (!done()) fail(Errc::Malformed, "trailing bytes");
    }

  private:
    ByteView need(std::size_t n) {
        if (n > remaining()) fail(Errc::Malformed, "truncated input");
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace pimledger
