// Copyright 2026 The pimledger Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Append-only chain file:
//   "PIMCHAIN" | u32 version | bytes suite-name | bytes genesis | frame*
//   frame = u32 length | block encoding
// A trailing partial frame (a writer mid-append) is ignored by readers.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "pimledger/ledger/block.hpp"
#include "pimledger/ledger/state.hpp"

namespace pimledger {

inline constexpr std::string_view kChainMagic = "PIMCHAIN";
inline constexpr std::uint32_t kChainFileVersion = 1;

struct ChainHeader {
    std::string suite;
    Genesis genesis;
};

namespace detail {

inline Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline Bytes frame(ByteView payload) {
    Writer w;
    w.bytes(payload);
    return std::move(w).take();
}

inline void append_bytes(const std::filesystem::path& path, ByteView data) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) fail(Errc::Io, "cannot append to " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) fail(Errc::Io, "write failed on " + path.string());
}

}  // namespace detail

inline Bytes encode_chain_header(const ChainHeader& h) {
    Writer w;
    w.raw(as_bytes(kChainMagic)).u32(kChainFileVersion).str(h.suite).bytes(h.genesis.encode());
    return std::move(w).take();
}

/// Encodes a whole chain in file format; the inverse of ChainReader over a complete file.
inline Bytes encode_chain(const ChainHeader& h, std::span<const Block> blocks) {
    Bytes out = encode_chain_header(h);
    for (const auto& b : blocks) {
        auto f = detail::frame(b.encode());
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

/// Incremental reader over chain-file bytes. Malformed frames raise BlockError
/// carrying the height the frame would have had.
class ChainReader {
  public:
    explicit ChainReader(ByteView data) { reset(data); }
    ChainReader() = default;

    const ChainHeader& header() const { return header_; }

    // Re-reads from scratch; callers pass the whole current file contents.
    void reset(ByteView data) {
        Reader r(data);
        const auto magic = r.raw(kChainMagic.size());
        if (!std::equal(magic.begin(), magic.end(), kChainMagic.begin())) fail(Errc::Malformed, "not a chain file");
        if (r.u32() != kChainFileVersion) fail(Errc::Malformed, "unsupported chain file version");
        header_.suite = r.str();
        header_.genesis = Genesis::decode(r.bytes());
        offset_ = data.size() - r.remaining();
        next_height_ = 0;
    }

    /// Blocks fully present in `data` beyond what earlier calls returned.
    std::vector<Block> next_blocks(ByteView data) {
        std::vector<Block> out;
        while (data.size() >= offset_ + 4) {
            Reader len(data.subspan(offset_, 4));
            const std::size_t n = len.u32();
            if (data.size() < offset_ + 4 + n) break;
            Block b;
            try {
                b = Block::decode(data.subspan(offset_ + 4, n));
            } catch (const Error& e) {
                throw BlockError(Errc::StateMismatch, next_height_, std::string("undecodable block (") + e.what() + ")");
            }
            offset_ += 4 + n;
            ++next_height_;
            out.push_back(std::move(b));
        }
        return out;
    }

    std::size_t offset() const { return offset_; }

  private:
    ChainHeader header_;
    std::size_t offset_ = 0;
    std::uint64_t next_height_ = 0;
};

class ChainFile {
  public:
    static void create(const std::filesystem::path& path, const ChainHeader& header) {
        if (std::filesystem::exists(path)) fail(Errc::Io, path.string() + " already exists");
        detail::append_bytes(path, encode_chain_header(header));
    }

    static void append(const std::filesystem::path& path, const Block& block) {
        detail::append_bytes(path, detail::frame(block.encode()));
    }

    struct Contents {
        ChainHeader header;
        std::vector<Block> blocks;
    };

    static Contents load(const std::filesystem::path& path) {
        const Bytes data = detail::read_file(path);
        ChainReader reader(data);
        Contents c{reader.header(), reader.next_blocks(data)};
        if (reader.offset() != data.size())
            throw BlockError(Errc::StateMismatch, c.blocks.size(), "truncated block frame at end of " + path.string());
        return c;
    }

    static Bytes read_all(const std::filesystem::path& path) { return detail::read_file(path); }
};

}  // namespace pimledger
