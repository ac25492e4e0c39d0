// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_TOKEN_STREAM_HPP
#define VOXTOK_TOKEN_STREAM_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "voxtok/codebook.hpp"
#include "voxtok/grid.hpp"
#include "voxtok/traversal.hpp"

namespace voxtok {

/// Token ids plus what is needed to turn them back into a grid.
struct TokenStream {
    std::vector<TokenId> tokens;
    Dims dims;
    Strategy strategy = Strategy::Snake;
    std::string codebook_id;  // 16 hex digits

    friend bool operator==(const TokenStream&, const TokenStream&) = default;
};

/// Tokenizes `runs`, which must cover exactly dims.volume() cells.
TokenStream tokenize(std::span<const Run> runs, const Codebook& book, const Dims& dims);

/// Concatenates token values and canonicalizes. Throws WrongCodebook on a
/// codebook id mismatch, InvalidTokenError on an id out of range and
/// Consistency when the values do not cover the grid volume.
RleSequence detokenize(const TokenStream& stream, const Codebook& book);

/// grid -> linearize -> RLE -> tokens, using the codebook's strategy.
TokenStream encode_grid(const VoxelGrid& grid, const Codebook& book);
/// Inverse of encode_grid.
VoxelGrid decode_grid(const TokenStream& stream, const Codebook& book);

// Text form:   "SVTK1 <strategy> <W> <D> <H> <codebook-hash>\n" then ids.
// Binary form: "SVTK", u8 version (1), u8 strategy, u16 W/D/H, u64 codebook
//              hash, u32 count, u32 ids; all little-endian.
std::string write_stream_text(const TokenStream& stream);
std::vector<std::uint8_t> write_stream_binary(const TokenStream& stream);

/// Detects text or binary form. Throws Format on malformed input.
TokenStream parse_stream(std::span<const std::uint8_t> bytes);

TokenStream read_stream_file(const std::filesystem::path& path);
void write_stream_file(const std::filesystem::path& path, const TokenStream& stream, bool binary);

}  // namespace voxtok

#endif  // VOXTOK_TOKEN_STREAM_HPP
