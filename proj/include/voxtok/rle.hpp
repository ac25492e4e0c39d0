// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_RLE_HPP
#define VOXTOK_RLE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxtok/grid.hpp"

namespace voxtok {

/// `rep` consecutive cells of value `val`. rep has no upper bound.
struct Run {
    std::uint64_t rep = 0;
    Cell val = Cell::Empty;

    friend constexpr auto operator<=>(const Run&, const Run&) = default;
};

using RleSequence = std::vector<Run>;

/// Canonical (maximal-run) encoding. Throws InvalidArgument on empty input.
RleSequence rle_encode(std::span<const Cell> seq);

/// Expands runs; accepts non-canonical input. Throws Format on rep == 0.
std::vector<Cell> rle_decode(std::span<const Run> runs);

/// Merges adjacent equal-valued runs. Throws Format on rep == 0.
RleSequence canonicalize(std::span<const Run> runs);

std::uint64_t rep_sum(std::span<const Run> runs) noexcept;

/// "2E3F" style text: decimal count followed by E|F, no separators.
std::string render_rle(std::span<const Run> runs);
std::string render_run(const Run& run);

/// Byte length of render_rle(runs) without building the string.
std::size_t rendered_length(std::span<const Run> runs) noexcept;

/// Inverse of render_rle. A single space between runs is also accepted.
/// Throws ParseError carrying the offending byte offset.
RleSequence parse_rle(std::string_view text);

/// Compression factor: rendered RLE bytes over voxel count.
struct CompressionReport {
    std::size_t rle_bytes = 0;
    std::size_t vox_count = 0;
    double cf = 0.0;
};

/// Throws InvalidArgument if vox_count == 0 and Consistency if the runs do
/// not cover exactly vox_count cells.
CompressionReport compression_factor(std::span<const Run> runs, std::size_t vox_count);

}  // namespace voxtok

#endif  // VOXTOK_RLE_HPP
