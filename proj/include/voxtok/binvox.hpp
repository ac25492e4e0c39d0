// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_BINVOX_HPP
#define VOXTOK_BINVOX_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "voxtok/grid.hpp"

namespace voxtok::binvox {

/**
 * Header of a .binvox file.
 *
 * `dim d1 d2 d3` maps straight onto (width, depth, height). The body is
 * stored x-outermost, then binvox-z, then binvox-y fastest; binvox's y is the
 * model's up axis and becomes our column axis z, binvox's z becomes our y.
 * Under that remap the body order equals the grid's flat order.
 *
 * translate and scale are kept as the exact numeric tokens read from the file.
 */
struct Header {
    Dims dim;
    std::array<std::string, 3> translate{"0", "0", "0"};
    std::string scale = "1";

    friend bool operator==(const Header&, const Header&) = default;
};

/// Header with default translate/scale for a grid.
Header default_header(const Dims& dims);

struct File {
    Header header;
    VoxelGrid grid;
};

/// Parses an in-memory binvox file. Throws voxtok::Error (Format,
/// LengthMismatch) or voxtok::TruncationError.
File parse(std::span<const std::uint8_t> bytes);

/// Serializes header + grid. Runs longer than 255 cells are split.
std::vector<std::uint8_t> write(const Header& header, const VoxelGrid& grid);

File read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Header& header, const VoxelGrid& grid);

}  // namespace voxtok::binvox

#endif  // VOXTOK_BINVOX_HPP
