// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_TRAVERSAL_HPP
#define VOXTOK_TRAVERSAL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "voxtok/grid.hpp"

namespace voxtok {

/// Order in which the (x, y) columns of a grid are visited.
enum class Strategy : std::uint8_t { Snake = 0, Spiral = 1, Raster = 2 };

inline constexpr std::array<Strategy, 3> kAllStrategies{Strategy::Snake, Strategy::Spiral, Strategy::Raster};

/// "snake" | "spiral" | "raster"
std::string_view to_string(Strategy s) noexcept;
std::optional<Strategy> strategy_from_string(std::string_view name) noexcept;
/// Throws InvalidArgument on an unknown name.
Strategy parse_strategy(std::string_view name);

struct Column {
    std::uint32_t x = 0;
    std::uint32_t y = 0;

    friend constexpr auto operator<=>(const Column&, const Column&) = default;
};

struct ColumnOrder {
    std::size_t width = 0;
    std::size_t depth = 0;
    std::vector<Column> columns;
};

/**
 * Column visit order for a width x depth footprint.
 *
 *  - Raster: rows of constant y in order, each row +x.
 *  - Snake:  like raster, but odd rows run -x (boustrophedon).
 *  - Spiral: from (0,0) heading +x, turning clockwise (+x, +y, -x, -y)
 *            whenever the next cell is out of bounds or already visited.
 */
ColumnOrder column_order(Strategy strategy, std::size_t width, std::size_t depth);

/// Flattens the grid column by column, z ascending inside each column.
std::vector<Cell> linearize(const VoxelGrid& grid, Strategy strategy);
std::vector<Cell> linearize(const VoxelGrid& grid, const ColumnOrder& order);

/// Inverse of linearize. Throws InvalidArgument if seq.size() != dims.volume().
VoxelGrid delinearize(std::span<const Cell> seq, Strategy strategy, const Dims& dims);
VoxelGrid delinearize(std::span<const Cell> seq, const ColumnOrder& order, const Dims& dims);

}  // namespace voxtok

#endif  // VOXTOK_TRAVERSAL_HPP
