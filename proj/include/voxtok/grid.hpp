// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_GRID_HPP
#define VOXTOK_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace voxtok {

/// Occupancy of a single voxel.
enum class Cell : std::uint8_t { Empty = 0, Full = 1 };

constexpr char cell_letter(Cell c) noexcept { return c == Cell::Full ? 'F' : 'E'; }

/// Grid extents along x (width), y (depth) and z (height). z is the column axis.
struct Dims {
    std::size_t width = 0;
    std::size_t depth = 0;
    std::size_t height = 0;

    constexpr std::size_t volume() const noexcept { return width * depth * height; }
    constexpr std::size_t columns() const noexcept { return width * depth; }

    friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& dims);

/// Throws InvalidDimension if any extent is zero.
void validate_dims(const Dims& dims);

/**
 * Dense binary voxel grid, one bit per cell.
 *
 * Cells are addressed x-major with z fastest:
 *   flat = x * (depth * height) + y * height + z
 * so every (x, y) column is a contiguous run of `height` bits.
 */
class VoxelGrid {
public:
    explicit VoxelGrid(Dims dims);
    VoxelGrid(std::size_t width, std::size_t depth, std::size_t height)
        : VoxelGrid(Dims{width, depth, height}) {}

    const Dims& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return dims_.volume(); }

    Cell get(std::size_t x, std::size_t y, std::size_t z) const;
    void set(std::size_t x, std::size_t y, std::size_t z, Cell value);

    // Unchecked flat access; callers guarantee index < size().
    Cell at(std::size_t flat) const noexcept {
        return ((words_[flat >> 6] >> (flat & 63)) & 1U) != 0 ? Cell::Full : Cell::Empty;
    }
    void assign(std::size_t flat, Cell value) noexcept {
        const std::uint64_t mask = std::uint64_t{1} << (flat & 63);
        if (value == Cell::Full) {
            words_[flat >> 6] |= mask;
        } else {
            words_[flat >> 6] &= ~mask;
        }
    }

    std::size_t flat_index(std::size_t x, std::size_t y, std::size_t z) const noexcept {
        return x * (dims_.depth * dims_.height) + y * dims_.height + z;
    }

    std::size_t occupied_count() const noexcept;

    /// Backing words; bits past size() are always zero.
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    void fill(Cell value) noexcept;

    friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;

private:
    void check_bounds(std::size_t x, std::size_t y, std::size_t z) const;

    Dims dims_;
    std::vector<std::uint64_t> words_;
};

}  // namespace voxtok

#endif  // VOXTOK_GRID_HPP
