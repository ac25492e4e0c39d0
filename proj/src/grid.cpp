// SPDX-License-Identifier: Apache-2.0

#include "voxtok/grid.hpp"

#include <bit>

#include "voxtok/error.hpp"

namespace voxtok {

std::string to_string(const Dims& dims) {
    return std::to_string(dims.width) + "x" + std::to_string(dims.depth) + "x" +
           std::to_string(dims.height);
}

void validate_dims(const Dims& dims) {
    if (dims.width == 0 || dims.depth == 0 || dims.height == 0) {
        throw Error(ErrorKind::InvalidDimension, "grid dimensions must be >= 1, got " + to_string(dims));
    }
}

VoxelGrid::VoxelGrid(Dims dims) : dims_(dims) {
    validate_dims(dims_);
    words_.assign((dims_.volume() + 63) / 64, 0);
}

void VoxelGrid::check_bounds(std::size_t x, std::size_t y, std::size_t z) const {
    if (x >= dims_.width || y >= dims_.depth || z >= dims_.height) {
        throw Error(ErrorKind::OutOfBounds, "voxel (" + std::to_string(x) + "," + std::to_string(y) + "," +
                                                std::to_string(z) + ") outside grid " + to_string(dims_));
    }
}

Cell VoxelGrid::get(std::size_t x, std::size_t y, std::size_t z) const {
    check_bounds(x, y, z);
    return at(flat_index(x, y, z));
}

void VoxelGrid::set(std::size_t x, std::size_t y, std::size_t z, Cell value) {
    check_bounds(x, y, z);
    assign(flat_index(x, y, z), value);
}

std::size_t VoxelGrid::occupied_count() const noexcept {
    std::size_t total = 0;
    for (std::uint64_t w : words_) {
        total += static_cast<std::size_t>(std::popcount(w));
    }
    return total;
}

void VoxelGrid::fill(Cell value) noexcept {
    const std::uint64_t pattern = value == Cell::Full ? ~std::uint64_t{0} : 0;
    for (auto& w : words_) {
        w = pattern;
    }
    const std::size_t tail = dims_.volume() & 63;
    if (tail != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << tail) - 1;
    }
}

}  // namespace voxtok
