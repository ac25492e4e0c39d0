// SPDX-License-Identifier: Apache-2.0

#include "voxtok/traversal.hpp"

#include <string>

#include "voxtok/error.hpp"

namespace voxtok {
namespace {

void raster(ColumnOrder& order, bool alternate) {
    for (std::size_t y = 0; y < order.depth; ++y) {
        const bool reverse = alternate && (y % 2 == 1);
        for (std::size_t i = 0; i < order.width; ++i) {
            const std::size_t x = reverse ? order.width - 1 - i : i;
            order.columns.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)});
        }
    }
}

void spiral(ColumnOrder& order) {
    const std::size_t w = order.width;
    const std::size_t d = order.depth;
    const std::size_t total = w * d;
    std::vector<bool> visited(total, false);
    constexpr int kDx[4] = {1, 0, -1, 0};
    constexpr int kDy[4] = {0, 1, 0, -1};

    long x = 0;
    long y = 0;
    int dir = 0;
    auto open = [&](long cx, long cy) {
        return cx >= 0 && cy >= 0 && cx < static_cast<long>(w) && cy < static_cast<long>(d) &&
               !visited[static_cast<std::size_t>(cy) * w + static_cast<std::size_t>(cx)];
    };
    for (std::size_t step = 0; step < total; ++step) {
        visited[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)] = true;
        order.columns.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)});
        if (step + 1 == total) break;
        if (!open(x + kDx[dir], y + kDy[dir])) {
            dir = (dir + 1) % 4;
        }
        x += kDx[dir];
        y += kDy[dir];
    }
}

void check_length(std::size_t got, const Dims& dims) {
    if (got != dims.volume()) {
        throw Error(ErrorKind::InvalidArgument, "cell sequence has " + std::to_string(got) +
                                                    " cells, grid " + to_string(dims) + " needs " +
                                                    std::to_string(dims.volume()));
    }
}

}  // namespace

std::string_view to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::Snake: return "snake";
        case Strategy::Spiral: return "spiral";
        case Strategy::Raster: return "raster";
    }
    return "unknown";
}

std::optional<Strategy> strategy_from_string(std::string_view name) noexcept {
    for (Strategy s : kAllStrategies) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

Strategy parse_strategy(std::string_view name) {
    if (auto s = strategy_from_string(name)) return *s;
    throw Error(ErrorKind::InvalidArgument,
                "unknown traversal strategy '" + std::string(name) + "' (expected snake|spiral|raster)");
}

ColumnOrder column_order(Strategy strategy, std::size_t width, std::size_t depth) {
    if (width == 0 || depth == 0) {
        throw Error(ErrorKind::InvalidDimension, "column footprint must be >= 1x1, got " +
                                                     std::to_string(width) + "x" + std::to_string(depth));
    }
    ColumnOrder order{width, depth, {}};
    order.columns.reserve(width * depth);
    switch (strategy) {
        case Strategy::Snake: raster(order, true); break;
        case Strategy::Raster: raster(order, false); break;
        case Strategy::Spiral: spiral(order); break;
    }
    return order;
}

std::vector<Cell> linearize(const VoxelGrid& grid, const ColumnOrder& order) {
    const Dims& dims = grid.dims();
    if (order.width != dims.width || order.depth != dims.depth) {
        throw Error(ErrorKind::InvalidArgument, "column order footprint does not match grid " + to_string(dims));
    }
    std::vector<Cell> out;
    out.reserve(dims.volume());
    for (const Column& c : order.columns) {
        const std::size_t base = grid.flat_index(c.x, c.y, 0);
        for (std::size_t z = 0; z < dims.height; ++z) {
            out.push_back(grid.at(base + z));
        }
    }
    return out;
}

std::vector<Cell> linearize(const VoxelGrid& grid, Strategy strategy) {
    return linearize(grid, column_order(strategy, grid.dims().width, grid.dims().depth));
}

VoxelGrid delinearize(std::span<const Cell> seq, const ColumnOrder& order, const Dims& dims) {
    validate_dims(dims);
    check_length(seq.size(), dims);
    if (order.width != dims.width || order.depth != dims.depth) {
        throw Error(ErrorKind::InvalidArgument, "column order footprint does not match grid " + to_string(dims));
    }
    VoxelGrid grid(dims);
    std::size_t k = 0;
    for (const Column& c : order.columns) {
        const std::size_t base = grid.flat_index(c.x, c.y, 0);
        for (std::size_t z = 0; z < dims.height; ++z, ++k) {
            if (seq[k] == Cell::Full) grid.assign(base + z, Cell::Full);
        }
    }
    return grid;
}

VoxelGrid delinearize(std::span<const Cell> seq, Strategy strategy, const Dims& dims) {
    validate_dims(dims);
    check_length(seq.size(), dims);
    return delinearize(seq, column_order(strategy, dims.width, dims.depth), dims);
}

}  // namespace voxtok
