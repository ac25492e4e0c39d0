// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_TEST_SUPPORT_HPP
#define VOXTOK_TEST_SUPPORT_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "voxtok/grid.hpp"

namespace voxtok::testing {

inline VoxelGrid random_grid(const Dims& dims, double density, std::mt19937_64& rng) {
    VoxelGrid g(dims);
    std::bernoulli_distribution full(density);
    for (std::size_t x = 0; x < dims.width; ++x)
        for (std::size_t y = 0; y < dims.depth; ++y)
            for (std::size_t z = 0; z < dims.height; ++z)
                if (full(rng)) g.set(x, y, z, Cell::Full);
    return g;
}

template <typename Pred>
VoxelGrid shape_grid(const Dims& dims, Pred inside) {
    VoxelGrid g(dims);
    for (std::size_t x = 0; x < dims.width; ++x)
        for (std::size_t y = 0; y < dims.depth; ++y)
            for (std::size_t z = 0; z < dims.height; ++z)
                if (inside(static_cast<int>(x), static_cast<int>(y), static_cast<int>(z))) g.set(x, y, z, Cell::Full);
    return g;
}

/// Solid ex*ey*ez box centered in an n^3 grid (same offsets as the fixture oracle).
inline VoxelGrid centered_cuboid(int n, int ex, int ey, int ez) {
    const int x0 = (n - ex) / 2, y0 = (n - ey) / 2, z0 = (n - ez) / 2;
    const auto u = static_cast<std::size_t>(n);
    return shape_grid(Dims{u, u, u}, [&](int x, int y, int z) {
        return x >= x0 && x < x0 + ex && y >= y0 && y < y0 + ey && z >= z0 && z < z0 + ez;
    });
}

/// Cells whose centers lie within radius r of the grid center.
inline VoxelGrid centered_sphere(int n, double r) {
    const double c = n / 2.0;
    const auto u = static_cast<std::size_t>(n);
    return shape_grid(Dims{u, u, u}, [&](int x, int y, int z) {
        const double dx = x + 0.5 - c, dy = y + 0.5 - c, dz = z + 0.5 - c;
        return dx * dx + dy * dy + dz * dz <= r * r;
    });
}

inline std::filesystem::path fixture_dir() { return std::filesystem::path(VOXTOK_FIXTURE_DIR); }

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("voxtok_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace voxtok::testing

#endif  // VOXTOK_TEST_SUPPORT_HPP
