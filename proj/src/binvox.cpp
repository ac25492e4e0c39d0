// SPDX-License-Identifier: Apache-2.0

#include "voxtok/binvox.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string_view>

#include "voxtok/error.hpp"

namespace voxtok::binvox {
namespace {

constexpr std::string_view kMagic = "#binvox 1";

[[noreturn]] void format_error(const std::string& what) {
    throw Error(ErrorKind::Format, "binvox: " + what);
}

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) words.push_back(line.substr(start, i - start));
    }
    return words;
}

std::size_t parse_extent(std::string_view token) {
    std::size_t value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end || value == 0) {
        format_error("bad dimension '" + std::string(token) + "'");
    }
    return value;
}

std::string numeric_token(std::string_view token) {
    double value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        format_error("bad number '" + std::string(token) + "'");
    }
    return std::string(token);
}

}  // namespace

Header default_header(const Dims& dims) {
    Header h;
    h.dim = dims;
    return h;
}

File parse(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    auto next_line = [&]() -> std::optional<std::string_view> {
        if (pos >= bytes.size()) return std::nullopt;
        const std::size_t start = pos;
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        if (pos >= bytes.size()) return std::nullopt;  // header lines must be newline-terminated
        std::string_view line(reinterpret_cast<const char*>(bytes.data()) + start, pos - start);
        ++pos;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    };

    const auto magic = next_line();
    if (!magic || *magic != kMagic) {
        format_error("missing '#binvox 1' magic line");
    }

    Header header;
    bool have_dim = false;
    bool have_data = false;
    while (!have_data) {
        const auto line = next_line();
        if (!line) format_error("header ended before 'data' line");
        const auto words = split_words(*line);
        if (words.empty()) continue;
        const std::string_view key = words[0];
        if (key == "data" && words.size() == 1) {
            have_data = true;
        } else if (key == "dim" && words.size() == 4) {
            header.dim = Dims{parse_extent(words[1]), parse_extent(words[2]), parse_extent(words[3])};
            have_dim = true;
        } else if (key == "translate" && words.size() == 4) {
            for (std::size_t i = 0; i < 3; ++i) header.translate[i] = numeric_token(words[i + 1]);
        } else if (key == "scale" && words.size() == 2) {
            header.scale = numeric_token(words[1]);
        } else {
            format_error("unexpected header line '" + std::string(*line) + "'");
        }
    }
    if (!have_dim) format_error("header has no 'dim' line");

    VoxelGrid grid(header.dim);
    const std::uint64_t expected = header.dim.volume();
    std::uint64_t decoded = 0;
    while (decoded < expected) {
        if (pos + 2 > bytes.size()) {
            throw TruncationError(decoded, expected);
        }
        const std::uint8_t value = bytes[pos];
        const std::uint8_t count = bytes[pos + 1];
        if (value > 1) {
            format_error("value byte " + std::to_string(value) + " at offset " + std::to_string(pos));
        }
        if (count == 0) {
            format_error("zero run count at offset " + std::to_string(pos + 1));
        }
        if (decoded + count > expected) {
            throw Error(ErrorKind::LengthMismatch, "binvox: body decodes to more than " +
                                                       std::to_string(expected) + " cells");
        }
        if (value == 1) {
            for (std::uint64_t i = decoded; i < decoded + count; ++i) grid.assign(i, Cell::Full);
        }
        decoded += count;
        pos += 2;
    }
    if (pos != bytes.size()) {
        throw Error(ErrorKind::LengthMismatch, "binvox: " + std::to_string(bytes.size() - pos) +
                                                   " trailing bytes after " + std::to_string(expected) +
                                                   " cells");
    }
    return File{std::move(header), std::move(grid)};
}

std::vector<std::uint8_t> write(const Header& header, const VoxelGrid& grid) {
    if (header.dim != grid.dims()) {
        throw Error(ErrorKind::InvalidArgument, "binvox: header dim " + to_string(header.dim) +
                                                    " does not match grid " + to_string(grid.dims()));
    }
    std::ostringstream text;
    text << kMagic << '\n'
         << "dim " << header.dim.width << ' ' << header.dim.depth << ' ' << header.dim.height << '\n'
         << "translate " << header.translate[0] << ' ' << header.translate[1] << ' ' << header.translate[2]
         << '\n'
         << "scale " << header.scale << '\n'
         << "data\n";
    const std::string head = text.str();
    std::vector<std::uint8_t> out(head.begin(), head.end());

    const std::size_t n = grid.size();
    std::size_t i = 0;
    while (i < n) {
        const Cell value = grid.at(i);
        std::size_t run = 1;
        while (i + run < n && run < 255 && grid.at(i + run) == value) ++run;
        out.push_back(static_cast<std::uint8_t>(value));
        out.push_back(static_cast<std::uint8_t>(run));
        i += run;
    }
    return out;
}

File read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(bytes);
}

void write_file(const std::filesystem::path& path, const Header& header, const VoxelGrid& grid) {
    const auto bytes = write(header, grid);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorKind::Io, "short write to " + path.string());
    }
}

}  // namespace voxtok::binvox
