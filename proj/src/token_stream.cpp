// SPDX-License-Identifier: Apache-2.0

#include "voxtok/token_stream.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <limits>
#include <string_view>

#include "voxtok/error.hpp"
#include "voxtok/hash.hpp"

namespace voxtok {
namespace {

constexpr std::string_view kTextMagic = "SVTK1";
constexpr std::uint8_t kBinaryVersion = 1;

[[noreturn]] void format_error(const std::string& what) {
    throw Error(ErrorKind::Format, "token stream: " + what);
}

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t& pos, int bytes) {
    if (pos + static_cast<std::size_t>(bytes) > in.size()) format_error("binary stream truncated");
    std::uint64_t value = 0;
    for (int i = 0; i < bytes; ++i) value |= std::uint64_t{in[pos + static_cast<std::size_t>(i)]} << (8 * i);
    pos += static_cast<std::size_t>(bytes);
    return value;
}

template <typename T>
T parse_number(std::string_view word, const char* what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc{} || ptr != word.data() + word.size()) {
        format_error(std::string("bad ") + what + " '" + std::string(word) + "'");
    }
    return value;
}

TokenStream parse_text(std::string_view text) {
    const std::size_t header_end = text.find('\n');
    if (header_end == std::string_view::npos) format_error("missing header line");
    auto split = [&](std::string_view s) {
        std::vector<std::string_view> out;
        std::size_t k = 0;
        while (k < s.size()) {
            while (k < s.size() && (s[k] == ' ' || s[k] == '\t' || s[k] == '\n' || s[k] == '\r')) ++k;
            const std::size_t start = k;
            while (k < s.size() && !(s[k] == ' ' || s[k] == '\t' || s[k] == '\n' || s[k] == '\r')) ++k;
            if (k > start) out.push_back(s.substr(start, k - start));
        }
        return out;
    };
    const auto words = split(text.substr(0, header_end));
    if (words.size() != 6 || words[0] != kTextMagic) format_error("bad header line");
    TokenStream stream;
    const auto strategy = strategy_from_string(words[1]);
    if (!strategy) format_error("unknown strategy '" + std::string(words[1]) + "'");
    stream.strategy = *strategy;
    stream.dims = Dims{parse_number<std::size_t>(words[2], "width"), parse_number<std::size_t>(words[3], "depth"),
                       parse_number<std::size_t>(words[4], "height")};
    if (stream.dims.volume() == 0) format_error("zero dimension in header");
    std::uint64_t hash = 0;
    if (!from_hex(words[5], hash)) format_error("bad codebook hash '" + std::string(words[5]) + "'");
    stream.codebook_id = std::string(words[5]);
    for (std::string_view w : split(text.substr(header_end + 1))) {
        stream.tokens.push_back(parse_number<TokenId>(w, "token id"));
    }
    return stream;
}

TokenStream parse_binary(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 4;
    const auto version = get_le(bytes, pos, 1);
    if (version != kBinaryVersion) format_error("unsupported binary version " + std::to_string(version));
    const auto strategy_byte = get_le(bytes, pos, 1);
    if (strategy_byte > 2) format_error("unknown strategy byte " + std::to_string(strategy_byte));
    TokenStream stream;
    stream.strategy = static_cast<Strategy>(strategy_byte);
    stream.dims.width = get_le(bytes, pos, 2);
    stream.dims.depth = get_le(bytes, pos, 2);
    stream.dims.height = get_le(bytes, pos, 2);
    if (stream.dims.volume() == 0) format_error("zero dimension in header");
    stream.codebook_id = to_hex(get_le(bytes, pos, 8));
    const auto count = get_le(bytes, pos, 4);
    if (bytes.size() - pos != count * 4) {
        format_error("expected " + std::to_string(count) + " ids, found " + std::to_string((bytes.size() - pos) / 4) +
                     " (" + std::to_string(bytes.size() - pos) + " payload bytes)");
    }
    stream.tokens.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) stream.tokens.push_back(static_cast<TokenId>(get_le(bytes, pos, 4)));
    return stream;
}

}  // namespace

TokenStream tokenize(std::span<const Run> runs, const Codebook& book, const Dims& dims) {
    validate_dims(dims);
    if (rep_sum(runs) != dims.volume()) {
        throw Error(ErrorKind::Consistency, "runs cover " + std::to_string(rep_sum(runs)) + " cells, grid " +
                                                to_string(dims) + " has " + std::to_string(dims.volume()));
    }
    TokenStream stream;
    stream.tokens = book.tokenize_runs(runs);
    stream.dims = dims;
    stream.strategy = book.strategy();
    stream.codebook_id = book.id();
    return stream;
}

RleSequence detokenize(const TokenStream& stream, const Codebook& book) {
    if (stream.codebook_id != book.id()) {
        throw Error(ErrorKind::WrongCodebook,
                    "stream was produced with codebook " + stream.codebook_id + ", got " + book.id());
    }
    RleSequence runs;
    for (TokenId id : stream.tokens) {
        const RleSequence& v = book.value(id);
        runs.insert(runs.end(), v.begin(), v.end());
    }
    const std::uint64_t covered = rep_sum(runs);
    if (covered != stream.dims.volume()) {
        throw Error(ErrorKind::Consistency, "tokens cover " + std::to_string(covered) + " cells, grid " +
                                                to_string(stream.dims) + " has " +
                                                std::to_string(stream.dims.volume()));
    }
    return canonicalize(runs);
}

TokenStream encode_grid(const VoxelGrid& grid, const Codebook& book) {
    const auto runs = rle_encode(linearize(grid, book.strategy()));
    return tokenize(runs, book, grid.dims());
}

VoxelGrid decode_grid(const TokenStream& stream, const Codebook& book) {
    if (stream.strategy != book.strategy()) {
        throw Error(ErrorKind::WrongCodebook, "stream strategy " + std::string(to_string(stream.strategy)) +
                                                  " differs from codebook strategy " +
                                                  std::string(to_string(book.strategy())));
    }
    const auto runs = detokenize(stream, book);
    return delinearize(rle_decode(runs), stream.strategy, stream.dims);
}

std::string write_stream_text(const TokenStream& stream) {
    std::string out(kTextMagic);
    out += ' ';
    out += to_string(stream.strategy);
    out += ' ' + std::to_string(stream.dims.width) + ' ' + std::to_string(stream.dims.depth) + ' ' +
           std::to_string(stream.dims.height) + ' ' + stream.codebook_id + '\n';
    for (std::size_t i = 0; i < stream.tokens.size(); ++i) {
        if (i != 0) out += ' ';
        out += std::to_string(stream.tokens[i]);
    }
    out += '\n';
    return out;
}

std::vector<std::uint8_t> write_stream_binary(const TokenStream& stream) {
    const Dims& d = stream.dims;
    constexpr std::size_t kMaxExtent = std::numeric_limits<std::uint16_t>::max();
    if (d.width > kMaxExtent || d.depth > kMaxExtent || d.height > kMaxExtent) {
        throw Error(ErrorKind::InvalidArgument, "binary token streams hold extents up to 65535");
    }
    if (stream.tokens.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorKind::InvalidArgument, "too many tokens for a binary stream");
    }
    std::uint64_t hash = 0;
    if (!from_hex(stream.codebook_id, hash)) {
        throw Error(ErrorKind::InvalidArgument, "codebook id '" + stream.codebook_id + "' is not 16 hex digits");
    }
    std::vector<std::uint8_t> out{'S', 'V', 'T', 'K', kBinaryVersion, static_cast<std::uint8_t>(stream.strategy)};
    put_le(out, d.width, 2);
    put_le(out, d.depth, 2);
    put_le(out, d.height, 2);
    put_le(out, hash, 8);
    put_le(out, stream.tokens.size(), 4);
    out.reserve(out.size() + 4 * stream.tokens.size());
    for (TokenId id : stream.tokens) put_le(out, id, 4);
    return out;
}

TokenStream parse_stream(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 5 || bytes[0] != 'S' || bytes[1] != 'V' || bytes[2] != 'T' || bytes[3] != 'K') {
        format_error("missing SVTK magic");
    }
    if (bytes[4] == '1') {
        return parse_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    }
    return parse_binary(bytes);
}

TokenStream read_stream_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_stream(bytes);
}

void write_stream_file(const std::filesystem::path& path, const TokenStream& stream, bool binary) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    if (binary) {
        const auto bytes = write_stream_binary(stream);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    } else {
        out << write_stream_text(stream);
    }
    if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

}  // namespace voxtok
