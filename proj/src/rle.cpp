// SPDX-License-Identifier: Apache-2.0

#include "voxtok/rle.hpp"

#include <charconv>
#include <limits>

#include "voxtok/error.hpp"

namespace voxtok {
namespace {

std::size_t decimal_digits(std::uint64_t v) noexcept {
    std::size_t n = 1;
    while (v >= 10) {
        v /= 10;
        ++n;
    }
    return n;
}

void check_run(const Run& r) {
    if (r.rep == 0) {
        throw Error(ErrorKind::Format, "run with zero repetitions");
    }
}

}  // namespace

RleSequence rle_encode(std::span<const Cell> seq) {
    if (seq.empty()) {
        throw Error(ErrorKind::InvalidArgument, "cannot run-length encode an empty sequence");
    }
    RleSequence runs;
    Run current{1, seq[0]};
    for (std::size_t i = 1; i < seq.size(); ++i) {
        if (seq[i] == current.val) {
            ++current.rep;
        } else {
            runs.push_back(current);
            current = Run{1, seq[i]};
        }
    }
    runs.push_back(current);
    return runs;
}

std::vector<Cell> rle_decode(std::span<const Run> runs) {
    std::vector<Cell> out;
    std::uint64_t total = 0;
    for (const Run& r : runs) {
        check_run(r);
        total += r.rep;
    }
    out.reserve(total);
    for (const Run& r : runs) {
        out.insert(out.end(), r.rep, r.val);
    }
    return out;
}

RleSequence canonicalize(std::span<const Run> runs) {
    RleSequence out;
    out.reserve(runs.size());
    for (const Run& r : runs) {
        check_run(r);
        if (!out.empty() && out.back().val == r.val) {
            out.back().rep += r.rep;
        } else {
            out.push_back(r);
        }
    }
    return out;
}

std::uint64_t rep_sum(std::span<const Run> runs) noexcept {
    std::uint64_t total = 0;
    for (const Run& r : runs) total += r.rep;
    return total;
}

std::string render_run(const Run& run) {
    std::string s = std::to_string(run.rep);
    s.push_back(cell_letter(run.val));
    return s;
}

std::string render_rle(std::span<const Run> runs) {
    std::string out;
    out.reserve(rendered_length(runs));
    char buf[24];
    for (const Run& r : runs) {
        const auto res = std::to_chars(buf, buf + sizeof buf, r.rep);
        out.append(buf, res.ptr);
        out.push_back(cell_letter(r.val));
    }
    return out;
}

std::size_t rendered_length(std::span<const Run> runs) noexcept {
    std::size_t n = 0;
    for (const Run& r : runs) n += decimal_digits(r.rep) + 1;
    return n;
}

RleSequence parse_rle(std::string_view text) {
    RleSequence runs;
    std::size_t i = 0;
    const std::size_t n = text.size();
    if (n == 0) throw ParseError(0, "empty input");
    while (i < n) {
        if (!runs.empty() && text[i] == ' ') {
            ++i;
            if (i == n) throw ParseError(i - 1, "trailing space");
        }
        const std::size_t start = i;
        if (text[i] < '1' || text[i] > '9') {
            if (text[i] == '0') throw ParseError(i, "count has a leading zero");
            throw ParseError(i, std::string("expected count, found '") + text[i] + "'");
        }
        std::uint64_t rep = 0;
        while (i < n && text[i] >= '0' && text[i] <= '9') {
            const std::uint64_t digit = static_cast<std::uint64_t>(text[i] - '0');
            if (rep > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
                throw ParseError(start, "count overflows 64 bits");
            }
            rep = rep * 10 + digit;
            ++i;
        }
        if (i == n) throw ParseError(start, "dangling count without E|F");
        if (text[i] == 'E') {
            runs.push_back({rep, Cell::Empty});
        } else if (text[i] == 'F') {
            runs.push_back({rep, Cell::Full});
        } else {
            throw ParseError(i, std::string("unknown symbol '") + text[i] + "'");
        }
        ++i;
    }
    return runs;
}

CompressionReport compression_factor(std::span<const Run> runs, std::size_t vox_count) {
    if (vox_count == 0) {
        throw Error(ErrorKind::InvalidArgument, "voxel count must be >= 1");
    }
    const std::uint64_t covered = rep_sum(runs);
    if (covered != vox_count) {
        throw Error(ErrorKind::Consistency, "runs cover " + std::to_string(covered) + " cells, expected " +
                                                std::to_string(vox_count));
    }
    CompressionReport report;
    report.rle_bytes = rendered_length(runs);
    report.vox_count = vox_count;
    report.cf = static_cast<double>(report.rle_bytes) / static_cast<double>(vox_count);
    return report;
}

}  // namespace voxtok
