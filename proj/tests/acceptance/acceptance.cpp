// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "voxtok/binvox.hpp"
#include "voxtok/error.hpp"
#include "voxtok/hash.hpp"
#include "voxtok/metrics.hpp"
#include "voxtok/pipeline.hpp"

using namespace voxtok;
namespace fs = std::filesystem;

namespace {

/// Collects failure messages for one criterion.
struct Check {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok && failures.size() < 10) failures.push_back(what);
    }
};

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<void(Check&)> body;
};

// ---------------------------------------------------------------------------

struct CategoryRow {
    const char* name;
    double cf;
    double length;
};

// Per-category compression factor and mean rendered RLE length, 32^3 grids.
constexpr CategoryRow kReported[] = {
    {"airplane", 0.01007, 329.91}, {"bench", 0.00664, 217.63},  {"cabinet", 0.02002, 656.04},
    {"car", 0.01839, 602.57},      {"chair", 0.02358, 772.57},  {"display", 0.00686, 224.73},
    {"lamp", 0.01833, 600.54},     {"speaker", 0.02504, 820.61}, {"rifle", 0.00909, 297.88},
    {"sofa", 0.00875, 286.63},     {"table", 0.01425, 466.80},  {"telephone", 0.00780, 255.67},
    {"watercraft", 0.01328, 435.09},
};
constexpr double kReportedOverallCf = 0.01401;
constexpr double kReportedOverallLength = 458.97;

void reported_table_consistency(Check& c) {
    constexpr double kVoxels = 32768.0;
    std::vector<std::pair<std::string, CompressionReport>> rows;
    for (const auto& row : kReported) {
        const double cf = row.length / kVoxels;
        c.expect(std::abs(cf - row.cf) <= 1e-4,
                 std::string(row.name) + ": " + std::to_string(cf) + " vs " + std::to_string(row.cf));
        rows.push_back({row.name, {0, 32768, cf}});
    }
    // Overall row: unweighted mean over categories.
    const StatsTable table = corpus_stats(rows);
    c.expect(table.categories.size() == 13, "expected 13 categories");
    c.expect(std::abs(table.overall.mean_cf - kReportedOverallCf) <= 1e-4,
             "overall cf " + std::to_string(table.overall.mean_cf));
    double length_sum = 0;
    for (const auto& row : kReported) length_sum += row.length;
    const double mean_length = length_sum / 13.0;
    c.expect(std::abs(mean_length - kReportedOverallLength) <= 0.005,
             "overall length " + std::to_string(mean_length));
    c.expect(std::abs(mean_length / kVoxels - kReportedOverallCf) <= 1e-4, "overall length/cf pair");
}

// ---------------------------------------------------------------------------

void losslessness(Check& c) {
    const std::vector<Dims> dims{{1, 1, 1}, {2, 2, 2}, {8, 8, 8}, {16, 16, 16}, {32, 32, 32}, {3, 5, 2}};
    const std::vector<double> densities{0.0, 0.01, 0.1, 0.5, 0.9, 1.0};
    constexpr std::size_t kGrids = 1000;
    const std::size_t combos = dims.size() * densities.size();

    std::mt19937_64 rng(20240501);
    std::size_t produced = 0;
    std::size_t checked = 0;
    for (std::size_t k = 0; k < combos; ++k) {
        const std::size_t count = kGrids / combos + (k < kGrids % combos ? 1 : 0);
        std::vector<VoxelGrid> grids;
        for (std::size_t i = 0; i < count; ++i) {
            grids.push_back(testing::random_grid(dims[k / densities.size()], densities[k % densities.size()], rng));
        }
        produced += grids.size();
        for (Strategy s : kAllStrategies) {
            std::vector<RleSequence> corpus;
            for (const auto& g : grids) corpus.push_back(rle_encode(linearize(g, s)));
            BuildParams params;
            params.max_vocab = 256;
            const Codebook book = build_codebook(corpus, params, s);
            for (std::size_t i = 0; i < grids.size(); ++i) {
                const std::string label = to_string(grids[i].dims()) + " density " +
                                          std::to_string(densities[k % densities.size()]) + " " +
                                          std::string(to_string(s)) + " #" + std::to_string(i);
                try {
                    const TokenStream stream = tokenize(corpus[i], book, grids[i].dims());
                    const RleSequence runs = detokenize(stream, book);
                    const VoxelGrid back = delinearize(rle_decode(runs), s, grids[i].dims());
                    c.expect(runs == corpus[i], label + ": detokenized runs differ");
                    c.expect(back == grids[i], label + ": reconstructed grid differs");
                } catch (const std::exception& e) {
                    c.expect(false, label + ": " + e.what());
                }
                ++checked;
            }
        }
    }
    c.expect(produced == kGrids, "generated " + std::to_string(produced) + " grids");
    c.expect(checked == 3 * kGrids, "checked " + std::to_string(checked) + " round trips");
}

// ---------------------------------------------------------------------------

RleSequence from_cells(const std::string& letters) {
    std::vector<Cell> cells;
    for (char ch : letters) cells.push_back(ch == 'F' ? Cell::Full : Cell::Empty);
    return rle_encode(cells);
}

void micro_examples(Check& c) {
    c.expect(render_rle(from_cells("EEFFF")) == "2E3F", "EEFFF");
    c.expect(render_rle(from_cells("EFEF")) == "1E1F1E1F", "EFEF");

    const std::vector<std::string> values{"2E 3F 1E", "1022E 10F 5E", "1E 2F 2E 3F"};
    std::vector<RleSequence> parsed;
    for (const auto& v : values) {
        try {
            parsed.push_back(parse_rle(v));
            c.expect(parse_rle(render_rle(parsed.back())) == parsed.back(), v + ": text round trip");
        } catch (const std::exception& e) {
            c.expect(false, v + ": " + e.what());
            return;
        }
    }
    c.expect(render_rle(parsed[0]) == "2E3F1E", "T0 rendering");
    c.expect(parsed[1] == RleSequence{{1022, Cell::Empty}, {10, Cell::Full}, {5, Cell::Empty}}, "T1 parse");

    // A codebook holding exactly these values survives save/load and maps
    // token streams back to their runs.
    const Codebook book(Strategy::Snake, BuildParams{}, parsed);
    const Codebook loaded = load_codebook(save_codebook(book));
    c.expect(loaded == book, "codebook save/load");
    RleSequence joined;
    for (TokenId t : {1u, 0u, 2u}) joined.insert(joined.end(), parsed[t].begin(), parsed[t].end());
    const Dims d{rep_sum(joined), 1, 1};
    const TokenStream stream = tokenize(joined, loaded, d);
    c.expect(stream.tokens == std::vector<TokenId>{1, 0, 2}, "tokenize with the example values");
    c.expect(detokenize(stream, loaded) == canonicalize(joined), "detokenize with the example values");
}

// ---------------------------------------------------------------------------

void traversal_permutation(Check& c) {
    std::vector<unsigned char> seen;
    for (Strategy s : kAllStrategies) {
        for (std::size_t w = 1; w <= 32; ++w) {
            for (std::size_t d = 1; d <= 32; ++d) {
                const ColumnOrder order = column_order(s, w, d);
                const std::string label = std::string(to_string(s)) + " " + std::to_string(w) + "x" + std::to_string(d);
                if (order.columns.size() != w * d) {
                    c.expect(false, label + ": wrong length");
                    continue;
                }
                seen.assign(w * d, 0);
                bool ok = true;
                for (const Column& col : order.columns) {
                    if (col.x >= w || col.y >= d || seen[col.x * d + col.y]++) ok = false;
                }
                c.expect(ok, label + ": not a permutation");
            }
        }
    }
}

// ---------------------------------------------------------------------------

struct CoherenceCase {
    const char* name;
    VoxelGrid grid;
    std::size_t snake, spiral, raster;  // rendered bytes from the fixture oracle
};

void traversal_coherence(Check& c) {
    const std::vector<CoherenceCase> cases{
        {"cuboid16", testing::centered_cuboid(16, 8, 8, 8), 278, 261, 278},
        {"cuboid32", testing::centered_cuboid(32, 16, 12, 20), 1172, 1160, 1172},
        {"sphere16", testing::centered_sphere(16, 6.0), 545, 536, 545},
        {"sphere32", testing::centered_sphere(32, 12.0), 2624, 2614, 2624},
    };
    for (const auto& cs : cases) {
        std::map<Strategy, std::size_t> bytes;
        for (Strategy s : kAllStrategies) bytes[s] = rendered_length(rle_encode(linearize(cs.grid, s)));
        c.expect(bytes[Strategy::Snake] == cs.snake, std::string(cs.name) + " snake " + std::to_string(bytes[Strategy::Snake]));
        c.expect(bytes[Strategy::Spiral] == cs.spiral,
                 std::string(cs.name) + " spiral " + std::to_string(bytes[Strategy::Spiral]));
        c.expect(bytes[Strategy::Raster] == cs.raster,
                 std::string(cs.name) + " raster " + std::to_string(bytes[Strategy::Raster]));
        c.expect(bytes[Strategy::Snake] <= bytes[Strategy::Raster], std::string(cs.name) + ": snake > raster");
    }
}

// ---------------------------------------------------------------------------

void iou_oracle(Check& c) {
    std::mt19937_64 rng(9001);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    const Dims d{16, 16, 16};
    for (int i = 0; i < 200; ++i) {
        const VoxelGrid a = testing::random_grid(d, density(rng), rng);
        const VoxelGrid b = testing::random_grid(d, density(rng), rng);
        std::size_t inter = 0, uni = 0;
        for (std::size_t x = 0; x < 16; ++x)
            for (std::size_t y = 0; y < 16; ++y)
                for (std::size_t z = 0; z < 16; ++z) {
                    const bool pa = a.get(x, y, z) == Cell::Full;
                    const bool pb = b.get(x, y, z) == Cell::Full;
                    inter += pa && pb;
                    uni += pa || pb;
                }
        const double expected = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
        const IoUResult r = iou(a, b);
        const std::string label = "pair " + std::to_string(i);
        c.expect(r.intersection == inter && r.union_count == uni, label + ": counts differ");
        c.expect(r.iou == expected, label + ": iou differs");
        c.expect(iou(b, a).iou == r.iou, label + ": not symmetric");
        c.expect(iou(a, a).iou == 1.0, label + ": iou(a,a) != 1");
    }
    VoxelGrid a(2, 2, 2), b(2, 2, 2);
    a.set(0, 0, 0, Cell::Full);
    a.set(0, 0, 1, Cell::Full);
    b.set(0, 0, 1, Cell::Full);
    b.set(0, 1, 0, Cell::Full);
    c.expect(iou(a, b).iou == 1.0 / 3.0, "one-third overlap case");
}

// ---------------------------------------------------------------------------

void inflation(Check& c) {
    for (std::size_t n : {std::size_t{1}, std::size_t{10}, std::size_t{16384}}) {
        std::vector<Cell> cells;
        for (std::size_t i = 0; i < n; ++i) {
            cells.push_back(Cell::Empty);
            cells.push_back(Cell::Full);
        }
        const RleSequence runs = rle_encode(cells);
        const std::size_t bytes = render_rle(runs).size();
        c.expect(bytes == 4 * n, "n=" + std::to_string(n) + ": " + std::to_string(bytes) + " bytes");
        c.expect(rendered_length(runs) == bytes, "rendered_length disagrees for n=" + std::to_string(n));
        c.expect(rle_decode(runs) == cells, "decode for n=" + std::to_string(n));
    }
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> tree_bytes(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[e.path().lexically_relative(dir).generic_string()] = testing::read_text(e.path());
    }
    return out;
}

void determinism(Check& c) {
    const auto manifest = pipeline::load_manifest(testing::fixture_dir() / "corpus" / "manifest.json");
    const fs::path base = testing::scratch_dir("acceptance_determinism");
    for (const char* run : {"first", "second"}) {
        pipeline::Config config;
        config.out_dir = base / run;
        config.codebook_path = base / run / "codebook.json";
        const auto built = pipeline::cmd_build_codebook(manifest, config);
        c.expect(built.failures.empty(), std::string(run) + ": build failures");
        const auto encoded = pipeline::cmd_encode(manifest, config);
        c.expect(encoded.exit_status() == pipeline::kSuccess, std::string(run) + ": encode failures");
        c.expect(!encoded.built_codebook, std::string(run) + ": encode rebuilt the codebook");
    }
    const auto first = tree_bytes(base / "first");
    c.expect(first.size() == 8, "expected codebook, log and 6 streams, got " + std::to_string(first.size()));
    c.expect(first == tree_bytes(base / "second"), "outputs differ between runs");
    fs::remove_all(base);

    BuildParams params;
    params.max_pattern_runs = 2;
    const RleSequence micro{{2, Cell::Empty}, {3, Cell::Full}, {2, Cell::Empty}, {3, Cell::Full}, {1, Cell::Empty}};
    const Codebook book = build_codebook(std::vector<RleSequence>{micro}, params, Strategy::Snake);
    c.expect(book.values() == std::vector<RleSequence>{{{2, Cell::Empty}, {3, Cell::Full}}, {{1, Cell::Empty}}},
             "micro-corpus codebook values");
    c.expect(book.tokenize_runs(micro) == std::vector<TokenId>{0, 0, 1}, "micro-corpus token stream");
}

// ---------------------------------------------------------------------------

ErrorKind error_kind(const fs::path& p) {
    try {
        (void)binvox::read_file(p);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Io;  // no error: reported as a mismatch by the caller
}

void binvox_conformance(Check& c) {
    const fs::path dir = testing::fixture_dir() / "binvox";
    for (const char* name : {"empty8.binvox", "checker4.binvox", "nonsquare.binvox", "dense32.binvox"}) {
        const auto bytes = testing::read_bytes(dir / name);
        try {
            const auto file = binvox::parse(bytes);
            c.expect(binvox::write(file.header, file.grid) == bytes, std::string(name) + ": write differs");
        } catch (const std::exception& e) {
            c.expect(false, std::string(name) + ": " + e.what());
        }
    }
    // 512 empty cells in one object: the body must split runs at 255.
    const auto empty8 = testing::read_bytes(dir / "empty8.binvox");
    c.expect(empty8.size() >= 6 && empty8[empty8.size() - 1] == 2 && empty8[empty8.size() - 3] == 255 &&
                 empty8[empty8.size() - 5] == 255,
             "empty8 run split");
    const auto dense = binvox::read_file(dir / "dense32.binvox");
    c.expect(dense.grid.occupied_count() == 9867, "dense32 occupancy");
    c.expect(binvox::read_file(dir / "reordered.binvox").grid.size() > 0, "reordered header");
    c.expect(binvox::read_file(dir / "minimal_header.binvox").header.scale == "1", "minimal header defaults");

    const std::vector<std::pair<const char*, ErrorKind>> malformed{
        {"bad_magic.binvox", ErrorKind::Format},   {"no_dim.binvox", ErrorKind::Format},
        {"bad_dim.binvox", ErrorKind::Format},     {"no_data.binvox", ErrorKind::Format},
        {"zero_count.binvox", ErrorKind::Format},  {"bad_value.binvox", ErrorKind::Format},
        {"overflow.binvox", ErrorKind::LengthMismatch}, {"trailing.binvox", ErrorKind::LengthMismatch},
        {"truncated.binvox", ErrorKind::Truncation}, {"odd_tail.binvox", ErrorKind::Truncation},
    };
    for (const auto& [name, kind] : malformed) {
        const ErrorKind got = error_kind(dir / name);
        c.expect(got == kind, std::string(name) + ": got " + std::string(to_string(got)));
    }
    try {
        (void)binvox::read_file(dir / "truncated.binvox");
    } catch (const TruncationError& e) {
        c.expect(e.cells_decoded() == 13 && e.cells_expected() == 64, "truncation counts");
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"compression factor matches reported per-category lengths (1e-4)", 1.0, reported_table_consistency},
        {"losslessness over 1000 random grids, all strategies", 60.0, losslessness},
        {"micro-examples and example codebook values", 1.0, micro_examples},
        {"column order is a permutation for all sizes in [1,32]^2", 10.0, traversal_permutation},
        {"traversal coherence: frozen byte counts, snake <= raster", 5.0, traversal_coherence},
        {"IoU equals triple-loop count on 200 random 16^3 pairs", 5.0, iou_oracle},
        {"alternating inflation renders 4n bytes", 1.0, inflation},
        {"deterministic build+encode and micro-corpus codebook", 30.0, determinism},
        {"binvox round trip and structured errors", 5.0, binvox_conformance},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.body(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("unexpected exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > criterion.budget_seconds) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "took %.2f s, budget %.0f s", seconds, criterion.budget_seconds);
            check.failures.push_back(buf);
        }
        const bool ok = check.failures.empty();
        failed += ok ? 0 : 1;
        std::printf("[%s] %s (%.2f s)\n", ok ? "PASS" : "FAIL", criterion.name.c_str(), seconds);
        for (const auto& f : check.failures) std::printf("       %s\n", f.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
