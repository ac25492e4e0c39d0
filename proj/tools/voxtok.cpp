// SPDX-License-Identifier: Apache-2.0

// voxtok: dataset toolchain for run-length tokenized voxel grids.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voxtok/error.hpp"
#include "voxtok/pipeline.hpp"

namespace fs = std::filesystem;
using namespace voxtok;
using namespace voxtok::pipeline;

namespace {

struct Options {
    std::string strategy;
    std::string manifest;
    std::string codebook;
    std::string out;
    std::size_t min_frequency = BuildParams{}.min_frequency;
    std::size_t max_pattern_runs = BuildParams{}.max_pattern_runs;
    std::size_t max_vocab = BuildParams{}.max_vocab;
    std::string score = std::string(to_string(PatternScore::FrequencyTimesLength));
    std::size_t workers = 1;
    std::string format = "csv";
    bool binary_streams = false;
    std::string category;
    bool all_strategies = false;
    std::vector<std::string> inputs;
    std::string root;
    std::string images_root;
};

Config make_config(const Options& o) {
    Config c;
    if (!o.strategy.empty()) c.strategy = parse_strategy(o.strategy);
    c.params.min_frequency = o.min_frequency;
    c.params.max_pattern_runs = o.max_pattern_runs;
    c.params.max_vocab = o.max_vocab;
    const auto score = pattern_score_from_string(o.score);
    if (!score) throw Error(ErrorKind::InvalidArgument, "unknown --score '" + o.score + "'");
    c.params.score = *score;
    c.out_dir = o.out;
    if (!o.codebook.empty()) c.codebook_path = o.codebook;
    c.workers = o.workers;
    c.format = o.format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    c.binary_streams = o.binary_streams;
    if (!o.category.empty()) c.category = o.category;
    c.all_strategies = o.all_strategies;
    validate_config(c);
    return c;
}

Manifest checked_manifest(const Options& o) {
    if (o.manifest.empty()) throw FatalError("--manifest is required");
    Manifest m = load_manifest(o.manifest);
    const auto problems = validate_manifest(m);
    if (!problems.empty()) {
        std::string msg = "invalid manifest " + o.manifest + ":";
        for (const auto& p : problems) msg += "\n  " + p;
        throw FatalError(msg);
    }
    return m;
}

void report_failures(const std::vector<ObjectFailure>& failures) {
    for (const auto& f : failures) std::cerr << "voxtok: " << f.object_id << ": " << f.message << '\n';
}

int run_build(const Options& o) {
    const Config config = make_config(o);
    if (config.out_dir.empty() && !config.codebook_path) throw FatalError("build-codebook needs --codebook or --out");
    const auto result = cmd_build_codebook(checked_manifest(o), config);
    report_failures(result.failures);
    std::cout << "codebook " << result.codebook_file.string() << " id " << result.book.id() << " tokens "
              << result.book.size() << " objects " << result.objects_used << '\n';
    return result.failures.empty() ? kSuccess : kPartialFailure;
}

int run_encode(const Options& o) {
    const auto result = cmd_encode(checked_manifest(o), make_config(o));
    std::size_t failed = 0;
    for (const auto& row : result.rows) {
        if (!row.ok) {
            ++failed;
            std::cerr << "voxtok: " << row.object_id << ": " << row.message << '\n';
        }
    }
    std::cout << "encoded " << result.rows.size() - failed << "/" << result.rows.size() << " objects with codebook "
              << result.codebook_id << '\n';
    return result.exit_status();
}

int run_decode(const Options& o) {
    std::vector<fs::path> inputs(o.inputs.begin(), o.inputs.end());
    const auto result = cmd_decode(inputs, make_config(o));
    std::size_t failed = 0;
    for (const auto& row : result.rows) {
        if (!row.ok) {
            ++failed;
            std::cerr << "voxtok: " << row.input.string() << ": " << row.message << '\n';
        }
    }
    std::cout << "decoded " << result.rows.size() - failed << "/" << result.rows.size() << " streams\n";
    return result.exit_status();
}

int run_stats(const Options& o) {
    const Config config = make_config(o);
    const auto result = cmd_stats(checked_manifest(o), config);
    report_failures(result.failures);
    if (config.out_dir.empty()) {
        write_stats_report(std::cout, result, config.format);
    } else {
        fs::create_directories(config.out_dir);
        std::ofstream out(config.out_dir / (config.format == ReportFormat::Json ? "stats.json" : "stats.csv"));
        write_stats_report(out, result, config.format);
    }
    return result.exit_status();
}

int run_verify(const Options& o) {
    const Config config = make_config(o);
    const auto result = cmd_verify(checked_manifest(o), config);
    write_verify_report(std::cout, result, config.format);
    if (!config.out_dir.empty()) {
        fs::create_directories(config.out_dir);
        std::ofstream out(config.out_dir /
                          (config.format == ReportFormat::Json ? "verify_report.json" : "verify_report.csv"));
        write_verify_report(out, result, config.format);
    }
    return result.exit_status();
}

int run_manifest_init(const Options& o) {
    if (o.root.empty() || o.manifest.empty()) throw FatalError("manifest-init needs --root and --manifest");
    std::optional<fs::path> images;
    if (!o.images_root.empty()) images = fs::path(o.images_root);
    const Manifest m = scan_directory(o.root, images);
    Manifest relative = m;
    // Store the root relative to the manifest location when possible.
    const fs::path manifest_dir = fs::absolute(o.manifest).parent_path();
    relative.dataset_root = fs::absolute(m.dataset_root).lexically_relative(manifest_dir);
    if (relative.dataset_root.empty()) relative.dataset_root = fs::absolute(m.dataset_root);
    save_manifest(o.manifest, relative);
    std::cout << "wrote " << m.records.size() << " records to " << o.manifest << '\n';
    return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voxtok: lossless run-length tokenization of voxel grids"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--strategy", o.strategy, "Column traversal: snake|spiral|raster")
            ->check(CLI::IsMember({"snake", "spiral", "raster"}));
        sub->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--category", o.category, "Only process records of this category");
    };
    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--min-frequency", o.min_frequency, "Minimum pattern occurrences")->check(CLI::Range(2, 1 << 30));
        sub->add_option("--max-pattern-runs", o.max_pattern_runs, "Longest pattern in runs")->check(CLI::PositiveNumber);
        sub->add_option("--max-vocab", o.max_vocab, "Maximum number of pattern tokens");
        sub->add_option("--score", o.score, "Pattern ranking: frequency-x-length|frequency-first|length-first");
    };

    auto* build = app.add_subcommand("build-codebook", "Build a codebook over a manifest");
    add_common(build);
    add_params(build);
    build->add_option("--manifest", o.manifest)->required();
    build->add_option("--codebook", o.codebook, "Codebook file to write (default <out>/codebook.json)");
    build->add_option("--out", o.out, "Output directory");

    auto* encode = app.add_subcommand("encode", "Encode manifest objects into token streams");
    add_common(encode);
    add_params(encode);
    encode->add_option("--manifest", o.manifest)->required();
    encode->add_option("--codebook", o.codebook, "Codebook to use; built and written here if missing");
    encode->add_option("--out", o.out, "Output directory")->required();
    encode->add_flag("--binary-streams", o.binary_streams, "Write binary .svtk streams");

    auto* decode = app.add_subcommand("decode", "Decode token streams into binvox files");
    add_common(decode);
    decode->add_option("--codebook", o.codebook)->required();
    decode->add_option("--out", o.out, "Output directory")->required();
    decode->add_option("inputs", o.inputs, ".svtk files or directories")->required();

    auto* stats = app.add_subcommand("stats", "Per-category RLE size and compression factor");
    add_common(stats);
    stats->add_option("--manifest", o.manifest)->required();
    stats->add_option("--out", o.out, "Write the report here instead of stdout");
    stats->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    stats->add_flag("--all-strategies", o.all_strategies, "Report snake, spiral and raster side by side");

    auto* verify = app.add_subcommand("verify", "Check lossless round trips for every object and strategy");
    add_common(verify);
    add_params(verify);
    verify->add_option("--manifest", o.manifest)->required();
    verify->add_option("--codebook", o.codebook, "Use this codebook for its strategy");
    verify->add_option("--out", o.out, "Also write the report into this directory");
    verify->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

    auto* init = app.add_subcommand("manifest-init", "Scan a directory tree of .binvox files into a manifest");
    init->add_option("--root", o.root)->required();
    init->add_option("--images-root", o.images_root, "Root of rendered views (<root>/<object_id>/rendering)");
    init->add_option("--manifest", o.manifest, "Manifest file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kFatal;
    }

    try {
        if (*build) return run_build(o);
        if (*encode) return run_encode(o);
        if (*decode) return run_decode(o);
        if (*stats) return run_stats(o);
        if (*verify) return run_verify(o);
        if (*init) return run_manifest_init(o);
    } catch (const FatalError& e) {
        std::cerr << "voxtok: fatal: " << e.what() << '\n';
        return kFatal;
    } catch (const Error& e) {
        std::cerr << "voxtok: fatal: " << e.what() << '\n';
        return kFatal;
    } catch (const std::exception& e) {
        std::cerr << "voxtok: fatal: " << e.what() << '\n';
        return kFatal;
    }
    return kFatal;
}
