// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_PIPELINE_HPP
#define VOXTOK_PIPELINE_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "voxtok/codebook.hpp"
#include "voxtok/metrics.hpp"
#include "voxtok/token_stream.hpp"

namespace voxtok::pipeline {

namespace fs = std::filesystem;

inline constexpr std::size_t kMaxViews = 24;

struct ManifestRecord {
    std::string object_id;
    std::string category;
    fs::path binvox;             // relative paths resolve against dataset_root
    std::vector<fs::path> views;  // rendered images, carried as opaque metadata
};

struct Manifest {
    fs::path dataset_root;
    std::vector<ManifestRecord> records;

    fs::path resolve(const fs::path& p) const { return p.is_absolute() ? p : dataset_root / p; }
};

/**
 * Manifest file: a JSON object
 *   {"dataset_root": "...", "records": [{"object_id", "category", "binvox", "views": [...]}, ...]}
 * written one record per line. A relative dataset_root is taken relative to
 * the manifest's own directory. Throws Format on malformed input.
 */
Manifest load_manifest(const fs::path& path);
std::string manifest_to_string(const Manifest& manifest);
void save_manifest(const fs::path& path, const Manifest& manifest);

/// Problems that make a manifest unusable; empty means valid. Checks unique
/// and safe object ids, view counts and that every binvox path exists.
std::vector<std::string> validate_manifest(const Manifest& manifest);

/**
 * Builds a manifest from every *.binvox under `root`. A file named
 * model.binvox is identified by its directory (ShapeNet layout), any other
 * file by its path without extension. The category is the first path
 * component, or "default" for files directly under root. Views are the
 * sorted *.png / *.jpg files (at most 24) in `<images_root>/<object_id>/rendering`
 * when images_root is given, else in a `rendering` directory next to the binvox.
 */
Manifest scan_directory(const fs::path& root, const std::optional<fs::path>& images_root = std::nullopt);

enum class ReportFormat { Csv, Json };

struct Config {
    std::optional<Strategy> strategy;  // unset: codebook's strategy, or snake
    BuildParams params;
    fs::path out_dir;
    std::optional<fs::path> codebook_path;
    std::size_t workers = 1;
    ReportFormat format = ReportFormat::Csv;
    bool binary_streams = false;
    std::optional<std::string> category;  // restrict to one category
    bool all_strategies = false;          // stats only

    Strategy effective_strategy() const { return strategy.value_or(Strategy::Snake); }
};

/// Throws InvalidArgument on unusable settings. Called before any file is written.
void validate_config(const Config& config);

/// Raised for whole-run failures (exit status 2).
class FatalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitStatus : int { kSuccess = 0, kPartialFailure = 1, kFatal = 2 };

struct ObjectFailure {
    std::string object_id;
    std::string message;
};

struct BuildResult {
    Codebook book;
    std::size_t objects_used = 0;
    std::vector<ObjectFailure> failures;
    fs::path codebook_file;
};

/// Builds over every readable object in manifest order and writes the
/// codebook to config.codebook_path (default <out>/codebook.json).
/// Throws FatalError when no object is readable.
BuildResult cmd_build_codebook(const Manifest& manifest, const Config& config);

struct EncodeRow {
    std::string object_id;
    std::string category;
    bool ok = false;
    std::size_t rle_bytes = 0;
    std::size_t token_count = 0;
    double cf = 0.0;
    std::string message;
};

struct EncodeResult {
    std::string codebook_id;
    bool built_codebook = false;
    std::vector<EncodeRow> rows;  // manifest order

    int exit_status() const;
};

/// Writes <out>/<object_id>.svtk per object plus <out>/encode_log.csv.
/// Loads config.codebook_path when it exists, otherwise builds one first.
EncodeResult cmd_encode(const Manifest& manifest, const Config& config);

struct DecodeRow {
    fs::path input;
    fs::path output;
    bool ok = false;
    std::string message;
};

struct DecodeResult {
    std::vector<DecodeRow> rows;
    int exit_status() const;
};

/// Decodes .svtk files (directories are searched recursively) into binvox
/// files under config.out_dir and writes <out>/decode_log.csv. A stream made
/// with another codebook, or a strategy differing from config.strategy, is
/// fatal and detected before anything is written.
DecodeResult cmd_decode(const std::vector<fs::path>& inputs, const Config& config);

struct StatsResult {
    std::vector<Strategy> strategies;
    std::vector<StatsTable> tables;  // parallel to strategies
    std::vector<ObjectFailure> failures;

    int exit_status() const { return failures.empty() ? kSuccess : kPartialFailure; }
};

StatsResult cmd_stats(const Manifest& manifest, const Config& config);
void write_stats_report(std::ostream& out, const StatsResult& result, ReportFormat format);

struct VerifyRow {
    std::string object_id;
    std::string strategy;  // "-" when the object could not be read
    bool ok = false;
    std::string message;
};

struct VerifyResult {
    std::vector<VerifyRow> rows;
    int exit_status() const;
};

/// Round-trips every object through every strategy: linearize, RLE, text
/// render/parse, tokenize/detokenize, delinearize and binvox write/parse.
/// Tokenization uses config.codebook_path for its own strategy when given,
/// otherwise a codebook built from the object alone.
VerifyResult cmd_verify(const Manifest& manifest, const Config& config);
void write_verify_report(std::ostream& out, const VerifyResult& result, ReportFormat format);

}  // namespace voxtok::pipeline

#endif  // VOXTOK_PIPELINE_HPP
