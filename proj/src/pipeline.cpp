// SPDX-License-Identifier: Apache-2.0

#include "voxtok/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "voxtok/binvox.hpp"
#include "voxtok/error.hpp"

namespace voxtok::pipeline {
namespace {

constexpr const char* kStreamExtension = ".svtk";

// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions escaping
// fn are rethrown on the caller after all workers stop.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<const ManifestRecord*> selected_records(const Manifest& manifest, const Config& config) {
    std::vector<const ManifestRecord*> out;
    for (const auto& r : manifest.records) {
        if (!config.category || r.category == *config.category) out.push_back(&r);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

fs::path default_codebook_path(const Config& config) {
    return config.codebook_path.value_or(config.out_dir / "codebook.json");
}

void ensure_dir(const fs::path& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw FatalError("cannot create directory " + dir.string() + ": " + ec.message());
}

struct LoadedObject {
    std::optional<RleSequence> runs;
    std::string error;
};

}  // namespace

void validate_config(const Config& config) {
    validate(config.params);
    if (config.workers == 0) throw Error(ErrorKind::InvalidArgument, "--workers must be >= 1");
}

int EncodeResult::exit_status() const {
    return std::all_of(rows.begin(), rows.end(), [](const EncodeRow& r) { return r.ok; }) ? kSuccess
                                                                                            : kPartialFailure;
}

int DecodeResult::exit_status() const {
    return std::all_of(rows.begin(), rows.end(), [](const DecodeRow& r) { return r.ok; }) ? kSuccess
                                                                                            : kPartialFailure;
}

int VerifyResult::exit_status() const {
    return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.ok; }) ? kSuccess
                                                                                            : kPartialFailure;
}

BuildResult cmd_build_codebook(const Manifest& manifest, const Config& config) {
    validate_config(config);
    const Strategy strategy = config.effective_strategy();
    const auto records = selected_records(manifest, config);
    std::vector<LoadedObject> loaded(records.size());
    parallel_for(records.size(), config.workers, [&](std::size_t i) {
        try {
            const auto file = binvox::read_file(manifest.resolve(records[i]->binvox));
            loaded[i].runs = rle_encode(linearize(file.grid, strategy));
        } catch (const std::exception& e) {
            loaded[i].error = e.what();
        }
    });

    std::vector<RleSequence> corpus;
    std::vector<ObjectFailure> failures;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (loaded[i].runs) {
            corpus.push_back(std::move(*loaded[i].runs));
        } else {
            failures.push_back({records[i]->object_id, loaded[i].error});
        }
    }
    if (corpus.empty()) {
        throw FatalError("no readable objects to build a codebook from (" + std::to_string(failures.size()) +
                         " failed)");
    }

    BuildResult result{build_codebook(corpus, config.params, strategy), corpus.size(), std::move(failures), {}};
    result.codebook_file = default_codebook_path(config);
    ensure_dir(result.codebook_file.parent_path());
    write_codebook_file(result.codebook_file.string(), result.book);
    return result;
}

EncodeResult cmd_encode(const Manifest& manifest, const Config& config) {
    validate_config(config);
    if (config.out_dir.empty()) throw FatalError("encode needs an output directory");

    EncodeResult result;
    std::optional<Codebook> book;
    std::error_code ec;
    if (config.codebook_path && fs::exists(*config.codebook_path, ec)) {
        book = read_codebook_file(config.codebook_path->string());
        if (config.strategy && *config.strategy != book->strategy()) {
            throw FatalError("codebook was built for strategy " + std::string(to_string(book->strategy())) +
                             ", --strategy asks for " + std::string(to_string(*config.strategy)));
        }
    } else {
        book = cmd_build_codebook(manifest, config).book;
        result.built_codebook = true;
    }
    result.codebook_id = book->id();
    ensure_dir(config.out_dir);

    const auto records = selected_records(manifest, config);
    result.rows.resize(records.size());
    parallel_for(records.size(), config.workers, [&](std::size_t i) {
        EncodeRow& row = result.rows[i];
        row.object_id = records[i]->object_id;
        row.category = records[i]->category;
        try {
            const auto file = binvox::read_file(manifest.resolve(records[i]->binvox));
            const auto runs = rle_encode(linearize(file.grid, book->strategy()));
            const auto report = compression_factor(runs, file.grid.size());
            const auto stream = tokenize(runs, *book, file.grid.dims());
            const fs::path target = config.out_dir / (row.object_id + kStreamExtension);
            std::error_code dir_ec;
            fs::create_directories(target.parent_path(), dir_ec);
            write_stream_file(target, stream, config.binary_streams);
            row.rle_bytes = report.rle_bytes;
            row.cf = report.cf;
            row.token_count = stream.tokens.size();
            row.ok = true;
        } catch (const std::exception& e) {
            row.message = e.what();
        }
    });

    std::ofstream log(config.out_dir / "encode_log.csv", std::ios::binary | std::ios::trunc);
    log << "object_id,category,status,rle_bytes,token_count,cf,message\n";
    for (const auto& row : result.rows) {
        log << csv_field(row.object_id) << ',' << csv_field(row.category) << ',' << (row.ok ? "ok" : "error") << ','
            << row.rle_bytes << ',' << row.token_count << ',' << fixed(row.cf, 6) << ',' << csv_field(row.message)
            << '\n';
    }
    return result;
}

DecodeResult cmd_decode(const std::vector<fs::path>& inputs, const Config& config) {
    if (!config.codebook_path) throw FatalError("decode needs --codebook");
    if (config.out_dir.empty()) throw FatalError("decode needs an output directory");
    const Codebook book = read_codebook_file(config.codebook_path->string());

    // (input file, output path relative to out_dir)
    std::vector<std::pair<fs::path, fs::path>> jobs;
    for (const auto& input : inputs) {
        std::error_code ec;
        if (fs::is_directory(input, ec)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::recursive_directory_iterator(input)) {
                if (entry.is_regular_file() && entry.path().extension() == kStreamExtension) {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            for (const auto& f : found) {
                jobs.emplace_back(f, f.lexically_relative(input).replace_extension(".binvox"));
            }
        } else {
            jobs.emplace_back(input, input.filename().replace_extension(".binvox"));
        }
    }

    DecodeResult result;
    result.rows.resize(jobs.size());
    std::vector<std::optional<TokenStream>> streams(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        result.rows[i].input = jobs[i].first;
        result.rows[i].output = config.out_dir / jobs[i].second;
        try {
            streams[i] = read_stream_file(jobs[i].first);
        } catch (const std::exception& e) {
            result.rows[i].message = e.what();
        }
    }
    // Metadata guards run before any output exists.
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!streams[i]) continue;
        if (streams[i]->codebook_id != book.id()) {
            throw FatalError(jobs[i].first.string() + ": stream was made with codebook " + streams[i]->codebook_id +
                             ", but " + config.codebook_path->string() + " is " + book.id());
        }
        if (config.strategy && streams[i]->strategy != *config.strategy) {
            throw FatalError(jobs[i].first.string() + ": stream strategy is " +
                             std::string(to_string(streams[i]->strategy)) + ", --strategy asks for " +
                             std::string(to_string(*config.strategy)));
        }
    }

    ensure_dir(config.out_dir);
    parallel_for(jobs.size(), config.workers, [&](std::size_t i) {
        if (!streams[i]) return;
        DecodeRow& row = result.rows[i];
        try {
            const VoxelGrid grid = decode_grid(*streams[i], book);
            std::error_code ec;
            fs::create_directories(row.output.parent_path(), ec);
            binvox::write_file(row.output, binvox::default_header(grid.dims()), grid);
            row.ok = true;
        } catch (const std::exception& e) {
            row.message = e.what();
        }
    });

    std::ofstream log(config.out_dir / "decode_log.csv", std::ios::binary | std::ios::trunc);
    log << "input,output,status,message\n";
    for (const auto& row : result.rows) {
        log << csv_field(row.input.generic_string()) << ',' << csv_field(row.output.generic_string()) << ','
            << (row.ok ? "ok" : "error") << ',' << csv_field(row.message) << '\n';
    }
    return result;
}

StatsResult cmd_stats(const Manifest& manifest, const Config& config) {
    validate_config(config);
    StatsResult result;
    if (config.all_strategies) {
        result.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
    } else {
        result.strategies.push_back(config.effective_strategy());
    }
    const auto records = selected_records(manifest, config);
    // reports[i][s]
    std::vector<std::vector<CompressionReport>> reports(records.size());
    std::vector<std::string> errors(records.size());
    parallel_for(records.size(), config.workers, [&](std::size_t i) {
        try {
            const auto file = binvox::read_file(manifest.resolve(records[i]->binvox));
            for (Strategy s : result.strategies) {
                reports[i].push_back(compression_factor(rle_encode(linearize(file.grid, s)), file.grid.size()));
            }
        } catch (const std::exception& e) {
            errors[i] = e.what();
            reports[i].clear();
        }
    });
    for (std::size_t s = 0; s < result.strategies.size(); ++s) {
        std::vector<std::pair<std::string, CompressionReport>> per_object;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (errors[i].empty()) per_object.emplace_back(records[i]->category, reports[i][s]);
        }
        result.tables.push_back(corpus_stats(per_object));
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!errors[i].empty()) result.failures.push_back({records[i]->object_id, errors[i]});
    }
    return result;
}

void write_stats_report(std::ostream& out, const StatsResult& result, ReportFormat format) {
    if (result.tables.size() == 1) {
        if (format == ReportFormat::Csv) {
            write_stats_csv(out, result.tables.front());
        } else {
            write_stats_json(out, result.tables.front());
        }
        return;
    }
    // One column group per strategy; the category rows are identical across tables.
    const auto& first = result.tables.front();
    std::vector<const CategoryStats*> rows;
    for (const auto& c : first.categories) rows.push_back(&c);
    rows.push_back(&first.overall);
    auto cell = [&](std::size_t t, std::size_t r) -> const CategoryStats& {
        const auto& table = result.tables[t];
        return r < table.categories.size() ? table.categories[r] : table.overall;
    };
    if (format == ReportFormat::Csv) {
        out << "category,object_count";
        for (Strategy s : result.strategies) out << ',' << to_string(s) << "_mean_rle_bytes";
        for (Strategy s : result.strategies) out << ',' << to_string(s) << "_mean_cf";
        out << '\n';
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out << rows[r]->category << ',' << rows[r]->object_count;
            for (std::size_t t = 0; t < result.tables.size(); ++t) out << ',' << fixed(cell(t, r).mean_rle_bytes, 2);
            for (std::size_t t = 0; t < result.tables.size(); ++t) out << ',' << fixed(cell(t, r).mean_cf, 6);
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        nlohmann::ordered_json j;
        j["category"] = rows[r]->category;
        j["object_count"] = rows[r]->object_count;
        for (std::size_t t = 0; t < result.tables.size(); ++t) {
            const std::string name(to_string(result.strategies[t]));
            j[name + "_mean_rle_bytes"] = cell(t, r).mean_rle_bytes;
            j[name + "_mean_cf"] = cell(t, r).mean_cf;
        }
        doc.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
}

VerifyResult cmd_verify(const Manifest& manifest, const Config& config) {
    validate_config(config);
    std::optional<Codebook> shared;
    if (config.codebook_path) shared = read_codebook_file(config.codebook_path->string());

    const auto records = selected_records(manifest, config);
    std::vector<std::vector<VerifyRow>> per_object(records.size());
    parallel_for(records.size(), config.workers, [&](std::size_t i) {
        const std::string& id = records[i]->object_id;
        binvox::File file{binvox::Header{}, VoxelGrid(1, 1, 1)};
        try {
            file = binvox::read_file(manifest.resolve(records[i]->binvox));
        } catch (const std::exception& e) {
            per_object[i].push_back({id, "-", false, e.what()});
            return;
        }
        for (Strategy s : kAllStrategies) {
            VerifyRow row{id, std::string(to_string(s)), false, {}};
            try {
                const auto runs = rle_encode(linearize(file.grid, s));
                if (parse_rle(render_rle(runs)) != runs) throw std::runtime_error("RLE text round trip differs");
                const Codebook book = (shared && shared->strategy() == s)
                                          ? *shared
                                          : build_codebook(std::vector<RleSequence>{runs}, config.params, s);
                const auto stream = tokenize(runs, book, file.grid.dims());
                const auto reparsed = parse_stream(write_stream_binary(stream));
                if (!(reparsed == stream)) throw std::runtime_error("token stream serialization differs");
                if (detokenize(stream, book) != runs) throw std::runtime_error("detokenized runs differ");
                const VoxelGrid back = delinearize(rle_decode(detokenize(stream, book)), s, file.grid.dims());
                if (!(back == file.grid)) throw std::runtime_error("reconstructed grid differs");
                const auto bytes = binvox::write(file.header, back);
                const auto again = binvox::parse(bytes);
                if (!(again.grid == file.grid) || !(again.header == file.header)) {
                    throw std::runtime_error("binvox round trip differs");
                }
                row.ok = true;
            } catch (const std::exception& e) {
                row.message = e.what();
            }
            per_object[i].push_back(std::move(row));
        }
    });

    VerifyResult result;
    for (auto& rows : per_object) {
        for (auto& r : rows) result.rows.push_back(std::move(r));
    }
    return result;
}

void write_verify_report(std::ostream& out, const VerifyResult& result, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        out << "object_id,strategy,status,message\n";
        for (const auto& r : result.rows) {
            out << csv_field(r.object_id) << ',' << r.strategy << ',' << (r.ok ? "pass" : "fail") << ','
                << csv_field(r.message) << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : result.rows) {
        nlohmann::ordered_json j;
        j["object_id"] = r.object_id;
        j["strategy"] = r.strategy;
        j["status"] = r.ok ? "pass" : "fail";
        j["message"] = r.message;
        doc.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
}

}  // namespace voxtok::pipeline
