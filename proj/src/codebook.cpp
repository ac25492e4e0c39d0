// SPDX-License-Identifier: Apache-2.0

#include "voxtok/codebook.hpp"

#include <fstream>
#include <iterator>
#include <set>

#include <json.hpp>

#include "voxtok/error.hpp"
#include "voxtok/hash.hpp"

namespace voxtok {
namespace {

constexpr int kCodebookVersion = 1;

[[noreturn]] void format_error(const std::string& what) {
    throw Error(ErrorKind::Format, "codebook: " + what);
}

}  // namespace

std::string_view to_string(PatternScore score) noexcept {
    switch (score) {
        case PatternScore::FrequencyTimesLength: return "frequency-x-length";
        case PatternScore::FrequencyFirst: return "frequency-first";
        case PatternScore::LengthFirst: return "length-first";
    }
    return "unknown";
}

std::optional<PatternScore> pattern_score_from_string(std::string_view name) noexcept {
    for (auto s : {PatternScore::FrequencyTimesLength, PatternScore::FrequencyFirst, PatternScore::LengthFirst}) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

void validate(const BuildParams& params) {
    if (params.min_frequency < 2) {
        throw Error(ErrorKind::InvalidArgument, "min_frequency must be >= 2");
    }
    if (params.max_pattern_runs < 1) {
        throw Error(ErrorKind::InvalidArgument, "max_pattern_runs must be >= 1");
    }
}

Codebook::Codebook(Strategy strategy, BuildParams params, std::vector<RleSequence> values)
    : strategy_(strategy), params_(params), values_(std::move(values)) {
    trie_.emplace_back();
    for (std::size_t id = 0; id < values_.size(); ++id) {
        const RleSequence& v = values_[id];
        if (v.empty()) format_error("token " + std::to_string(id) + " has an empty value");
        std::uint32_t node = 0;
        for (const Run& r : v) {
            if (r.rep == 0) format_error("token " + std::to_string(id) + " has a zero-length run");
            auto it = trie_[node].next.find(r);
            if (it == trie_[node].next.end()) {
                const auto child = static_cast<std::uint32_t>(trie_.size());
                trie_[node].next.emplace(r, child);
                trie_.emplace_back();
                node = child;
            } else {
                node = it->second;
            }
        }
        if (trie_[node].token) {
            format_error("tokens " + std::to_string(*trie_[node].token) + " and " + std::to_string(id) +
                         " share the value " + render_rle(v));
        }
        trie_[node].token = static_cast<TokenId>(id);
    }
    id_value_ = fnv1a64(save_codebook(*this));
    id_ = to_hex(id_value_);
}

const RleSequence& Codebook::value(TokenId id) const {
    if (id >= values_.size()) throw InvalidTokenError(id, values_.size());
    return values_[id];
}

std::optional<TokenId> Codebook::find(std::span<const Run> value) const {
    std::uint32_t node = 0;
    for (const Run& r : value) {
        auto it = trie_[node].next.find(r);
        if (it == trie_[node].next.end()) return std::nullopt;
        node = it->second;
    }
    return trie_[node].token;
}

std::vector<TokenId> Codebook::tokenize_runs(std::span<const Run> runs) const {
    const std::size_t n = runs.size();
    // best_len[i] == 0 means runs[i..] cannot be covered.
    std::vector<std::uint32_t> best_len(n + 1, 0);
    std::vector<TokenId> best_token(n, 0);
    std::vector<bool> coverable(n + 1, false);
    coverable[n] = true;
    for (std::size_t i = n; i-- > 0;) {
        std::uint32_t node = 0;
        for (std::size_t j = i; j < n; ++j) {
            auto it = trie_[node].next.find(runs[j]);
            if (it == trie_[node].next.end()) break;
            node = it->second;
            if (trie_[node].token && coverable[j + 1]) {
                best_len[i] = static_cast<std::uint32_t>(j + 1 - i);
                best_token[i] = *trie_[node].token;
            }
        }
        coverable[i] = best_len[i] != 0;
    }

    if (!coverable[0]) {
        // The last uncoverable position is the run no token can absorb.
        std::size_t bad = n;
        while (coverable[bad]) --bad;
        throw Error(ErrorKind::OutOfVocabulary, "run " + render_run(runs[bad]) + " at index " + std::to_string(bad) +
                                                    " is not covered by the codebook");
    }
    std::vector<TokenId> out;
    std::size_t i = 0;
    while (i < n) {
        out.push_back(best_token[i]);
        i += best_len[i];
    }
    return out;
}

std::string save_codebook(const Codebook& book) {
    nlohmann::ordered_json doc;
    doc["version"] = kCodebookVersion;
    doc["strategy"] = std::string(to_string(book.strategy()));
    nlohmann::ordered_json params;
    params["min_frequency"] = book.params().min_frequency;
    params["max_pattern_runs"] = book.params().max_pattern_runs;
    params["max_vocab"] = book.params().max_vocab;
    if (book.params().score != PatternScore::FrequencyTimesLength) {
        params["score"] = std::string(to_string(book.params().score));
    }
    doc["params"] = std::move(params);
    auto tokens = nlohmann::ordered_json::array();
    for (std::size_t id = 0; id < book.size(); ++id) {
        nlohmann::ordered_json entry;
        entry["id"] = id;
        entry["value"] = render_rle(book.values()[id]);
        tokens.push_back(std::move(entry));
    }
    doc["tokens"] = std::move(tokens);
    return doc.dump() + "\n";
}

Codebook load_codebook(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::parse_error& e) {
        format_error(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object()) format_error("top level must be an object");
        if (!doc.contains("version") || !doc["version"].is_number_integer()) format_error("missing version");
        const int version = doc["version"].get<int>();
        if (version != kCodebookVersion) {
            format_error("unsupported version " + std::to_string(version) + " (expected " +
                         std::to_string(kCodebookVersion) + ")");
        }
        const auto strategy = strategy_from_string(doc.at("strategy").get<std::string>());
        if (!strategy) format_error("unknown strategy '" + doc.at("strategy").get<std::string>() + "'");

        const auto& p = doc.at("params");
        BuildParams params;
        params.min_frequency = p.at("min_frequency").get<std::size_t>();
        params.max_pattern_runs = p.at("max_pattern_runs").get<std::size_t>();
        params.max_vocab = p.at("max_vocab").get<std::size_t>();
        if (p.contains("score")) {
            const auto score = pattern_score_from_string(p.at("score").get<std::string>());
            if (!score) format_error("unknown score '" + p.at("score").get<std::string>() + "'");
            params.score = *score;
        }

        const auto& tokens = doc.at("tokens");
        if (!tokens.is_array()) format_error("tokens must be an array");
        std::vector<RleSequence> values;
        values.reserve(tokens.size());
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            const auto& entry = tokens[i];
            const auto id = entry.at("id").get<std::int64_t>();
            if (id != static_cast<std::int64_t>(i)) {
                format_error("token ids must be dense from 0; entry " + std::to_string(i) + " has id " +
                             std::to_string(id));
            }
            try {
                values.push_back(parse_rle(entry.at("value").get<std::string>()));
            } catch (const ParseError& e) {
                format_error("token " + std::to_string(i) + ": " + e.what());
            }
        }
        return Codebook(*strategy, params, std::move(values));
    } catch (const nlohmann::json::exception& e) {
        format_error(std::string("malformed entry: ") + e.what());
    }
}

Codebook read_codebook_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open codebook " + path);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_codebook(bytes);
}

void write_codebook_file(const std::string& path, const Codebook& book) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write codebook " + path);
    out << save_codebook(book);
    if (!out) throw Error(ErrorKind::Io, "short write to " + path);
}

}  // namespace voxtok
