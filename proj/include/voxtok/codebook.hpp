// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_CODEBOOK_HPP
#define VOXTOK_CODEBOOK_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxtok/rle.hpp"
#include "voxtok/traversal.hpp"

namespace voxtok {

using TokenId = std::uint32_t;

/// How pattern candidates are ranked while building a codebook.
enum class PatternScore : std::uint8_t {
    FrequencyTimesLength,  // default: frequency * runs, ties to the longer pattern
    FrequencyFirst,        // most frequent, ties to the longer pattern
    LengthFirst,           // longest, ties to the more frequent pattern
};

std::string_view to_string(PatternScore score) noexcept;
std::optional<PatternScore> pattern_score_from_string(std::string_view name) noexcept;

struct BuildParams {
    std::size_t min_frequency = 2;
    std::size_t max_pattern_runs = 8;
    std::size_t max_vocab = 4096;  // cap on pattern tokens; singletons come on top
    PatternScore score = PatternScore::FrequencyTimesLength;

    friend bool operator==(const BuildParams&, const BuildParams&) = default;
};

/// Throws InvalidArgument unless min_frequency >= 2 and max_pattern_runs >= 1.
void validate(const BuildParams& params);

/**
 * Immutable dictionary mapping dense token ids to non-empty run sequences.
 *
 * The id() is the FNV-1a 64 hash of the canonical saved form, so two
 * codebooks with equal entries, params and strategy share an id.
 */
class Codebook {
public:
    /// Throws Format if a value is empty or two values are equal.
    Codebook(Strategy strategy, BuildParams params, std::vector<RleSequence> values);

    std::size_t size() const noexcept { return values_.size(); }
    Strategy strategy() const noexcept { return strategy_; }
    const BuildParams& params() const noexcept { return params_; }
    const std::string& id() const noexcept { return id_; }
    std::uint64_t id_value() const noexcept { return id_value_; }

    /// Throws InvalidTokenError when id >= size().
    const RleSequence& value(TokenId id) const;
    const std::vector<RleSequence>& values() const noexcept { return values_; }

    std::optional<TokenId> find(std::span<const Run> value) const;

    /**
     * Left-to-right longest match. At each position the longest token is
     * taken among those that still leave the remainder coverable; when
     * plain greedy succeeds this is exactly plain greedy.
     * Throws OutOfVocabulary naming the first run that cannot be covered.
     */
    std::vector<TokenId> tokenize_runs(std::span<const Run> runs) const;

    friend bool operator==(const Codebook& a, const Codebook& b) {
        return a.strategy_ == b.strategy_ && a.params_ == b.params_ && a.values_ == b.values_;
    }

private:
    struct TrieNode {
        std::map<Run, std::uint32_t> next;
        std::optional<TokenId> token;
    };

    Strategy strategy_;
    BuildParams params_;
    std::vector<RleSequence> values_;
    std::vector<TrieNode> trie_;
    std::string id_;
    std::uint64_t id_value_ = 0;
};

/**
 * Greedy dictionary builder over a corpus of RLE sequences.
 *
 * Each step counts every contiguous window of 2..max_pattern_runs bare runs
 * (non-overlapping, leftmost-first within a sequence; windows never span a
 * sequence or an already substituted token), picks the best-ranked window
 * occurring at least min_frequency times, and substitutes it by a new token.
 * After the last step every bare run still left gets a singleton token.
 */
class CodebookBuilder {
public:
    /// Throws InvalidArgument on an empty corpus or invalid params.
    CodebookBuilder(std::span<const RleSequence> corpus, BuildParams params);
    ~CodebookBuilder();
    CodebookBuilder(const CodebookBuilder&) = delete;
    CodebookBuilder& operator=(const CodebookBuilder&) = delete;

    /// Performs one substitution round; false once no candidate qualifies
    /// or max_vocab pattern tokens exist.
    bool step();

    std::size_t pattern_count() const noexcept;
    const RleSequence& pattern(std::size_t index) const;

    /// Working corpus with tokens expanded back to runs.
    std::vector<RleSequence> expand_working() const;

    /// Runs all remaining steps and appends singleton tokens.
    Codebook finish(Strategy strategy);

private:
    struct State;
    std::unique_ptr<State> state_;
};

Codebook build_codebook(std::span<const RleSequence> corpus, const BuildParams& params, Strategy strategy);

/// Canonical JSON form (single line, trailing newline).
std::string save_codebook(const Codebook& book);
/// Throws Format on malformed input, version mismatch or id gaps.
Codebook load_codebook(std::string_view bytes);

Codebook read_codebook_file(const std::string& path);
void write_codebook_file(const std::string& path, const Codebook& book);

}  // namespace voxtok

#endif  // VOXTOK_CODEBOOK_HPP
