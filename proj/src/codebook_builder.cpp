// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "voxtok/codebook.hpp"
#include "voxtok/error.hpp"

namespace voxtok {
namespace {

// Working-corpus symbols: bare runs are interned ids, substituted tokens
// carry the high bit.
constexpr std::uint32_t kTokenBit = 0x80000000U;

constexpr bool is_token(std::uint32_t sym) noexcept { return (sym & kTokenBit) != 0; }

constexpr std::uint64_t kHashSeed = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix(std::uint64_t h) noexcept {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint32_t sym) noexcept {
    return mix(h ^ (sym + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

struct Pattern {
    std::uint32_t offset = 0;  // into State::arena
    std::uint32_t length = 0;
    std::int64_t count = 0;
    bool queued = false;
    std::string text;  // filled when first queued

    // scratch for per-sequence counting
    std::uint64_t stamp = 0;
    std::size_t last_end = 0;
    std::int64_t pending = 0;
};

struct QueueKey {
    std::uint64_t primary;
    std::uint64_t secondary;
    std::uint32_t pid;
};

}  // namespace

struct CodebookBuilder::State {
    BuildParams params;
    std::vector<Run> symbols;
    std::map<Run, std::uint32_t> symbol_ids;
    std::vector<std::vector<std::uint32_t>> working;
    std::vector<std::vector<std::uint32_t>> sequences_with_symbol;

    std::vector<std::uint32_t> arena;
    std::vector<Pattern> patterns;
    std::unordered_map<std::uint64_t, std::uint32_t> lookup;

    struct QueueOrder {
        const std::vector<Pattern>* patterns;
        bool operator()(const QueueKey& a, const QueueKey& b) const {
            if (a.primary != b.primary) return a.primary > b.primary;
            if (a.secondary != b.secondary) return a.secondary > b.secondary;
            const auto& ta = (*patterns)[a.pid].text;
            const auto& tb = (*patterns)[b.pid].text;
            if (ta != tb) return ta < tb;
            return a.pid < b.pid;
        }
    };
    std::set<QueueKey, QueueOrder> queue{QueueOrder{&patterns}};

    std::vector<RleSequence> selected;  // pattern token values in id order
    std::uint64_t stamp = 0;
    std::vector<std::uint32_t> touched;

    QueueKey key_of(std::uint32_t pid) const {
        const Pattern& p = patterns[pid];
        const auto count = static_cast<std::uint64_t>(p.count);
        switch (params.score) {
            case PatternScore::FrequencyFirst: return {count, p.length, pid};
            case PatternScore::LengthFirst: return {p.length, count, pid};
            case PatternScore::FrequencyTimesLength: break;
        }
        return {count * p.length, p.length, pid};
    }

    RleSequence runs_of(std::uint32_t pid) const {
        const Pattern& p = patterns[pid];
        RleSequence out;
        out.reserve(p.length);
        for (std::uint32_t i = 0; i < p.length; ++i) out.push_back(symbols[arena[p.offset + i]]);
        return out;
    }

    bool same(const Pattern& p, const std::uint32_t* syms, std::uint32_t len) const {
        return p.length == len && std::equal(syms, syms + len, arena.begin() + p.offset);
    }

    std::uint32_t intern(const std::uint32_t* syms, std::uint32_t len, std::uint64_t hash) {
        for (;;) {
            auto it = lookup.find(hash);
            if (it == lookup.end()) {
                const auto pid = static_cast<std::uint32_t>(patterns.size());
                Pattern p;
                p.offset = static_cast<std::uint32_t>(arena.size());
                p.length = len;
                arena.insert(arena.end(), syms, syms + len);
                patterns.push_back(std::move(p));
                lookup.emplace(hash, pid);
                return pid;
            }
            if (same(patterns[it->second], syms, len)) return it->second;
            hash = mix(hash + 1);  // collision: probe the next slot
        }
    }

    void adjust(std::uint32_t pid, std::int64_t delta) {
        if (delta == 0) return;
        Pattern& p = patterns[pid];
        if (p.queued) {
            queue.erase(key_of(pid));
            p.queued = false;
        }
        p.count += delta;
        if (p.count >= static_cast<std::int64_t>(params.min_frequency)) {
            if (p.text.empty()) p.text = render_rle(runs_of(pid));
            queue.insert(key_of(pid));
            p.queued = true;
        }
    }

    // Adds sign * (non-overlapping leftmost counts of every window in
    // seq[0, n)) to the pending deltas. Windows never span a token, so the
    // counts of separate bare segments are independent.
    void count_span(const std::uint32_t* seq, std::size_t n, std::int64_t sign) {
        ++stamp;
        const std::size_t max_len = params.max_pattern_runs;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_token(seq[i])) continue;
            std::uint64_t h = kHashSeed;
            for (std::size_t len = 1; len <= max_len && i + len <= n; ++len) {
                const std::uint32_t sym = seq[i + len - 1];
                if (is_token(sym)) break;
                h = combine(h, sym);
                if (len < 2) continue;
                const std::uint32_t pid = intern(&seq[i], static_cast<std::uint32_t>(len), h);
                Pattern& p = patterns[pid];
                if (p.stamp != stamp) {
                    p.stamp = stamp;
                    p.last_end = 0;
                }
                if (i >= p.last_end) {
                    if (p.pending == 0) touched.push_back(pid);
                    p.pending += sign;
                    p.last_end = i + len;
                }
            }
        }
    }

    void flush() {
        for (std::uint32_t pid : touched) {
            const std::int64_t delta = patterns[pid].pending;
            patterns[pid].pending = 0;
            adjust(pid, delta);
        }
        touched.clear();
    }

    // Leftmost non-overlapping substitution of pat in seq, recounting only
    // the bare segments that change. Returns false if pat is absent.
    bool substitute(std::vector<std::uint32_t>& seq, const std::vector<std::uint32_t>& pat, std::uint32_t token) {
        const std::size_t m = pat.size();
        const std::size_t n = seq.size();
        std::vector<std::uint32_t> out;
        bool found = false;
        std::size_t copied = 0;  // seq[0, copied) is already in out
        std::size_t seg = 0;
        while (seg < n) {
            while (seg < n && is_token(seq[seg])) ++seg;
            std::size_t end = seg;
            while (end < n && !is_token(seq[end])) ++end;
            if (end - seg >= m) {
                std::size_t i = seg;
                std::size_t piece = 0;  // start of this segment's rewrite in out
                bool hit = false;
                while (i + m <= end) {
                    if (std::equal(pat.begin(), pat.end(), seq.begin() + static_cast<long>(i))) {
                        if (!hit) {
                            if (!found) out.reserve(n);
                            out.insert(out.end(), seq.begin() + static_cast<long>(copied),
                                       seq.begin() + static_cast<long>(seg));
                            piece = out.size();
                            out.insert(out.end(), seq.begin() + static_cast<long>(seg),
                                       seq.begin() + static_cast<long>(i));
                            hit = found = true;
                        } else {
                            out.insert(out.end(), seq.begin() + static_cast<long>(copied),
                                       seq.begin() + static_cast<long>(i));
                        }
                        out.push_back(token);
                        i += m;
                        copied = i;
                    } else {
                        ++i;
                    }
                }
                if (hit) {
                    out.insert(out.end(), seq.begin() + static_cast<long>(copied), seq.begin() + static_cast<long>(end));
                    copied = end;
                    count_span(seq.data() + seg, end - seg, -1);
                    count_span(out.data() + piece, out.size() - piece, +1);
                }
            }
            seg = end;
        }
        if (!found) return false;
        out.insert(out.end(), seq.begin() + static_cast<long>(copied), seq.end());
        seq.swap(out);
        return true;
    }
};

CodebookBuilder::CodebookBuilder(std::span<const RleSequence> corpus, BuildParams params)
    : state_(std::make_unique<State>()) {
    validate(params);
    if (corpus.empty()) {
        throw Error(ErrorKind::InvalidArgument, "cannot build a codebook from an empty corpus");
    }
    State& s = *state_;
    s.params = params;
    s.working.reserve(corpus.size());
    for (std::size_t q = 0; q < corpus.size(); ++q) {
        std::vector<std::uint32_t> seq;
        seq.reserve(corpus[q].size());
        for (const Run& r : corpus[q]) {
            if (r.rep == 0) throw Error(ErrorKind::Format, "corpus contains a run with zero repetitions");
            auto [it, inserted] = s.symbol_ids.emplace(r, static_cast<std::uint32_t>(s.symbols.size()));
            if (inserted) {
                s.symbols.push_back(r);
                s.sequences_with_symbol.emplace_back();
            }
            auto& holders = s.sequences_with_symbol[it->second];
            if (holders.empty() || holders.back() != q) holders.push_back(static_cast<std::uint32_t>(q));
            seq.push_back(it->second);
        }
        s.working.push_back(std::move(seq));
    }
    for (const auto& seq : s.working) s.count_span(seq.data(), seq.size(), +1);
    s.flush();
}

CodebookBuilder::~CodebookBuilder() = default;

bool CodebookBuilder::step() {
    State& s = *state_;
    if (s.selected.size() >= s.params.max_vocab || s.queue.empty()) return false;

    const std::uint32_t pid = s.queue.begin()->pid;
    const Pattern& chosen = s.patterns[pid];
    const std::vector<std::uint32_t> pat(s.arena.begin() + chosen.offset,
                                         s.arena.begin() + chosen.offset + chosen.length);
    const std::uint32_t token = kTokenBit | static_cast<std::uint32_t>(s.selected.size());
    s.selected.push_back(s.runs_of(pid));

    for (std::uint32_t q : s.sequences_with_symbol[pat.front()]) s.substitute(s.working[q], pat, token);
    s.flush();
    return true;
}

std::size_t CodebookBuilder::pattern_count() const noexcept { return state_->selected.size(); }

const RleSequence& CodebookBuilder::pattern(std::size_t index) const { return state_->selected.at(index); }

std::vector<RleSequence> CodebookBuilder::expand_working() const {
    const State& s = *state_;
    std::vector<RleSequence> out;
    out.reserve(s.working.size());
    for (const auto& seq : s.working) {
        RleSequence runs;
        for (std::uint32_t sym : seq) {
            if (is_token(sym)) {
                const auto& v = s.selected[sym & ~kTokenBit];
                runs.insert(runs.end(), v.begin(), v.end());
            } else {
                runs.push_back(s.symbols[sym]);
            }
        }
        out.push_back(std::move(runs));
    }
    return out;
}

Codebook CodebookBuilder::finish(Strategy strategy) {
    while (step()) {
    }
    State& s = *state_;
    std::vector<bool> remaining(s.symbols.size(), false);
    for (const auto& seq : s.working) {
        for (std::uint32_t sym : seq) {
            if (!is_token(sym)) remaining[sym] = true;
        }
    }
    std::vector<Run> singles;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (remaining[i]) singles.push_back(s.symbols[i]);
    }
    std::sort(singles.begin(), singles.end());

    std::vector<RleSequence> values = s.selected;
    for (const Run& r : singles) values.push_back(RleSequence{r});
    return Codebook(strategy, s.params, std::move(values));
}

Codebook build_codebook(std::span<const RleSequence> corpus, const BuildParams& params, Strategy strategy) {
    CodebookBuilder builder(corpus, params);
    return builder.finish(strategy);
}

}  // namespace voxtok
