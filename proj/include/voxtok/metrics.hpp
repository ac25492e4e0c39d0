// SPDX-License-Identifier: Apache-2.0

#ifndef VOXTOK_METRICS_HPP
#define VOXTOK_METRICS_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "voxtok/grid.hpp"
#include "voxtok/rle.hpp"

namespace voxtok {

struct IoUResult {
    std::size_t intersection = 0;
    std::size_t union_count = 0;
    double iou = 0.0;
    bool both_empty = false;  // union == 0; iou is reported as 1.0
};

/// Intersection over union of the occupied cells. Throws InvalidArgument on
/// a dims mismatch.
IoUResult iou(const VoxelGrid& a, const VoxelGrid& b);

struct CategoryStats {
    std::string category;
    std::size_t object_count = 0;
    double mean_rle_bytes = 0.0;
    double mean_cf = 0.0;
};

struct StatsTable {
    std::vector<CategoryStats> categories;  // first-appearance order
    CategoryStats overall;                  // unweighted mean of category means
    std::vector<std::string> warnings;
};

/// Per-category means of rle_bytes and cf. Reports with an empty category
/// name are skipped and noted in warnings.
StatsTable corpus_stats(const std::vector<std::pair<std::string, CompressionReport>>& reports);

/// `category,object_count,mean_rle_bytes,mean_cf` with a trailing `overall` row.
void write_stats_csv(std::ostream& out, const StatsTable& table);
void write_stats_json(std::ostream& out, const StatsTable& table);

}  // namespace voxtok

#endif  // VOXTOK_METRICS_HPP
