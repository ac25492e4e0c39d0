// SPDX-License-Identifier: Apache-2.0

#include "voxtok/metrics.hpp"

#include <bit>
#include <cstdio>
#include <map>
#include <ostream>

#include <json.hpp>

#include "voxtok/error.hpp"

namespace voxtok {
namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

IoUResult iou(const VoxelGrid& a, const VoxelGrid& b) {
    if (a.dims() != b.dims()) {
        throw Error(ErrorKind::InvalidArgument,
                    "IoU needs equal dims, got " + to_string(a.dims()) + " and " + to_string(b.dims()));
    }
    IoUResult r;
    const auto wa = a.words();
    const auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        r.intersection += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
        r.union_count += static_cast<std::size_t>(std::popcount(wa[i] | wb[i]));
    }
    if (r.union_count == 0) {
        r.both_empty = true;
        r.iou = 1.0;
    } else {
        r.iou = static_cast<double>(r.intersection) / static_cast<double>(r.union_count);
    }
    return r;
}

StatsTable corpus_stats(const std::vector<std::pair<std::string, CompressionReport>>& reports) {
    StatsTable table;
    std::map<std::string, std::size_t> index;
    std::vector<double> byte_sums;
    std::vector<double> cf_sums;
    for (const auto& [category, report] : reports) {
        if (category.empty()) {
            table.warnings.push_back("skipped report with empty category (" + std::to_string(report.rle_bytes) +
                                     " bytes)");
            continue;
        }
        auto [it, inserted] = index.emplace(category, table.categories.size());
        if (inserted) {
            table.categories.push_back(CategoryStats{category, 0, 0.0, 0.0});
            byte_sums.push_back(0.0);
            cf_sums.push_back(0.0);
        }
        const std::size_t k = it->second;
        ++table.categories[k].object_count;
        byte_sums[k] += static_cast<double>(report.rle_bytes);
        cf_sums[k] += report.cf;
    }

    table.overall.category = "overall";
    for (std::size_t k = 0; k < table.categories.size(); ++k) {
        auto& c = table.categories[k];
        const auto n = static_cast<double>(c.object_count);
        c.mean_rle_bytes = byte_sums[k] / n;
        c.mean_cf = cf_sums[k] / n;
        table.overall.object_count += c.object_count;
        table.overall.mean_rle_bytes += c.mean_rle_bytes;
        table.overall.mean_cf += c.mean_cf;
    }
    if (!table.categories.empty()) {
        const auto n = static_cast<double>(table.categories.size());
        table.overall.mean_rle_bytes /= n;
        table.overall.mean_cf /= n;
    }
    return table;
}

void write_stats_csv(std::ostream& out, const StatsTable& table) {
    out << "category,object_count,mean_rle_bytes,mean_cf\n";
    auto row = [&](const CategoryStats& c) {
        out << c.category << ',' << c.object_count << ',' << fixed(c.mean_rle_bytes, 2) << ','
            << fixed(c.mean_cf, 6) << '\n';
    };
    for (const auto& c : table.categories) row(c);
    row(table.overall);
}

void write_stats_json(std::ostream& out, const StatsTable& table) {
    auto to_json = [](const CategoryStats& c) {
        nlohmann::ordered_json j;
        j["category"] = c.category;
        j["object_count"] = c.object_count;
        j["mean_rle_bytes"] = c.mean_rle_bytes;
        j["mean_cf"] = c.mean_cf;
        return j;
    };
    nlohmann::ordered_json doc;
    doc["categories"] = nlohmann::ordered_json::array();
    for (const auto& c : table.categories) doc["categories"].push_back(to_json(c));
    doc["overall"] = to_json(table.overall);
    doc["warnings"] = table.warnings;
    out << doc.dump(2) << '\n';
}

}  // namespace voxtok
