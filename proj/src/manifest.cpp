// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include <json.hpp>

#include "voxtok/error.hpp"
#include "voxtok/pipeline.hpp"

namespace voxtok::pipeline {
namespace {

[[noreturn]] void format_error(const std::string& what) {
    throw Error(ErrorKind::Format, "manifest: " + what);
}

bool is_image(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> find_views(const fs::path& dir, const fs::path& relative_to) {
    std::vector<fs::path> views;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return views;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_image(entry.path())) {
            views.push_back(entry.path().lexically_relative(relative_to));
        }
    }
    std::sort(views.begin(), views.end());
    if (views.size() > kMaxViews) views.resize(kMaxViews);
    return views;
}

}  // namespace

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open manifest " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        format_error(std::string("invalid JSON: ") + e.what());
    }
    try {
        Manifest m;
        const fs::path base = path.parent_path();
        const fs::path root = doc.value("dataset_root", std::string("."));
        m.dataset_root = (root.is_absolute() ? root : base / root).lexically_normal();
        for (const auto& r : doc.at("records")) {
            ManifestRecord rec;
            rec.object_id = r.at("object_id").get<std::string>();
            rec.category = r.at("category").get<std::string>();
            rec.binvox = r.at("binvox").get<std::string>();
            if (r.contains("views")) {
                for (const auto& v : r.at("views")) rec.views.emplace_back(v.get<std::string>());
            }
            m.records.push_back(std::move(rec));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        format_error(std::string("malformed record: ") + e.what());
    }
}

std::string manifest_to_string(const Manifest& manifest) {
    std::string out = "{\"dataset_root\": " + nlohmann::json(manifest.dataset_root.generic_string()).dump() +
                      ",\n \"records\": [";
    for (std::size_t i = 0; i < manifest.records.size(); ++i) {
        const auto& r = manifest.records[i];
        nlohmann::ordered_json j;
        j["object_id"] = r.object_id;
        j["category"] = r.category;
        j["binvox"] = r.binvox.generic_string();
        j["views"] = nlohmann::ordered_json::array();
        for (const auto& v : r.views) j["views"].push_back(v.generic_string());
        out += (i == 0 ? "\n  " : ",\n  ") + j.dump();
    }
    out += "\n]}\n";
    return out;
}

void save_manifest(const fs::path& path, const Manifest& manifest) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write manifest " + path.string());
    out << manifest_to_string(manifest);
}

std::vector<std::string> validate_manifest(const Manifest& manifest) {
    std::vector<std::string> problems;
    std::set<std::string> seen;
    for (const auto& r : manifest.records) {
        const std::string label = "record '" + r.object_id + "'";
        if (r.object_id.empty()) {
            problems.push_back("record with empty object_id");
        } else if (!seen.insert(r.object_id).second) {
            problems.push_back(label + ": duplicate object_id");
        }
        const fs::path id(r.object_id);
        if (id.is_absolute() ||
            std::any_of(id.begin(), id.end(), [](const fs::path& part) { return part == ".." || part == "."; })) {
            problems.push_back(label + ": object_id must be a relative path without '.' or '..'");
        }
        if (r.category.empty()) problems.push_back(label + ": empty category");
        if (r.views.size() > kMaxViews) {
            problems.push_back(label + ": " + std::to_string(r.views.size()) + " views (at most 24)");
        }
        std::error_code ec;
        if (!fs::is_regular_file(manifest.resolve(r.binvox), ec)) {
            problems.push_back(label + ": binvox file not found: " + manifest.resolve(r.binvox).string());
        }
    }
    return problems;
}

Manifest scan_directory(const fs::path& root, const std::optional<fs::path>& images_root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw Error(ErrorKind::Io, "not a directory: " + root.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().extension() == ".binvox") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    Manifest m;
    m.dataset_root = root;
    for (const auto& file : files) {
        const fs::path rel = file.lexically_relative(root);
        ManifestRecord rec;
        rec.binvox = rel;
        const fs::path id_path =
            (file.filename() == "model.binvox" && rel.has_parent_path()) ? rel.parent_path() : fs::path(rel).replace_extension();
        rec.object_id = id_path.generic_string();
        rec.category = rel.has_parent_path() ? rel.begin()->string() : std::string("default");
        if (images_root) {
            for (const auto& v : find_views(*images_root / id_path / "rendering", *images_root)) {
                rec.views.push_back(fs::absolute(*images_root / v).lexically_normal());
            }
        } else {
            rec.views = find_views(file.parent_path() / "rendering", root);
        }
        m.records.push_back(std::move(rec));
    }
    return m;
}

}  // namespace voxtok::pipeline
