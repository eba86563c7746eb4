#include "semaug/dataset.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>

#include "semaug/common.hpp"
#include "semaug/image.hpp"

namespace semaug {

namespace fs = std::filesystem;
using nlohmann::json;

std::string label_text_from_raw(const std::string& label_raw) {
    std::string out = label_raw;
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

void DatasetManifest::validate() const {
    std::set<std::string> ids;
    std::set<std::string> labels(label_set.begin(), label_set.end());
    for (const auto& rec : records) {
        if (!ids.insert(rec.record_id).second) {
            throw Error(ErrorCode::SchemaMismatch, "duplicate record_id " + rec.record_id);
        }
        if (rec.label_text.find('_') != std::string::npos) {
            throw Error(ErrorCode::SchemaMismatch,
                        "label_text contains underscore: " + rec.label_text);
        }
        if (rec.width < 1 || rec.height < 1) {
            throw Error(ErrorCode::SchemaMismatch, "degenerate dimensions for " + rec.record_id);
        }
        if (!labels.count(rec.label_text)) {
            throw Error(ErrorCode::SchemaMismatch,
                        "record label not in label_set: " + rec.label_text);
        }
    }
    if (!std::is_sorted(records.begin(), records.end(),
                        [](const ImageRecord& a, const ImageRecord& b) {
                            return a.source_path < b.source_path;
                        })) {
        throw Error(ErrorCode::SchemaMismatch, "records not sorted by source_path");
    }
}

const ImageRecord* DatasetManifest::find(const std::string& record_id) const {
    for (const auto& rec : records) {
        if (rec.record_id == record_id) return &rec;
    }
    return nullptr;
}

int DatasetManifest::label_index(const std::string& label_text) const {
    auto it = std::find(label_set.begin(), label_set.end(), label_text);
    if (it == label_set.end()) return -1;
    return static_cast<int>(it - label_set.begin());
}

static bool has_image_extension(const fs::path& p) {
    std::string ext = to_lower_ascii(p.extension().string());
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

static std::string format_mtime(fs::file_time_type t) {
    auto sys = std::chrono::file_clock::to_sys(t);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(sys.time_since_epoch()).count();
    std::time_t tt = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

DatasetManifest scan_dataset(const fs::path& root_path, std::vector<std::string>* unreadable) {
    if (!fs::exists(root_path) || !fs::is_directory(root_path)) {
        throw Error(ErrorCode::MissingRoot, root_path.string());
    }

    DatasetManifest manifest;
    manifest.root_path = root_path.string();

    std::vector<fs::path> label_dirs;
    for (const auto& entry : fs::directory_iterator(root_path)) {
        if (entry.is_directory()) label_dirs.push_back(entry.path());
    }
    std::sort(label_dirs.begin(), label_dirs.end());

    fs::file_time_type latest = fs::file_time_type::min();
    std::set<std::string> labels;
    for (const auto& dir : label_dirs) {
        const std::string label_raw = dir.filename().string();
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && has_image_extension(entry.path())) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            Image img;
            try {
                img = load_image(file);
            } catch (const Error&) {
                if (unreadable) unreadable->push_back(file.string());
                continue;
            }
            ImageRecord rec;
            rec.record_id = short_hash(label_raw, file.filename().string());
            rec.source_path = file.string();
            rec.label_raw = label_raw;
            rec.label_text = label_text_from_raw(label_raw);
            rec.width = img.width;
            rec.height = img.height;
            manifest.records.push_back(std::move(rec));
            labels.insert(label_text_from_raw(label_raw));
            latest = std::max(latest, fs::last_write_time(file));
        }
    }

    if (manifest.records.empty()) {
        throw Error(ErrorCode::EmptyDataset, root_path.string());
    }

    std::sort(manifest.records.begin(), manifest.records.end(),
              [](const ImageRecord& a, const ImageRecord& b) {
                  return a.source_path < b.source_path;
              });
    manifest.label_set.assign(labels.begin(), labels.end());
    manifest.created_at = format_mtime(latest);
    manifest.validate();
    return manifest;
}

static json record_to_json(const ImageRecord& rec) {
    return json{{"record_id", rec.record_id}, {"source_path", rec.source_path},
                {"label_raw", rec.label_raw}, {"label_text", rec.label_text},
                {"width", rec.width},         {"height", rec.height},
                {"split", rec.split}};
}

static ImageRecord record_from_json(const json& j) {
    ImageRecord rec;
    rec.record_id = j.at("record_id").get<std::string>();
    rec.source_path = j.at("source_path").get<std::string>();
    rec.label_raw = j.at("label_raw").get<std::string>();
    rec.label_text = j.at("label_text").get<std::string>();
    rec.width = j.at("width").get<int>();
    rec.height = j.at("height").get<int>();
    rec.split = j.value("split", "");
    return rec;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
    manifest.validate();
    json j;
    j["format_version"] = manifest.format_version;
    j["root_path"] = manifest.root_path;
    j["created_at"] = manifest.created_at;
    j["label_set"] = manifest.label_set;
    j["records"] = json::array();
    for (const auto& rec : manifest.records) {
        j["records"].push_back(record_to_json(rec));
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
    out << j.dump(2) << "\n";
    if (!out) {
        throw Error(ErrorCode::IoError, "short write to " + path.string());
    }
}

DatasetManifest read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaMismatch, std::string("manifest parse: ") + e.what());
    }
    DatasetManifest manifest;
    manifest.format_version = j.value("format_version", "");
    if (manifest.format_version != "1") {
        throw Error(ErrorCode::SchemaMismatch,
                    "unknown format_version '" + manifest.format_version + "'");
    }
    manifest.root_path = j.at("root_path").get<std::string>();
    manifest.created_at = j.value("created_at", "");
    manifest.label_set = j.at("label_set").get<std::vector<std::string>>();
    for (const auto& rj : j.at("records")) {
        manifest.records.push_back(record_from_json(rj));
    }
    manifest.validate();
    return manifest;
}

}  // namespace semaug
