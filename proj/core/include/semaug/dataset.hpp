#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace semaug {

/// One original image inside a dataset manifest.
///
/// `record_id` is derived from (label_raw, file name) so identities survive
/// moving the dataset root between machines.
struct ImageRecord {
    std::string record_id;
    std::string source_path;  // absolute or root-relative as scanned
    std::string label_raw;    // directory name verbatim
    std::string label_text;   // label_raw with underscores replaced by spaces
    int width = 0;
    int height = 0;
    std::string split;  // optional: "train" / "eval" / empty

    bool operator==(const ImageRecord&) const = default;
};

struct DatasetManifest {
    std::string format_version = "1";
    std::string root_path;
    std::string created_at;  // latest source mtime, so re-scans stay byte-identical
    std::vector<std::string> label_set;  // sorted unique label_text values
    std::vector<ImageRecord> records;    // sorted lexicographically by source_path

    bool operator==(const DatasetManifest&) const = default;

    void validate() const;
    const ImageRecord* find(const std::string& record_id) const;
    int label_index(const std::string& label_text) const;  // -1 if absent
};

std::string label_text_from_raw(const std::string& label_raw);

/// Walk root/<label>/<image-file>, decode every image, build the manifest.
/// Unreadable files are skipped; their paths are appended to `unreadable`
/// when the pointer is non-null.
DatasetManifest scan_dataset(const std::filesystem::path& root_path,
                             std::vector<std::string>* unreadable = nullptr);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

}  // namespace semaug
