#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "thermoweld/dataprep/filters.hpp"
#include "thermoweld/dataprep/split.hpp"
#include "thermoweld/eval/metrics.hpp"
#include "thermoweld/thermal/render.hpp"

namespace tw {

using json = nlohmann::json;

/// Stable content hash of a canonical JSON dump, as a hex string. Every
/// artifact is stamped with (tool_version, config_hash, seed).
std::string config_hash(const json& config);

json filter_to_json(const FilterSpec& spec);
FilterSpec filter_from_json(const json& j);

json split_to_json(const DatasetSplit& split);
DatasetSplit split_from_json(const json& j);

/// Sidecar entry for one simulated film.
struct FilmManifestEntry {
    std::string file;                    ///< relative path of the .tfilm
    SpecimenSpec specimen;
    MaterialParams material;
    LaserPulse pulse;
    std::uint64_t film_seed = 0;
    double saturation_fraction = 0.0;
};

json film_entry_to_json(const FilmManifestEntry& e);

/// One image row of a prepared dataset manifest.
struct DatasetImageEntry {
    std::string path;                    ///< relative to the manifest file
    QualityClass label = QualityClass::good;
    std::string film_id;
    int frame_index = 0;
    int copy_index = 0;
    std::vector<std::string> aug_chain;
    double display_lo = 0.0;
    double display_hi = 1.0;
    std::string split;                   ///< "train" / "val" / "test"
};

json dataset_image_to_json(const DatasetImageEntry& e);
DatasetImageEntry dataset_image_from_json(const json& j);

json report_to_json(const EvalReport& report);

void write_json_file(const std::filesystem::path& path, const json& j);
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tw
