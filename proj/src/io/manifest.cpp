#include "thermoweld/io/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "thermoweld/rng.hpp"

namespace tw {

std::string config_hash(const json& config) {
    const std::uint64_t h = fnv1a64(config.dump());
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json filter_to_json(const FilterSpec& spec) {
    return json{{"id", spec.id},
                {"frames", {spec.frame_lo, spec.frame_hi}},
                {"intensity", {spec.intensity_lo, spec.intensity_hi}},
                {"description", spec.description}};
}

FilterSpec filter_from_json(const json& j) {
    FilterSpec spec;
    spec.id = j.at("id").get<std::string>();
    spec.frame_lo = j.at("frames").at(0).get<int>();
    spec.frame_hi = j.at("frames").at(1).get<int>();
    spec.intensity_lo = j.at("intensity").at(0).get<double>();
    spec.intensity_hi = j.at("intensity").at(1).get<double>();
    spec.description = j.value("description", "");
    spec.validate();
    return spec;
}

json split_to_json(const DatasetSplit& split) {
    return json{{"train", split.train},
                {"val", split.val},
                {"test", split.test},
                {"stratified", split.stratified},
                {"seed", split.seed}};
}

DatasetSplit split_from_json(const json& j) {
    DatasetSplit split;
    split.train = j.at("train").get<std::vector<std::string>>();
    split.val = j.at("val").get<std::vector<std::string>>();
    split.test = j.at("test").get<std::vector<std::string>>();
    split.stratified = j.value("stratified", true);
    split.seed = j.value("seed", std::uint64_t{0});
    return split;
}

json film_entry_to_json(const FilmManifestEntry& e) {
    return json{
        {"file", e.file},
        {"specimen_id", e.specimen.specimen_id},
        {"label", to_string(e.specimen.quality_class)},
        {"nugget_diameter_m", e.specimen.nugget_diameter},
        {"nugget_center_px", {e.specimen.nugget_center.x, e.specimen.nugget_center.y}},
        {"sheet_thickness_L1_m", e.specimen.sheet_thickness_L1},
        {"stack_thickness_L2_m", e.specimen.stack_thickness_L2},
        {"contact_quality", e.specimen.contact_quality},
        {"material",
         {{"rho", e.material.rho},
          {"c_p", e.material.c_p},
          {"alpha", e.material.alpha},
          {"reflectivity", e.material.reflectivity},
          {"T0", e.material.T0},
          {"loss_time_constant_s", e.material.loss_time_constant_s},
          {"series_tol", e.material.series_tol}}},
        {"pulse",
         {{"absorbed_energy_J", e.pulse.absorbed_energy_J},
          {"area_m2", e.pulse.area_m2},
          {"on_frame", e.pulse.on_frame},
          {"off_frame", e.pulse.off_frame}}},
        {"film_seed", e.film_seed},
        {"saturation_fraction", e.saturation_fraction}};
}

json dataset_image_to_json(const DatasetImageEntry& e) {
    return json{{"path", e.path},
                {"label", to_string(e.label)},
                {"film_id", e.film_id},
                {"frame_index", e.frame_index},
                {"copy_index", e.copy_index},
                {"aug_chain", e.aug_chain},
                {"display_lo", e.display_lo},
                {"display_hi", e.display_hi},
                {"split", e.split}};
}

DatasetImageEntry dataset_image_from_json(const json& j) {
    DatasetImageEntry e;
    e.path = j.at("path").get<std::string>();
    e.label = quality_from_string(j.at("label").get<std::string>());
    e.film_id = j.at("film_id").get<std::string>();
    e.frame_index = j.at("frame_index").get<int>();
    e.copy_index = j.value("copy_index", 0);
    e.aug_chain = j.value("aug_chain", std::vector<std::string>{});
    e.display_lo = j.value("display_lo", 0.0);
    e.display_hi = j.value("display_hi", 1.0);
    e.split = j.value("split", "train");
    return e;
}

json report_to_json(const EvalReport& report) {
    json j;
    j["error_rate"] = {{"good", report.error_rate[0]},
                       {"medium", report.error_rate[1]},
                       {"bad", report.error_rate[2]}};
    json ap;
    const char* names[3] = {"good", "medium", "bad"};
    for (int c = 0; c < 3; ++c) {
        if (report.ap[c])
            ap[names[c]] = *report.ap[c];
        else
            ap[names[c]] = nullptr;
    }
    j["ap"] = ap;
    if (report.map)
        j["map"] = *report.map;
    else
        j["map"] = nullptr;
    j["ap_undefined_warning"] = report.ap_undefined_warning;
    j["confusion"] = report.confusion;
    j["total"] = report.total;
    j["overall_accuracy"] = report.overall_accuracy;
    if (report.film_level_accuracy)
        j["film_level_accuracy"] = *report.film_level_accuracy;
    j["metadata"] = report.metadata;
    json ref = json::array();
    for (const auto& row : kReferenceResults)
        ref.push_back({{"architecture", row.architecture},
                       {"error_rate", row.error_rate},
                       {"ap", row.ap}});
    j["reference_results"] = ref;
    return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw DataError("short write: " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw DataError("short write: " + path.string());
}

}  // namespace tw
