#include "sarforge/serialize.hpp"

#include <fstream>

namespace sarforge {

using nlohmann::json;

namespace {

// Rethrows nlohmann lookup/type errors as config errors with context.
template <typename Fn>
auto parse_ctx(const std::string& what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

}  // namespace

json to_json(const WindowSpec& spec) {
    json j{{"kind", window_kind_name(spec.kind)}};
    if (spec.kind == WindowKind::taylor) {
        j["nbar"] = spec.nbar;
        j["sidelobe_db"] = spec.sidelobe_db;
    }
    return j;
}

WindowSpec window_spec_from_json(const json& j) {
    return parse_ctx("window", [&] {
        WindowSpec spec;
        if (j.is_string()) {
            spec.kind = window_kind_from_name(j.get<std::string>());
            return spec;
        }
        spec.kind = window_kind_from_name(j.at("kind").get<std::string>());
        if (spec.kind == WindowKind::taylor) {
            spec.nbar = j.value("nbar", 4);
            spec.sidelobe_db = j.value("sidelobe_db", 35.0);
        }
        return spec;
    });
}

json to_json(const SensorConfig& cfg) {
    return json{{"range_resolution_px", cfg.range_resolution_px},
                {"crossrange_resolution_px", cfg.crossrange_resolution_px},
                {"window", to_json(cfg.window)},
                {"noise_sigma", cfg.noise_sigma}};
}

SensorConfig sensor_config_from_json(const json& j) {
    return parse_ctx("sensor config", [&] {
        SensorConfig cfg;
        cfg.range_resolution_px = j.value("range_resolution_px", 1.0);
        cfg.crossrange_resolution_px = j.value("crossrange_resolution_px", 1.0);
        if (j.contains("window")) cfg.window = window_spec_from_json(j.at("window"));
        cfg.noise_sigma = j.value("noise_sigma", 0.0);
        cfg.validate();
        return cfg;
    });
}

json to_json(const AugmentationConfig& cfg) {
    return json{{"resolution_jitter", cfg.resolution_jitter},
                {"noise_sigma_range", cfg.noise_sigma_range},
                {"n_targets_range", cfg.n_targets_range},
                {"bright_fraction", cfg.bright_fraction},
                {"dropout_share", cfg.dropout_share},
                {"crop_size", cfg.crop_size}};
}

AugmentationConfig augmentation_config_from_json(const json& j) {
    return parse_ctx("augmentation config", [&] {
        AugmentationConfig cfg;
        if (j.contains("resolution_jitter")) {
            cfg.resolution_jitter = j.at("resolution_jitter").get<std::array<double, 2>>();
        }
        if (j.contains("noise_sigma_range")) {
            cfg.noise_sigma_range = j.at("noise_sigma_range").get<std::array<double, 2>>();
        }
        if (j.contains("n_targets_range")) {
            cfg.n_targets_range = j.at("n_targets_range").get<std::array<int, 2>>();
        }
        cfg.bright_fraction = j.value("bright_fraction", 0.01);
        cfg.dropout_share = j.value("dropout_share", 0.5);
        cfg.crop_size = j.value("crop_size", 640);
        cfg.validate();
        return cfg;
    });
}

json to_json(const ClutterConfig& cfg) {
    return json{{"mean_intensity", cfg.mean_intensity},
                {"texture_shape", cfg.texture_shape},
                {"correlation_px", cfg.correlation_px}};
}

ClutterConfig clutter_config_from_json(const json& j) {
    return parse_ctx("clutter config", [&] {
        ClutterConfig cfg;
        cfg.mean_intensity = j.value("mean_intensity", 1.0);
        cfg.texture_shape = j.value("texture_shape", 1e9);
        cfg.correlation_px = j.value("correlation_px", 0.0);
        cfg.validate();
        return cfg;
    });
}

json to_json(const PatchworkConfig& cfg) {
    return json{{"rows", cfg.rows},
                {"cols", cfg.cols},
                {"vignette_size", cfg.vignette_size},
                {"overlap", cfg.overlap}};
}

PatchworkConfig patchwork_config_from_json(const json& j) {
    return parse_ctx("patchwork config", [&] {
        PatchworkConfig cfg;
        cfg.rows = j.value("rows", 4);
        cfg.cols = j.value("cols", 4);
        cfg.vignette_size = j.value("vignette_size", 128);
        cfg.overlap = j.value("overlap", 16);
        cfg.validate();
        return cfg;
    });
}

CfarConfig cfar_config_from_json(const json& j) {
    return parse_ctx("cfar config", [&] {
        CfarConfig cfg;
        cfg.guard_px = j.value("guard_px", 4);
        cfg.train_px = j.value("train_px", 8);
        cfg.threshold_factor = j.value("threshold_factor", 3.0);
        cfg.min_area_px = j.value("min_area_px", 4);
        cfg.merge_gap_px = j.value("merge_gap_px", 2);
        cfg.validate();
        return cfg;
    });
}

CfarConfig read_cfar_config(const std::filesystem::path& path) {
    return cfar_config_from_json(read_json_file(path));
}

json to_json(const SceneAnnotation& annotation) {
    json boxes = json::array();
    for (const AnnotatedBox& b : annotation.boxes) {
        boxes.push_back(json{{"x_min", b.box.x_min},
                             {"y_min", b.box.y_min},
                             {"x_max", b.box.x_max},
                             {"y_max", b.box.y_max},
                             {"class", b.class_name},
                             {"role", b.role}});
    }
    return json{{"scene_id", annotation.scene_id},
                {"seed", json{{"master", annotation.seed.master_seed},
                              {"stream", annotation.seed.stream_index}}},
                {"sensor", to_json(annotation.sensor)},
                {"boxes", boxes}};
}

SceneAnnotation scene_annotation_from_json(const json& j) {
    return parse_ctx("scene annotation", [&] {
        SceneAnnotation a;
        a.scene_id = j.at("scene_id").get<std::string>();
        a.seed.master_seed = j.at("seed").at("master").get<uint64_t>();
        a.seed.stream_index = j.at("seed").at("stream").get<uint64_t>();
        a.sensor = sensor_config_from_json(j.at("sensor"));
        for (const json& b : j.at("boxes")) {
            AnnotatedBox box;
            box.box = BBox{b.at("x_min").get<double>(), b.at("y_min").get<double>(),
                           b.at("x_max").get<double>(), b.at("y_max").get<double>()};
            box.class_name = b.at("class").get<std::string>();
            box.role = b.value("role", "target");
            a.boxes.push_back(std::move(box));
        }
        return a;
    });
}

std::vector<SceneAnnotation> read_annotations_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::vector<SceneAnnotation> result;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            result.push_back(scene_annotation_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    return result;
}

void write_annotations_jsonl(const std::vector<SceneAnnotation>& annotations,
                             const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (const SceneAnnotation& a : annotations) out << to_json(a).dump() << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<GroundTruth> ground_truths_for_role(
    const std::vector<SceneAnnotation>& annotations, const std::string& role) {
    std::vector<GroundTruth> gts;
    for (const SceneAnnotation& a : annotations) {
        for (const AnnotatedBox& b : a.boxes) {
            if (b.role == role) gts.push_back(GroundTruth{a.scene_id, b.box});
        }
    }
    return gts;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sarforge
