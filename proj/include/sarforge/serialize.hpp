#ifndef SARFORGE_SERIALIZE_HPP
#define SARFORGE_SERIALIZE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "sarforge/detect.hpp"
#include "sarforge/overlay.hpp"
#include "sarforge/patchwork.hpp"
#include "sarforge/sensor.hpp"
#include "sarforge/sim.hpp"

namespace sarforge {

nlohmann::json to_json(const WindowSpec& spec);
WindowSpec window_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SensorConfig& cfg);
SensorConfig sensor_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AugmentationConfig& cfg);
AugmentationConfig augmentation_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ClutterConfig& cfg);
ClutterConfig clutter_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PatchworkConfig& cfg);
PatchworkConfig patchwork_config_from_json(const nlohmann::json& j);

CfarConfig cfar_config_from_json(const nlohmann::json& j);
CfarConfig read_cfar_config(const std::filesystem::path& path);

nlohmann::json to_json(const SceneAnnotation& annotation);
SceneAnnotation scene_annotation_from_json(const nlohmann::json& j);

std::vector<SceneAnnotation> read_annotations_jsonl(const std::filesystem::path& path);
void write_annotations_jsonl(const std::vector<SceneAnnotation>& annotations,
                             const std::filesystem::path& path);

/// Flattens annotation boxes with the given role into per-scene ground truths.
std::vector<GroundTruth> ground_truths_for_role(
    const std::vector<SceneAnnotation>& annotations, const std::string& role);

/// Parses a JSON document from disk with path-annotated errors.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace sarforge

#endif  // SARFORGE_SERIALIZE_HPP
