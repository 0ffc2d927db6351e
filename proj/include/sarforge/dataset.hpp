#ifndef SARFORGE_DATASET_HPP
#define SARFORGE_DATASET_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sarforge/overlay.hpp"
#include "sarforge/patchwork.hpp"
#include "sarforge/sensor.hpp"
#include "sarforge/sim.hpp"
#include "sarforge/types.hpp"

namespace sarforge {

/// Disjoint train/test assignment of background and chip asset ids.
struct SplitSpec {
    std::vector<size_t> background_train;
    std::vector<size_t> background_test;
    std::vector<size_t> chip_train;
    std::vector<size_t> chip_test;
    uint64_t master_seed = 0;
};

/// Uniform random disjoint split. Every chip class must land on both sides;
/// the draw is repeated (up to 1000 times) until that holds.
SplitSpec make_split(size_t n_backgrounds, const std::vector<std::string>& chip_classes,
                     size_t bg_test_count, size_t chip_test_count, RandomStream& stream);

enum class DatasetKind { train_stream, synth_on_real, measured_on_real, patchwork, distractor };

std::string dataset_kind_name(DatasetKind kind);
DatasetKind dataset_kind_from_name(const std::string& name);

struct BackgroundSynthSpec {
    int count = 4;
    int width = 1024;
    int height = 1024;
    ClutterConfig clutter;
};

struct SplitParams {
    size_t bg_test_count = 0;
    size_t chip_test_count = 0;
    std::string use = "train";  // which side feeds generation
};

/// Everything needed to (re)generate a dataset. Paths are resolved against
/// base_dir (the manifest file's directory when loaded from disk).
struct DatasetManifest {
    DatasetKind kind = DatasetKind::synth_on_real;
    size_t count = 0;
    uint64_t master_seed = 0;
    SensorConfig sensor;
    AugmentationConfig augmentation;
    std::string backgrounds_dir;  // directory of .cf32 fields, or empty when synthesized
    std::optional<BackgroundSynthSpec> backgrounds_synth;
    std::string chips_dir;     // chip library (index.jsonl + cf32/sfm1 pairs)
    std::string measured_dir;  // measured pairs (stem.cf32 + stem.sfm1)
    PatchworkConfig patchwork;
    std::optional<SplitParams> split;
    std::filesystem::path base_dir;

    void validate() const;
    std::filesystem::path resolve(const std::string& rel) const;
};

DatasetManifest manifest_from_json(const nlohmann::json& j);
DatasetManifest read_manifest(const std::filesystem::path& path);
nlohmann::json to_json(const DatasetManifest& manifest);

// Chip library directory format: NNNNN.cf32 + NNNNN.sfm1 per chip plus
// index.jsonl lines {class, azimuth_deg, depression_deg, signature, shadow_mask}.
size_t write_chip_library(const std::vector<TargetTemplate>& templates,
                          const ChipGridSpec& grid, int chip_size,
                          const SensorConfig& cfg, const std::filesystem::path& dir);
std::vector<TargetChip> load_chip_library(const std::filesystem::path& dir);

/// Index-addressable deterministic scene source. Scene i depends only on
/// (manifest, i), so consumers may pull any indices in any order or in
/// parallel; materialized datasets and live training streams share this path.
class SceneStream {
public:
    explicit SceneStream(const DatasetManifest& manifest);
    ~SceneStream();
    SceneStream(SceneStream&&) noexcept;
    SceneStream& operator=(SceneStream&&) noexcept;

    struct Item {
        ComplexRaster scene;
        Pgm8 image;
        SceneAnnotation annotation;
        // Global asset ids the scene drew from, for split audits.
        size_t source_background = 0;
        std::vector<size_t> source_chips;
    };

    /// Thread-safe: assets are immutable after construction.
    Item at(uint64_t index) const;

    size_t scene_count() const;  // manifest count (train_stream is unbounded)

    // Asset ids active after the optional split filter, for audits.
    const std::vector<size_t>& active_background_ids() const;
    const std::vector<size_t>& active_chip_ids() const;

private:
    struct Assets;
    DatasetManifest manifest_;
    std::unique_ptr<Assets> assets_;
};

struct GenerateResult {
    std::string content_hash;
    size_t scene_count = 0;
};

/// Materializes a dataset: scenes/NNNNNN.cf32 + .pgm, annotations.jsonl, and
/// manifest.echo.json carrying the content hash of all other outputs. The
/// hash is independent of the thread count.
GenerateResult generate_dataset(const DatasetManifest& manifest,
                                const std::filesystem::path& out_dir, int threads = 1,
                                std::ostream* progress = nullptr);

}  // namespace sarforge

#endif  // SARFORGE_DATASET_HPP
