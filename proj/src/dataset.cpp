#include "sarforge/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "sarforge/hash.hpp"
#include "sarforge/raster_io.hpp"
#include "sarforge/serialize.hpp"

namespace sarforge {

using nlohmann::json;

namespace {

// Stream-index regions reserved per purpose so scene, background, and split
// draws can never alias.
constexpr uint64_t kBackgroundStreamBase = uint64_t{1} << 40;
constexpr uint64_t kSplitStream = uint64_t{1} << 41;

std::string scene_name(uint64_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06llu", static_cast<unsigned long long>(index));
    return buf;
}

// Fisher-Yates with the project stream, descending to keep the draw count
// independent of the element values.
void shuffle_ids(std::vector<size_t>& ids, RandomStream& stream) {
    for (size_t i = ids.size(); i > 1; --i) {
        const size_t j =
            static_cast<size_t>(stream.uniform_int(0, static_cast<int64_t>(i) - 1));
        std::swap(ids[i - 1], ids[j]);
    }
}

std::vector<size_t> iota_ids(size_t n) {
    std::vector<size_t> ids(n);
    for (size_t i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

}  // namespace

SplitSpec make_split(size_t n_backgrounds, const std::vector<std::string>& chip_classes,
                     size_t bg_test_count, size_t chip_test_count, RandomStream& stream) {
    if (bg_test_count == 0 || bg_test_count >= n_backgrounds) {
        throw ConfigError("split: background test count must be in (0, total)");
    }
    if (chip_test_count == 0 || chip_test_count >= chip_classes.size()) {
        throw ConfigError("split: chip test count must be in (0, total)");
    }
    std::set<std::string> classes(chip_classes.begin(), chip_classes.end());
    const size_t chip_train_count = chip_classes.size() - chip_test_count;
    if (chip_test_count < classes.size() || chip_train_count < classes.size()) {
        throw ConfigError("split: class coverage infeasible with these counts");
    }
    for (const std::string& c : classes) {
        const auto n = std::count(chip_classes.begin(), chip_classes.end(), c);
        if (n < 2) throw ConfigError("split: class '" + c + "' has fewer than 2 chips");
    }

    SplitSpec split;
    std::vector<size_t> bg_ids = iota_ids(n_backgrounds);
    shuffle_ids(bg_ids, stream);
    split.background_test.assign(bg_ids.begin(), bg_ids.begin() + static_cast<long>(bg_test_count));
    split.background_train.assign(bg_ids.begin() + static_cast<long>(bg_test_count), bg_ids.end());
    std::sort(split.background_test.begin(), split.background_test.end());
    std::sort(split.background_train.begin(), split.background_train.end());

    constexpr int kMaxRetries = 1000;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        std::vector<size_t> chip_ids = iota_ids(chip_classes.size());
        shuffle_ids(chip_ids, stream);
        std::set<std::string> test_classes;
        std::set<std::string> train_classes;
        for (size_t i = 0; i < chip_ids.size(); ++i) {
            const std::string& c = chip_classes[chip_ids[i]];
            (i < chip_test_count ? test_classes : train_classes).insert(c);
        }
        if (test_classes == classes && train_classes == classes) {
            split.chip_test.assign(chip_ids.begin(),
                                   chip_ids.begin() + static_cast<long>(chip_test_count));
            split.chip_train.assign(chip_ids.begin() + static_cast<long>(chip_test_count),
                                    chip_ids.end());
            std::sort(split.chip_test.begin(), split.chip_test.end());
            std::sort(split.chip_train.begin(), split.chip_train.end());
            return split;
        }
    }
    throw ConfigError("split: class coverage not reached within 1000 redraws");
}

std::string dataset_kind_name(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::train_stream: return "train_stream";
        case DatasetKind::synth_on_real: return "synth_on_real";
        case DatasetKind::measured_on_real: return "measured_on_real";
        case DatasetKind::patchwork: return "patchwork";
        case DatasetKind::distractor: return "distractor";
    }
    throw ConfigError("unknown dataset kind");
}

DatasetKind dataset_kind_from_name(const std::string& name) {
    if (name == "train_stream") return DatasetKind::train_stream;
    if (name == "synth_on_real") return DatasetKind::synth_on_real;
    if (name == "measured_on_real") return DatasetKind::measured_on_real;
    if (name == "patchwork") return DatasetKind::patchwork;
    if (name == "distractor") return DatasetKind::distractor;
    throw ConfigError("unknown dataset kind: " + name);
}

void DatasetManifest::validate() const {
    sensor.validate();
    augmentation.validate();
    if (kind != DatasetKind::train_stream && count == 0) {
        throw ConfigError("manifest: count must be > 0");
    }
    if (backgrounds_dir.empty() && !backgrounds_synth) {
        throw ConfigError("manifest: backgrounds need a dir or a synthesize block");
    }
    if (kind == DatasetKind::measured_on_real) {
        if (measured_dir.empty()) throw ConfigError("manifest: measured dir required");
    } else if (chips_dir.empty()) {
        throw ConfigError("manifest: chips dir required");
    }
    if (kind == DatasetKind::patchwork) patchwork.validate();
    if (split && split->use != "train" && split->use != "test") {
        throw ConfigError("manifest: split use must be 'train' or 'test'");
    }
}

std::filesystem::path DatasetManifest::resolve(const std::string& rel) const {
    const std::filesystem::path p(rel);
    return p.is_absolute() ? p : base_dir / p;
}

DatasetManifest manifest_from_json(const json& j) {
    DatasetManifest m;
    try {
        m.kind = dataset_kind_from_name(j.at("kind").get<std::string>());
        m.count = j.value("count", size_t{0});
        m.master_seed = j.value("master_seed", uint64_t{0});
        if (j.contains("sensor")) m.sensor = sensor_config_from_json(j.at("sensor"));
        if (j.contains("augmentation")) {
            m.augmentation = augmentation_config_from_json(j.at("augmentation"));
        }
        if (j.contains("backgrounds")) {
            const json& bg = j.at("backgrounds");
            if (bg.contains("dir")) m.backgrounds_dir = bg.at("dir").get<std::string>();
            if (bg.contains("synthesize")) {
                const json& s = bg.at("synthesize");
                BackgroundSynthSpec spec;
                spec.count = s.value("count", 4);
                spec.width = s.value("width", 1024);
                spec.height = s.value("height", 1024);
                if (s.contains("clutter")) {
                    spec.clutter = clutter_config_from_json(s.at("clutter"));
                }
                if (spec.count < 1) throw ConfigError("manifest: background count must be >= 1");
                m.backgrounds_synth = spec;
            }
        }
        if (j.contains("chips")) m.chips_dir = j.at("chips").value("dir", "");
        if (j.contains("measured")) m.measured_dir = j.at("measured").value("dir", "");
        if (j.contains("patchwork")) {
            m.patchwork = patchwork_config_from_json(j.at("patchwork"));
        }
        if (j.contains("split")) {
            const json& s = j.at("split");
            SplitParams params;
            params.bg_test_count = s.value("bg_test_count", size_t{0});
            params.chip_test_count = s.value("chip_test_count", size_t{0});
            params.use = s.value("use", "train");
            m.split = params;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
    m.validate();
    return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    DatasetManifest m = manifest_from_json(read_json_file(path));
    m.base_dir = path.has_parent_path() ? path.parent_path() : ".";
    return m;
}

json to_json(const DatasetManifest& m) {
    json j{{"kind", dataset_kind_name(m.kind)},
           {"count", m.count},
           {"master_seed", m.master_seed},
           {"sensor", to_json(m.sensor)},
           {"augmentation", to_json(m.augmentation)}};
    json bg = json::object();
    if (!m.backgrounds_dir.empty()) bg["dir"] = m.backgrounds_dir;
    if (m.backgrounds_synth) {
        bg["synthesize"] = json{{"count", m.backgrounds_synth->count},
                                {"width", m.backgrounds_synth->width},
                                {"height", m.backgrounds_synth->height},
                                {"clutter", to_json(m.backgrounds_synth->clutter)}};
    }
    j["backgrounds"] = bg;
    if (!m.chips_dir.empty()) j["chips"] = json{{"dir", m.chips_dir}};
    if (!m.measured_dir.empty()) j["measured"] = json{{"dir", m.measured_dir}};
    if (m.kind == DatasetKind::patchwork) j["patchwork"] = to_json(m.patchwork);
    if (m.split) {
        j["split"] = json{{"bg_test_count", m.split->bg_test_count},
                          {"chip_test_count", m.split->chip_test_count},
                          {"use", m.split->use}};
    }
    return j;
}

size_t write_chip_library(const std::vector<TargetTemplate>& templates,
                          const ChipGridSpec& grid, int chip_size,
                          const SensorConfig& cfg, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream index(dir / "index.jsonl");
    if (!index) throw IoError("cannot open for writing: " + (dir / "index.jsonl").string());

    size_t serial = 0;
    const size_t count = generate_chip_library(
        templates, grid, chip_size, cfg, [&](TargetChip&& chip) {
            char stem[16];
            std::snprintf(stem, sizeof(stem), "%05zu", serial++);
            const std::string sig_name = std::string(stem) + ".cf32";
            const std::string mask_name = std::string(stem) + ".sfm1";
            write_raster(chip.signature, dir / sig_name);
            write_mask(chip.shadow_mask, dir / mask_name);
            index << json{{"class", chip.class_name},
                          {"azimuth_deg", chip.azimuth_deg},
                          {"depression_deg", chip.depression_deg},
                          {"signature", sig_name},
                          {"shadow_mask", mask_name}}
                         .dump()
                  << "\n";
        });
    index.flush();
    if (!index) throw IoError("write failed: " + (dir / "index.jsonl").string());
    return count;
}

std::vector<TargetChip> load_chip_library(const std::filesystem::path& dir) {
    const std::filesystem::path index_path = dir / "index.jsonl";
    std::ifstream index(index_path);
    if (!index) throw IoError("cannot open: " + index_path.string());
    std::vector<TargetChip> chips;
    std::string line;
    size_t line_no = 0;
    while (std::getline(index, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            TargetChip chip;
            chip.class_name = j.at("class").get<std::string>();
            chip.azimuth_deg = j.at("azimuth_deg").get<double>();
            chip.depression_deg = j.at("depression_deg").get<double>();
            chip.signature = read_raster(dir / j.at("signature").get<std::string>());
            chip.shadow_mask = read_mask(dir / j.at("shadow_mask").get<std::string>());
            chip.validate();
            chips.push_back(std::move(chip));
        } catch (const json::exception& e) {
            throw FormatError(index_path.string() + ":" + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    if (chips.empty()) throw IoError(index_path.string() + ": empty chip library");
    return chips;
}

// ---------------------------------------------------------------------------
// SceneStream

struct SceneStream::Assets {
    std::vector<TargetChip> chips;            // synthetic library (filtered)
    std::vector<ComplexRaster> backgrounds;   // filtered
    std::vector<ComplexRaster> measured_imgs;
    std::vector<Mask> measured_segs;
    std::vector<std::string> measured_names;
    std::vector<size_t> background_ids;
    std::vector<size_t> chip_ids;
};

SceneStream::SceneStream(SceneStream&&) noexcept = default;
SceneStream& SceneStream::operator=(SceneStream&&) noexcept = default;
SceneStream::~SceneStream() = default;

SceneStream::SceneStream(const DatasetManifest& manifest)
    : manifest_(manifest), assets_(std::make_unique<Assets>()) {
    manifest_.validate();

    // Backgrounds: directory of .cf32 fields, or deterministic synthesis on
    // reserved stream indices.
    std::vector<ComplexRaster> backgrounds;
    if (!manifest_.backgrounds_dir.empty()) {
        std::vector<std::filesystem::path> files;
        const auto dir = manifest_.resolve(manifest_.backgrounds_dir);
        if (!std::filesystem::is_directory(dir)) {
            throw IoError("backgrounds dir missing: " + dir.string());
        }
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.path().extension() == ".cf32") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw IoError("no .cf32 backgrounds in " + dir.string());
        for (const auto& f : files) backgrounds.push_back(read_raster(f));
    } else {
        const BackgroundSynthSpec& spec = *manifest_.backgrounds_synth;
        for (int i = 0; i < spec.count; ++i) {
            RandomStream stream = derive_stream(
                SeedSpec{manifest_.master_seed, kBackgroundStreamBase + static_cast<uint64_t>(i)});
            backgrounds.push_back(
                synthesize_clutter(spec.width, spec.height, spec.clutter, stream));
        }
    }

    std::vector<TargetChip> chips;
    if (manifest_.kind == DatasetKind::measured_on_real) {
        const auto dir = manifest_.resolve(manifest_.measured_dir);
        if (!std::filesystem::is_directory(dir)) {
            throw IoError("measured dir missing: " + dir.string());
        }
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.path().extension() == ".cf32") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw IoError("no measured chips in " + dir.string());
        for (const auto& f : files) {
            std::filesystem::path seg = f;
            seg.replace_extension(".sfm1");
            if (!std::filesystem::exists(seg)) {
                throw IoError("measured chip missing segmentation: " + seg.string());
            }
            assets_->measured_imgs.push_back(read_raster(f));
            assets_->measured_segs.push_back(read_mask(seg));
            assets_->measured_names.push_back(f.stem().string());
        }
    } else {
        chips = load_chip_library(manifest_.resolve(manifest_.chips_dir));
    }

    // Optional split: restrict generation to one side, classes covered on both.
    std::vector<size_t> bg_ids = iota_ids(backgrounds.size());
    std::vector<size_t> chip_ids = iota_ids(chips.size());
    if (manifest_.split) {
        std::vector<std::string> classes;
        classes.reserve(chips.size());
        for (const TargetChip& c : chips) classes.push_back(c.class_name);
        RandomStream stream =
            derive_stream(SeedSpec{manifest_.master_seed, kSplitStream});
        const SplitSpec split =
            make_split(backgrounds.size(), classes, manifest_.split->bg_test_count,
                       manifest_.split->chip_test_count, stream);
        const bool use_train = manifest_.split->use == "train";
        bg_ids = use_train ? split.background_train : split.background_test;
        chip_ids = use_train ? split.chip_train : split.chip_test;
    }
    for (const size_t id : bg_ids) {
        assets_->backgrounds.push_back(std::move(backgrounds[id]));
    }
    for (const size_t id : chip_ids) {
        assets_->chips.push_back(std::move(chips[id]));
    }
    assets_->background_ids = std::move(bg_ids);
    assets_->chip_ids = std::move(chip_ids);

    if (manifest_.kind != DatasetKind::measured_on_real && assets_->chips.empty()) {
        throw ConfigError("no chips available after split filtering");
    }
    if (assets_->backgrounds.empty()) {
        throw ConfigError("no backgrounds available after split filtering");
    }
}

size_t SceneStream::scene_count() const { return manifest_.count; }
const std::vector<size_t>& SceneStream::active_background_ids() const {
    return assets_->background_ids;
}
const std::vector<size_t>& SceneStream::active_chip_ids() const {
    return assets_->chip_ids;
}

SceneStream::Item SceneStream::at(uint64_t index) const {
    const SeedSpec seed{manifest_.master_seed, index};
    RandomStream stream = derive_stream(seed);
    const std::string role =
        manifest_.kind == DatasetKind::distractor ? "distractor" : "target";

    Item item;
    item.annotation.scene_id = scene_name(index);
    item.annotation.seed = seed;

    if (manifest_.kind == DatasetKind::patchwork) {
        PatchworkResult pw = build_patchwork_scene(
            assets_->chips, assets_->backgrounds, manifest_.patchwork,
            manifest_.sensor, stream);
        item.scene = std::move(pw.image);
        item.annotation.sensor = manifest_.sensor;
        item.annotation.boxes = std::move(pw.boxes);
        item.image = quarter_power_lut(item.scene);
        return item;
    }

    // Draw order: augmentation, background pick, crop, chip picks, dropout,
    // placement, overlay noise. Fixed so scenes are reproducible from (seed).
    const AugmentationDraw draw = sample_augmentation(manifest_.augmentation, stream);
    const SensorConfig sensor = apply_augmentation(manifest_.sensor, draw);
    item.annotation.sensor = sensor;

    const size_t bg_idx = static_cast<size_t>(stream.uniform_int(
        0, static_cast<int64_t>(assets_->backgrounds.size()) - 1));
    item.source_background = assets_->background_ids[bg_idx];
    ComplexRaster crop = crop_background(assets_->backgrounds[bg_idx],
                                         manifest_.augmentation.crop_size, stream);

    if (manifest_.kind == DatasetKind::measured_on_real) {
        std::vector<size_t> picks;
        for (int t = 0; t < draw.n_targets; ++t) {
            picks.push_back(static_cast<size_t>(stream.uniform_int(
                0, static_cast<int64_t>(assets_->measured_imgs.size()) - 1)));
        }
        // Placement reuses the synthetic non-overlap engine via temporary
        // chips that share dimensions with the measured images.
        std::vector<TargetChip> shells(picks.size());
        std::vector<const TargetChip*> shell_ptrs;
        for (size_t i = 0; i < picks.size(); ++i) {
            shells[i].signature.width = assets_->measured_imgs[picks[i]].width;
            shells[i].signature.height = assets_->measured_imgs[picks[i]].height;
            shell_ptrs.push_back(&shells[i]);
        }
        const std::vector<Placement> placements = place_targets(
            crop.width, crop.height, shell_ptrs, stream);
        std::vector<MeasuredChipRef> refs;
        for (size_t i = 0; i < picks.size(); ++i) {
            refs.push_back(MeasuredChipRef{&assets_->measured_imgs[picks[i]],
                                           &assets_->measured_segs[picks[i]],
                                           placements[i].x, placements[i].y});
        }
        MeasuredOverlayResult result =
            overlay_measured_scene(crop, refs, sensor, stream);
        item.scene = std::move(result.scene);
        for (size_t i = 0; i < result.boxes.size(); ++i) {
            item.annotation.boxes.push_back(AnnotatedBox{
                result.boxes[i], assets_->measured_names[picks[i]], role});
        }
        item.image = quarter_power_lut(item.scene);
        return item;
    }

    std::vector<TargetChip> chips;
    chips.reserve(static_cast<size_t>(draw.n_targets));
    for (int t = 0; t < draw.n_targets; ++t) {
        const size_t chip_idx = static_cast<size_t>(stream.uniform_int(
            0, static_cast<int64_t>(assets_->chips.size()) - 1));
        item.source_chips.push_back(assets_->chip_ids[chip_idx]);
        chips.push_back(dropout_bright_points(assets_->chips[chip_idx],
                                              manifest_.augmentation.bright_fraction,
                                              manifest_.augmentation.dropout_share,
                                              stream));
    }
    std::vector<const TargetChip*> chip_ptrs;
    for (const TargetChip& c : chips) chip_ptrs.push_back(&c);

    std::vector<Placement> placements;
    try {
        placements = place_targets(crop.width, crop.height, chip_ptrs, stream);
    } catch (const PlacementError& e) {
        throw PlacementError("scene " + item.annotation.scene_id + ": " + e.what());
    }
    OverlayResult result = overlay_scene(crop, chip_ptrs, placements, sensor, stream, role);
    item.scene = std::move(result.scene);
    item.annotation.boxes = std::move(result.annotation.boxes);
    item.image = quarter_power_lut(item.scene);
    return item;
}

// ---------------------------------------------------------------------------
// Batch generation

GenerateResult generate_dataset(const DatasetManifest& manifest,
                                const std::filesystem::path& out_dir, int threads,
                                std::ostream* progress) {
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (manifest.count == 0) throw ConfigError("generate_dataset: count must be > 0");
    const SceneStream stream(manifest);

    std::filesystem::create_directories(out_dir / "scenes");
    const size_t count = manifest.count;
    std::vector<std::string> annotation_lines(count);

    std::atomic<uint64_t> next{0};
    std::atomic<uint64_t> done{0};
    std::mutex sync_mutex;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            const uint64_t i = next.fetch_add(1);
            if (i >= count) return;
            {
                std::lock_guard<std::mutex> lock(sync_mutex);
                if (failure) return;
            }
            try {
                SceneStream::Item item = stream.at(i);
                const std::string stem = item.annotation.scene_id;
                write_raster(item.scene, out_dir / "scenes" / (stem + ".cf32"));
                write_pgm8(item.image, out_dir / "scenes" / (stem + ".pgm"));
                annotation_lines[i] = to_json(item.annotation).dump();
            } catch (...) {
                std::lock_guard<std::mutex> lock(sync_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
            const uint64_t finished = done.fetch_add(1) + 1;
            if (progress != nullptr && finished % 100 == 0) {
                std::lock_guard<std::mutex> lock(sync_mutex);
                *progress << "generated " << finished << "/" << count << " scenes\n";
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    {
        std::ofstream ann(out_dir / "annotations.jsonl");
        if (!ann) throw IoError("cannot open for writing: annotations.jsonl");
        for (const std::string& line : annotation_lines) ann << line << "\n";
        ann.flush();
        if (!ann) throw IoError("write failed: annotations.jsonl");
    }

    GenerateResult result;
    result.scene_count = count;
    // Hash everything except the echo itself, then record it in the echo.
    result.content_hash = hash_tree(out_dir);
    json echo = to_json(manifest);
    echo["content_hash"] = result.content_hash;
    echo["scene_count"] = count;
    write_json_file(echo, out_dir / "manifest.echo.json");
    return result;
}

}  // namespace sarforge
