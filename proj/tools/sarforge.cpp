// sarforge: synthesize hybrid SAR detection datasets and evaluate detector
// predictions against the generated labels.
//
// Subcommands map one-to-one onto the pipeline stages:
//   gen-chips    build a synthetic target/shadow chip library
//   gen-dataset  materialize a dataset from a manifest
//   detect       run the CFAR baseline over a generated dataset
//   eval         score predictions against annotations

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sarforge/dataset.hpp"
#include "sarforge/detect.hpp"
#include "sarforge/metrics.hpp"
#include "sarforge/raster_io.hpp"
#include "sarforge/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sarforge;

namespace {

struct ChipsConfig {
    uint64_t master_seed = 0;
    int chip_size = 128;
    std::string mode = "targets";  // "targets" or "distractors"
    double amplitude_scale = 1.0;  // brightness relative to the stock templates
    std::vector<std::string> classes;
    ChipGridSpec grid;
    SensorConfig sensor;
};

ChipsConfig chips_config_from_json(const json& j) {
    ChipsConfig cfg;
    try {
        cfg.master_seed = j.value("master_seed", uint64_t{0});
        cfg.chip_size = j.value("chip_size", 128);
        cfg.mode = j.value("mode", "targets");
        cfg.amplitude_scale = j.value("amplitude_scale", 1.0);
        cfg.classes = j.at("classes").get<std::vector<std::string>>();
        cfg.grid.azimuth_step_deg = j.value("azimuth_step_deg", 0.5);
        if (j.contains("depressions_deg")) {
            cfg.grid.depressions_deg = j.at("depressions_deg").get<std::vector<double>>();
        }
        if (j.contains("azimuth_sector_deg")) {
            cfg.grid.azimuth_sector_deg =
                j.at("azimuth_sector_deg").get<std::array<double, 2>>();
        }
        if (j.contains("sensor")) cfg.sensor = sensor_config_from_json(j.at("sensor"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("chips config: ") + e.what());
    }
    if (cfg.classes.empty()) throw ConfigError("chips config: classes must be non-empty");
    if (cfg.mode != "targets" && cfg.mode != "distractors") {
        throw ConfigError("chips config: mode must be 'targets' or 'distractors'");
    }
    if (cfg.amplitude_scale <= 0.0) {
        throw ConfigError("chips config: amplitude_scale must be > 0");
    }
    return cfg;
}

TemplateStyle style_for(const ChipsConfig& cfg, const std::string& name) {
    if (cfg.mode != "distractors") return TemplateStyle::vehicle;
    return name.find("tree") != std::string::npos ? TemplateStyle::tree
                                                  : TemplateStyle::house;
}

int run_gen_chips(const fs::path& config_path, const fs::path& out_dir) {
    const ChipsConfig cfg = chips_config_from_json(read_json_file(config_path));
    std::vector<TargetTemplate> templates;
    templates.reserve(cfg.classes.size());
    for (const std::string& name : cfg.classes) {
        TargetTemplate tpl = make_procedural_template(name, cfg.master_seed, cfg.chip_size,
                                                      style_for(cfg, name));
        for (Scatterer& s : tpl.geometry.scatterers) s.amplitude *= cfg.amplitude_scale;
        templates.push_back(std::move(tpl));
    }
    const size_t count =
        write_chip_library(templates, cfg.grid, cfg.chip_size, cfg.sensor, out_dir);
    std::cout << "wrote " << count << " chips (" << cfg.classes.size() << " classes, "
              << cfg.grid.azimuths().size() << " azimuths, "
              << cfg.grid.depressions_deg.size() << " depressions) to "
              << out_dir.string() << "\n";
    return ExitStatus::ok;
}

int run_gen_dataset(const fs::path& manifest_path, const fs::path& out_dir, int threads) {
    const DatasetManifest manifest = read_manifest(manifest_path);
    const GenerateResult result = generate_dataset(manifest, out_dir, threads, &std::cout);
    std::cout << "scenes: " << result.scene_count << "\n"
              << "content_hash: " << result.content_hash << "\n";
    return ExitStatus::ok;
}

int run_detect(const fs::path& in_dir, const fs::path& cfar_path, const fs::path& out_path) {
    CfarConfig cfg;
    if (!cfar_path.empty()) cfg = read_cfar_config(cfar_path);

    fs::path scene_dir = in_dir / "scenes";
    if (!fs::is_directory(scene_dir)) scene_dir = in_dir;
    std::vector<fs::path> files;
    if (!fs::is_directory(scene_dir)) throw IoError("no such directory: " + scene_dir.string());
    for (const auto& entry : fs::directory_iterator(scene_dir)) {
        if (entry.path().extension() == ".cf32") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no .cf32 scenes in " + scene_dir.string());

    std::vector<Prediction> predictions;
    size_t processed = 0;
    for (const fs::path& f : files) {
        const ComplexRaster scene = read_raster(f);
        std::vector<Prediction> dets = cfar_detect(scene, cfg, f.stem().string());
        predictions.insert(predictions.end(), dets.begin(), dets.end());
        if (++processed % 100 == 0) {
            std::cout << "detected over " << processed << "/" << files.size()
                      << " scenes\n";
        }
    }
    write_predictions_jsonl(predictions, out_path);
    std::cout << "scenes: " << files.size() << "\npredictions: " << predictions.size()
              << "\n";
    return ExitStatus::ok;
}

std::vector<double> parse_iou_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("bad IoU threshold: " + item);
        }
        if (out.back() <= 0.0 || out.back() >= 1.0) {
            throw ConfigError("IoU threshold must be in (0,1): " + item);
        }
    }
    if (out.empty()) throw ConfigError("no IoU thresholds given");
    return out;
}

int run_eval(const fs::path& preds_path, const fs::path& gt_path, const std::string& iou_list,
             const fs::path& out_dir, bool distractor_mode) {
    const std::vector<double> ious = parse_iou_list(iou_list);
    const std::vector<Prediction> predictions = read_predictions_jsonl(preds_path);
    const std::vector<SceneAnnotation> annotations = read_annotations_jsonl(gt_path);
    const std::string role = distractor_mode ? "distractor" : "target";
    const std::vector<GroundTruth> gts = ground_truths_for_role(annotations, role);
    if (gts.empty()) {
        if (distractor_mode) {
            throw EvalError("no distractor boxes in the ground truth");
        }
        throw EvalError(
            "zero target ground truths; for false-alarm probes over distractor "
            "annotations rerun with --distractor");
    }

    fs::create_directories(out_dir);
    json summary;
    summary["mode"] = distractor_mode ? "distractor" : "standard";
    summary["n_predictions"] = predictions.size();
    summary["n_ground_truths"] = gts.size();
    json counts = json::object();
    for (const double iou_thr : ious) {
        const int pct = static_cast<int>(std::lround(iou_thr * 100.0));
        const PRCurve curve = pr_curve(predictions, gts, iou_thr);
        const double ap = average_precision(curve);
        const MatchOutcome m = match_all(predictions, gts, iou_thr);
        write_pr_curve_csv(curve, out_dir / ("pr_curve_iou" + std::to_string(pct) + ".csv"));
        summary["ap" + std::to_string(pct)] = ap;
        counts[std::to_string(pct)] = json{{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}};
    }
    summary["counts"] = counts;

    std::vector<double> sweep_thresholds;
    for (int k = 1; k <= 19; ++k) sweep_thresholds.push_back(k / 20.0);
    write_ap_sweep_csv(ap_sweep(predictions, gts, sweep_thresholds),
                       out_dir / "ap_sweep.csv");
    write_json_file(summary, out_dir / "summary.json");

    for (const double iou_thr : ious) {
        const int pct = static_cast<int>(std::lround(iou_thr * 100.0));
        std::cout << "ap" << pct << ": " << summary["ap" + std::to_string(pct)].dump()
                  << "\n";
    }
    std::cout << "report: " << out_dir.string() << "\n";
    return ExitStatus::ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid SAR detection dataset synthesis and evaluation"};
    app.require_subcommand(1);

    std::string chips_config;
    std::string chips_out;
    CLI::App* gen_chips = app.add_subcommand("gen-chips", "generate a target chip library");
    gen_chips->add_option("--config", chips_config, "chip library config (JSON)")->required();
    gen_chips->add_option("--out", chips_out, "output directory")->required();

    std::string manifest_path;
    std::string dataset_out;
    int threads = 1;
    CLI::App* gen_dataset = app.add_subcommand("gen-dataset", "materialize a dataset");
    gen_dataset->add_option("--manifest", manifest_path, "dataset manifest (JSON)")->required();
    gen_dataset->add_option("--out", dataset_out, "output directory")->required();
    gen_dataset->add_option("--threads", threads, "worker threads (output is identical for any count)");

    std::string detect_in;
    std::string cfar_path;
    std::string detect_out;
    CLI::App* detect = app.add_subcommand("detect", "run the CFAR baseline detector");
    detect->add_option("--in", detect_in, "dataset directory (scenes/*.cf32)")->required();
    detect->add_option("--cfar", cfar_path, "CFAR config (JSON); defaults apply if omitted");
    detect->add_option("--out", detect_out, "predictions JSONL")->required();

    std::string preds_path;
    std::string gt_path;
    std::string iou_list = "0.25,0.5";
    std::string report_dir;
    bool distractor_mode = false;
    CLI::App* eval = app.add_subcommand("eval", "evaluate predictions against annotations");
    eval->add_option("--preds", preds_path, "predictions JSONL")->required();
    eval->add_option("--gt", gt_path, "annotations JSONL")->required();
    eval->add_option("--iou", iou_list, "comma-separated IoU thresholds");
    eval->add_option("--out", report_dir, "report directory")->required();
    eval->add_flag("--distractor", distractor_mode,
                   "evaluate against distractor boxes (false-alarm probe)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ExitStatus::config_error;
    }

    try {
        if (gen_chips->parsed()) return run_gen_chips(chips_config, chips_out);
        if (gen_dataset->parsed()) return run_gen_dataset(manifest_path, dataset_out, threads);
        if (detect->parsed()) return run_detect(detect_in, cfar_path, detect_out);
        if (eval->parsed()) return run_eval(preds_path, gt_path, iou_list, report_dir,
                                            distractor_mode);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitStatus::io_error;
    }
    return ExitStatus::config_error;
}
