#include "sarforge/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"

#include "sarforge/errors.hpp"

namespace sarforge {
namespace {

using nlohmann::json;

// Stable indices of predictions sorted by descending confidence.
std::vector<size_t> confidence_order(std::span<const Prediction> predictions) {
    std::vector<size_t> order(predictions.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return predictions[a].confidence > predictions[b].confidence;
    });
    return order;
}

struct SceneRecords {
    std::vector<Prediction> predictions;
    std::vector<BBox> gts;
};

std::map<std::string, SceneRecords> group_by_scene(
    const std::vector<Prediction>& predictions, const std::vector<GroundTruth>& gts) {
    std::map<std::string, SceneRecords> scenes;
    for (const GroundTruth& gt : gts) scenes[gt.scene_id].gts.push_back(gt.box);
    for (const Prediction& p : predictions) scenes[p.scene_id].predictions.push_back(p);
    return scenes;
}

}  // namespace

double iou(const BBox& a, const BBox& b) {
    if (!a.valid() || !b.valid()) throw ConfigError("iou: invalid box");
    const double inter = intersection_area(a, b);
    if (inter <= 0.0) return 0.0;
    return inter / (a.area() + b.area() - inter);
}

MatchOutcome match(std::span<const Prediction> predictions, std::span<const BBox> gts,
                   double iou_threshold) {
    MatchOutcome outcome;
    std::vector<bool> claimed(gts.size(), false);
    for (const size_t pi : confidence_order(predictions)) {
        double best_iou = 0.0;
        size_t best_gt = gts.size();
        for (size_t gi = 0; gi < gts.size(); ++gi) {
            if (claimed[gi]) continue;
            const double v = iou(predictions[pi].box, gts[gi]);
            if (v > best_iou) {
                best_iou = v;
                best_gt = gi;
            }
        }
        if (best_gt < gts.size() && best_iou >= iou_threshold) {
            claimed[best_gt] = true;
            ++outcome.tp;
            outcome.pairs.push_back(MatchPair{pi, best_gt, best_iou});
        } else {
            ++outcome.fp;
        }
    }
    outcome.fn = static_cast<int>(gts.size()) - outcome.tp;
    return outcome;
}

MatchOutcome match_all(const std::vector<Prediction>& predictions,
                       const std::vector<GroundTruth>& gts, double iou_threshold) {
    MatchOutcome total;
    for (const auto& [scene_id, records] : group_by_scene(predictions, gts)) {
        const MatchOutcome one = match(records.predictions, records.gts, iou_threshold);
        total.tp += one.tp;
        total.fp += one.fp;
        total.fn += one.fn;
    }
    return total;
}

PRCurve pr_curve(const std::vector<Prediction>& predictions,
                 const std::vector<GroundTruth>& gts, double iou_threshold) {
    if (gts.empty()) {
        throw EvalError("pr_curve: zero ground truths leave recall undefined "
                        "(use distractor mode for false-alarm evaluation)");
    }
    std::set<double, std::greater<double>> thresholds;
    for (const Prediction& p : predictions) {
        if (p.confidence < 0.0 || p.confidence > 1.0) {
            throw ConfigError("prediction confidence outside [0, 1]");
        }
        thresholds.insert(p.confidence);
    }

    PRCurve curve;
    for (const double t : thresholds) {
        std::vector<Prediction> retained;
        retained.reserve(predictions.size());
        for (const Prediction& p : predictions) {
            if (p.confidence >= t) retained.push_back(p);
        }
        const MatchOutcome m = match_all(retained, gts, iou_threshold);
        PRPoint point;
        point.threshold = t;
        point.precision =
            (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 1.0;
        point.recall = static_cast<double>(m.tp) / (m.tp + m.fn);
        curve.points.push_back(point);
    }
    return curve;
}

double average_precision(const PRCurve& curve) {
    const auto& pts = curve.points;
    if (pts.empty()) return 0.0;
    // Monotone envelope: suffix max of precision along descending thresholds.
    std::vector<double> envelope(pts.size());
    double running = 0.0;
    for (size_t i = pts.size(); i-- > 0;) {
        running = std::max(running, pts[i].precision);
        envelope[i] = running;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        ap += (pts[i].recall - prev_recall) * envelope[i];
        prev_recall = pts[i].recall;
    }
    return ap;
}

std::vector<std::pair<double, double>> ap_sweep(
    const std::vector<Prediction>& predictions, const std::vector<GroundTruth>& gts,
    const std::vector<double>& iou_thresholds) {
    std::vector<std::pair<double, double>> table;
    table.reserve(iou_thresholds.size());
    for (const double t : iou_thresholds) {
        if (t <= 0.0 || t >= 1.0) throw ConfigError("ap_sweep: thresholds must be in (0,1)");
        table.emplace_back(t, average_precision(pr_curve(predictions, gts, t)));
    }
    return table;
}

double distractor_ap(const std::vector<Prediction>& predictions,
                     const std::vector<GroundTruth>& distractor_boxes,
                     double iou_threshold) {
    if (distractor_boxes.empty()) {
        throw ConfigError("distractor_ap: need >= 1 distractor box");
    }
    return average_precision(pr_curve(predictions, distractor_boxes, iou_threshold));
}

std::vector<Prediction> read_predictions_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::vector<Prediction> result;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            Prediction p;
            p.scene_id = j.at("scene_id").get<std::string>();
            p.box = BBox{j.at("x_min").get<double>(), j.at("y_min").get<double>(),
                         j.at("x_max").get<double>(), j.at("y_max").get<double>()};
            p.confidence = j.at("confidence").get<double>();
            result.push_back(std::move(p));
        } catch (const json::exception& e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    return result;
}

void write_predictions_jsonl(const std::vector<Prediction>& predictions,
                             const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    for (const Prediction& p : predictions) {
        json j{{"scene_id", p.scene_id}, {"x_min", p.box.x_min},
               {"y_min", p.box.y_min},  {"x_max", p.box.x_max},
               {"y_max", p.box.y_max},  {"confidence", p.confidence}};
        out << j.dump() << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

namespace {

// Locale-independent "%.9g" formatting for CSV cells.
std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void write_pr_curve_csv(const PRCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "threshold,precision,recall\n";
    for (const PRPoint& p : curve.points) {
        out << csv_number(p.threshold) << "," << csv_number(p.precision) << ","
            << csv_number(p.recall) << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

void write_ap_sweep_csv(const std::vector<std::pair<double, double>>& sweep,
                        const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "iou_threshold,ap\n";
    for (const auto& [threshold, ap] : sweep) {
        out << csv_number(threshold) << "," << csv_number(ap) << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace sarforge
