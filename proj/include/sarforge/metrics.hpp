#ifndef SARFORGE_METRICS_HPP
#define SARFORGE_METRICS_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sarforge/types.hpp"

namespace sarforge {

struct Prediction {
    std::string scene_id;
    BBox box;
    double confidence = 0.0;  // in [0, 1]
};

struct GroundTruth {
    std::string scene_id;
    BBox box;
};

struct MatchPair {
    size_t prediction_index = 0;
    size_t gt_index = 0;
    double iou = 0.0;
};

/// tp + fn = number of ground truths; tp + fp = number of predictions.
struct MatchOutcome {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::vector<MatchPair> pairs;
};

struct PRPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Points sorted by descending confidence threshold; recall is non-decreasing
/// along the list.
struct PRCurve {
    std::vector<PRPoint> points;
};

/// Intersection over union with half-open pixel areas; 0 when disjoint.
double iou(const BBox& a, const BBox& b);

/// Greedy single-scene matching: predictions in descending confidence (ties
/// by input order) each claim the unpaired ground truth of highest IoU when
/// that IoU reaches the threshold; the rest are false positives, unclaimed
/// ground truths are false negatives.
MatchOutcome match(std::span<const Prediction> predictions, std::span<const BBox> gts,
                   double iou_threshold);

/// Per-scene matching aggregated over the whole record set.
MatchOutcome match_all(const std::vector<Prediction>& predictions,
                       const std::vector<GroundTruth>& gts, double iou_threshold);

/// One point per distinct confidence value: predictions at or above the value
/// are retained and re-matched per scene. Throws EvalError on zero ground
/// truths (recall undefined; use distractor_ap for false-alarm probes).
PRCurve pr_curve(const std::vector<Prediction>& predictions,
                 const std::vector<GroundTruth>& gts, double iou_threshold);

/// Area under the monotone envelope of the curve: precision at each recall is
/// replaced by the maximum precision at any recall at least as large, then
/// integrated over recall increments from 0.
double average_precision(const PRCurve& curve);

/// AP recomputed independently at each IoU threshold.
std::vector<std::pair<double, double>> ap_sweep(
    const std::vector<Prediction>& predictions, const std::vector<GroundTruth>& gts,
    const std::vector<double>& iou_thresholds);

/// AP against distractor boxes as pseudo ground truth. Low values mean the
/// detector ignores the distractors, which is the desired outcome; this op
/// reports, it does not judge.
double distractor_ap(const std::vector<Prediction>& predictions,
                     const std::vector<GroundTruth>& distractor_boxes,
                     double iou_threshold);

// JSONL: {scene_id, x_min, y_min, x_max, y_max, confidence} per line.
std::vector<Prediction> read_predictions_jsonl(const std::filesystem::path& path);
void write_predictions_jsonl(const std::vector<Prediction>& predictions,
                             const std::filesystem::path& path);

void write_pr_curve_csv(const PRCurve& curve, const std::filesystem::path& path);
void write_ap_sweep_csv(const std::vector<std::pair<double, double>>& sweep,
                        const std::filesystem::path& path);

}  // namespace sarforge

#endif  // SARFORGE_METRICS_HPP
