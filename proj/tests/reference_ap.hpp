// Test-only brute-force reference for average precision. Enumerates every
// confidence cut, rebuilds the per-scene greedy matching from scratch, and
// integrates the precision envelope straight from the definition. Shares no
// code with the library implementation it checks.
#ifndef SARFORGE_TESTS_REFERENCE_AP_HPP
#define SARFORGE_TESTS_REFERENCE_AP_HPP

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "sarforge/metrics.hpp"

namespace sarforge_tests {

inline double reference_average_precision(const std::vector<sarforge::Prediction>& preds,
                                          const std::vector<sarforge::GroundTruth>& gts,
                                          double iou_threshold) {
    using sarforge::BBox;
    using sarforge::GroundTruth;
    using sarforge::Prediction;

    auto ref_iou = [](const BBox& a, const BBox& b) {
        const double ix0 = std::max(a.x_min, b.x_min);
        const double iy0 = std::max(a.y_min, b.y_min);
        const double ix1 = std::min(a.x_max, b.x_max);
        const double iy1 = std::min(a.y_max, b.y_max);
        const double iw = ix1 - ix0;
        const double ih = iy1 - iy0;
        if (iw <= 0.0 || ih <= 0.0) return 0.0;
        const double inter = iw * ih;
        const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
        const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
        return inter / (area_a + area_b - inter);
    };

    std::set<double, std::greater<double>> cuts;
    for (const Prediction& p : preds) cuts.insert(p.confidence);

    std::vector<std::pair<double, double>> recall_precision;
    for (const double cut : cuts) {
        std::set<std::string> scenes;
        for (const GroundTruth& g : gts) scenes.insert(g.scene_id);
        for (const Prediction& p : preds) scenes.insert(p.scene_id);
        int tp = 0;
        int fp = 0;
        for (const std::string& scene : scenes) {
            std::vector<const Prediction*> retained;
            for (const Prediction& p : preds) {
                if (p.scene_id == scene && p.confidence >= cut) retained.push_back(&p);
            }
            std::stable_sort(retained.begin(), retained.end(),
                             [](const Prediction* a, const Prediction* b) {
                                 return a->confidence > b->confidence;
                             });
            std::vector<const GroundTruth*> scene_gts;
            for (const GroundTruth& g : gts) {
                if (g.scene_id == scene) scene_gts.push_back(&g);
            }
            std::vector<bool> used(scene_gts.size(), false);
            for (const Prediction* p : retained) {
                int best = -1;
                double best_v = 0.0;
                for (size_t gi = 0; gi < scene_gts.size(); ++gi) {
                    if (used[gi]) continue;
                    const double v = ref_iou(p->box, scene_gts[gi]->box);
                    if (v > best_v) {
                        best_v = v;
                        best = static_cast<int>(gi);
                    }
                }
                if (best >= 0 && best_v >= iou_threshold) {
                    used[static_cast<size_t>(best)] = true;
                    ++tp;
                } else {
                    ++fp;
                }
            }
        }
        const double precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 1.0;
        const double recall = static_cast<double>(tp) / static_cast<double>(gts.size());
        recall_precision.emplace_back(recall, precision);
    }

    double ap = 0.0;
    double prev_recall = 0.0;
    for (size_t i = 0; i < recall_precision.size(); ++i) {
        const double r = recall_precision[i].first;
        double envelope = 0.0;
        for (size_t j = 0; j < recall_precision.size(); ++j) {
            if (recall_precision[j].first >= r) {
                envelope = std::max(envelope, recall_precision[j].second);
            }
        }
        ap += (r - prev_recall) * envelope;
        prev_recall = r;
    }
    return ap;
}

}  // namespace sarforge_tests

#endif  // SARFORGE_TESTS_REFERENCE_AP_HPP
