#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"

#include "reference_ap.hpp"
#include "sarforge/metrics.hpp"
#include "sarforge/rng.hpp"

using namespace sarforge;
using sarforge_tests::reference_average_precision;

namespace {

Prediction pred(double x0, double y0, double x1, double y1, double conf,
                const std::string& scene = "s0") {
    return Prediction{scene, BBox{x0, y0, x1, y1}, conf};
}

GroundTruth gt(double x0, double y0, double x1, double y1,
               const std::string& scene = "s0") {
    return GroundTruth{scene, BBox{x0, y0, x1, y1}};
}

}  // namespace

TEST_CASE("iou: identical, disjoint, and the 1/3 overlap case") {
    const BBox a{0, 0, 10, 10};
    CHECK(iou(a, a) == 1.0);
    CHECK(iou(a, BBox{20, 20, 30, 30}) == 0.0);
    CHECK(iou(a, BBox{5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("iou: symmetry on random boxes") {
    RandomStream stream = derive_stream(SeedSpec{40, 0});
    for (int t = 0; t < 200; ++t) {
        const BBox a{stream.uniform(0, 50), stream.uniform(0, 50),
                     stream.uniform(51, 100), stream.uniform(51, 100)};
        const BBox b{stream.uniform(0, 50), stream.uniform(0, 50),
                     stream.uniform(51, 100), stream.uniform(51, 100)};
        CHECK(iou(a, b) == iou(b, a));
        CHECK(iou(a, a) == 1.0);
        const double v = iou(a, b);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("match: exact hit, greedy confidence order, all-miss") {
    std::vector<Prediction> one{pred(0, 0, 10, 10, 0.9)};
    std::vector<BBox> single{BBox{0, 0, 10, 10}};
    const MatchOutcome hit = match(one, single, 0.5);
    CHECK(hit.tp == 1);
    CHECK(hit.fp == 0);
    CHECK(hit.fn == 0);

    // Two predictions compete for one GT: the higher-confidence one pairs
    // even though the other overlaps better.
    std::vector<BBox> gt_box{BBox{0, 0, 10, 10}};
    std::vector<Prediction> two{
        pred(0, 0, 10, 6, 0.9),   // IoU 0.6
        pred(0, 0, 10, 7, 0.8),   // IoU 0.7
    };
    const MatchOutcome greedy = match(two, gt_box, 0.5);
    CHECK(greedy.tp == 1);
    CHECK(greedy.fp == 1);
    CHECK(greedy.fn == 0);
    REQUIRE(greedy.pairs.size() == 1);
    CHECK(greedy.pairs[0].prediction_index == 0);

    const MatchOutcome misses = match({}, std::vector<BBox>(3, BBox{0, 0, 5, 5}), 0.5);
    CHECK(misses.tp == 0);
    CHECK(misses.fn == 3);
}

TEST_CASE("match: count identities hold on random instances") {
    RandomStream stream = derive_stream(SeedSpec{41, 0});
    for (int t = 0; t < 100; ++t) {
        std::vector<Prediction> preds;
        std::vector<BBox> gts;
        const int np = static_cast<int>(stream.uniform_int(0, 8));
        const int ng = static_cast<int>(stream.uniform_int(0, 5));
        for (int i = 0; i < np; ++i) {
            const double x = stream.uniform(0, 40);
            const double y = stream.uniform(0, 40);
            preds.push_back(pred(x, y, x + stream.uniform(1, 10), y + stream.uniform(1, 10),
                                 stream.uniform(0, 1)));
        }
        for (int i = 0; i < ng; ++i) {
            const double x = stream.uniform(0, 40);
            const double y = stream.uniform(0, 40);
            gts.push_back(BBox{x, y, x + stream.uniform(1, 10), y + stream.uniform(1, 10)});
        }
        const MatchOutcome m = match(preds, gts, 0.3);
        CHECK(m.tp + m.fn == ng);
        CHECK(m.tp + m.fp == np);
        CHECK(static_cast<size_t>(m.tp) == m.pairs.size());
    }
}

TEST_CASE("pr_curve: perfect detection reaches (1, 1)") {
    std::vector<Prediction> preds{pred(0, 0, 10, 10, 1.0)};
    std::vector<GroundTruth> gts{gt(0, 0, 10, 10)};
    const PRCurve curve = pr_curve(preds, gts, 0.5);
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].precision == 1.0);
    CHECK(curve.points[0].recall == 1.0);
    CHECK(average_precision(curve) == 1.0);
}

TEST_CASE("pr_curve: never-matching predictions give zero precision") {
    std::vector<Prediction> preds{pred(50, 50, 60, 60, 0.9), pred(70, 70, 80, 80, 0.4)};
    std::vector<GroundTruth> gts{gt(0, 0, 10, 10)};
    const PRCurve curve = pr_curve(preds, gts, 0.5);
    REQUIRE(curve.points.size() == 2);
    for (const PRPoint& p : curve.points) CHECK(p.precision == 0.0);
    CHECK(average_precision(curve) == 0.0);
}

TEST_CASE("pr_curve: hand-traced three-prediction curve and its AP") {
    // conf .9 -> TP, conf .8 -> FP, conf .7 -> TP, over two GTs.
    std::vector<Prediction> preds{
        pred(0, 0, 10, 10, 0.9),
        pred(40, 40, 50, 50, 0.8),
        pred(20, 0, 30, 10, 0.7),
    };
    std::vector<GroundTruth> gts{gt(0, 0, 10, 10), gt(20, 0, 30, 10)};
    const PRCurve curve = pr_curve(preds, gts, 0.5);
    REQUIRE(curve.points.size() == 3);
    CHECK(curve.points[0].threshold == 0.9);
    CHECK(curve.points[0].precision == 1.0);
    CHECK(curve.points[0].recall == 0.5);
    CHECK(curve.points[1].precision == 0.5);
    CHECK(curve.points[1].recall == 0.5);
    CHECK(curve.points[2].precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(curve.points[2].recall == 1.0);

    // Envelope: 1.0 up to recall 0.5, then 2/3.
    CHECK(average_precision(curve) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));

    CHECK_THROWS_AS(pr_curve(preds, {}, 0.5), EvalError);
}

TEST_CASE("pr_curve: recall is monotone as the threshold drops") {
    RandomStream stream = derive_stream(SeedSpec{42, 0});
    for (int t = 0; t < 50; ++t) {
        std::vector<Prediction> preds;
        std::vector<GroundTruth> gts;
        const int np = static_cast<int>(stream.uniform_int(1, 10));
        const int ng = static_cast<int>(stream.uniform_int(1, 5));
        for (int i = 0; i < np; ++i) {
            const double x = stream.uniform(0, 40);
            const double y = stream.uniform(0, 40);
            preds.push_back(pred(x, y, x + stream.uniform(2, 12), y + stream.uniform(2, 12),
                                 stream.uniform(0, 1)));
        }
        for (int i = 0; i < ng; ++i) {
            const double x = stream.uniform(0, 40);
            const double y = stream.uniform(0, 40);
            gts.push_back(gt(x, y, x + stream.uniform(2, 12), y + stream.uniform(2, 12)));
        }
        const PRCurve curve = pr_curve(preds, gts, 0.25);
        for (size_t i = 1; i < curve.points.size(); ++i) {
            CHECK(curve.points[i].recall >= curve.points[i - 1].recall);
            CHECK(curve.points[i].threshold < curve.points[i - 1].threshold);
        }
    }
}

TEST_CASE("average_precision: matches the brute-force oracle on 200 instances") {
    RandomStream stream = derive_stream(SeedSpec{43, 0});
    for (int t = 0; t < 200; ++t) {
        std::vector<Prediction> preds;
        std::vector<GroundTruth> gts;
        const int np = static_cast<int>(stream.uniform_int(0, 6));
        const int ng = static_cast<int>(stream.uniform_int(1, 4));
        const int scenes = static_cast<int>(stream.uniform_int(1, 2));
        for (int i = 0; i < np; ++i) {
            const double x = stream.uniform(0, 30);
            const double y = stream.uniform(0, 30);
            const std::string scene = "s" + std::to_string(stream.uniform_int(0, scenes - 1));
            preds.push_back(pred(x, y, x + stream.uniform(2, 10), y + stream.uniform(2, 10),
                                 stream.uniform(0, 1), scene));
        }
        for (int i = 0; i < ng; ++i) {
            const double x = stream.uniform(0, 30);
            const double y = stream.uniform(0, 30);
            const std::string scene = "s" + std::to_string(stream.uniform_int(0, scenes - 1));
            gts.push_back(gt(x, y, x + stream.uniform(2, 10), y + stream.uniform(2, 10), scene));
        }
        const double got = average_precision(pr_curve(preds, gts, 0.3));
        const double expected = reference_average_precision(preds, gts, 0.3);
        REQUIRE(std::abs(got - expected) <= 1e-9);
    }
}

TEST_CASE("average_precision: confidence scaling leaves AP unchanged") {
    RandomStream stream = derive_stream(SeedSpec{44, 0});
    std::vector<Prediction> preds;
    std::vector<GroundTruth> gts;
    for (int i = 0; i < 6; ++i) {
        const double x = stream.uniform(0, 30);
        const double y = stream.uniform(0, 30);
        preds.push_back(pred(x, y, x + 8, y + 8, stream.uniform(0.1, 1.0)));
        gts.push_back(gt(x + stream.uniform(0, 2), y + stream.uniform(0, 2), x + 8, y + 8));
    }
    const double base = average_precision(pr_curve(preds, gts, 0.3));
    std::vector<Prediction> scaled = preds;
    for (Prediction& p : scaled) p.confidence *= 0.5;
    CHECK(average_precision(pr_curve(scaled, gts, 0.3)) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("ap_sweep: perfect detections everywhere, threshold crossing at 0.4") {
    std::vector<double> thresholds;
    for (int k = 1; k <= 19; ++k) thresholds.push_back(k / 20.0);

    std::vector<Prediction> exact{pred(0, 0, 10, 10, 0.9), pred(20, 20, 28, 26, 0.8)};
    std::vector<GroundTruth> gts{gt(0, 0, 10, 10), gt(20, 20, 28, 26)};
    for (const auto& [thr, ap] : ap_sweep(exact, gts, thresholds)) {
        CHECK(ap == 1.0);
    }

    // Boxes built to overlap at IoU exactly 2/5: [0,3) x [0,1) against
    // [1,5) x [0,1) gives intersection 2, union 5.
    std::vector<Prediction> offset{pred(0, 0, 3, 1, 0.9)};
    std::vector<GroundTruth> offset_gt{gt(1, 0, 5, 1)};
    CHECK(iou(offset[0].box, offset_gt[0].box) == doctest::Approx(0.4).epsilon(1e-15));
    for (const auto& [thr, ap] : ap_sweep(offset, offset_gt, thresholds)) {
        if (thr <= 0.4) {
            CHECK(ap == 1.0);
        } else {
            CHECK(ap == 0.0);
        }
    }

    bool has25 = false;
    bool has50 = false;
    for (const auto& [thr, ap] : ap_sweep(exact, gts, {0.25, 0.5})) {
        has25 = has25 || thr == 0.25;
        has50 = has50 || thr == 0.5;
    }
    CHECK(has25);
    CHECK(has50);
}

TEST_CASE("distractor_ap: silence is zero, full detection is one, 1-of-10 is 0.1") {
    std::vector<GroundTruth> distractors;
    for (int i = 0; i < 10; ++i) {
        distractors.push_back(gt(i * 20.0, 0.0, i * 20.0 + 10.0, 10.0));
    }

    // Predictions nowhere near the distractors.
    std::vector<Prediction> far{pred(500, 500, 510, 510, 0.9)};
    CHECK(distractor_ap(far, distractors, 0.25) == 0.0);

    // Every distractor confidently detected.
    std::vector<Prediction> all;
    for (int i = 0; i < 10; ++i) {
        all.push_back(pred(i * 20.0, 0.0, i * 20.0 + 10.0, 10.0, 0.9));
    }
    CHECK(distractor_ap(all, distractors, 0.25) == 1.0);

    // One distractor matched at high confidence, nothing else predicted.
    std::vector<Prediction> one{pred(0, 0, 10, 10, 0.95)};
    CHECK(distractor_ap(one, distractors, 0.25) == doctest::Approx(0.1).epsilon(1e-12));

    CHECK_THROWS_AS(distractor_ap(far, {}, 0.25), ConfigError);
}

TEST_CASE("prediction JSONL round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "sarforge_metrics_test";
    std::filesystem::create_directories(dir);
    std::vector<Prediction> preds{pred(1, 2, 3, 4, 0.25, "000001"),
                                  pred(5.5, 6.5, 9.0, 10.0, 1.0, "000002")};
    write_predictions_jsonl(preds, dir / "preds.jsonl");
    const std::vector<Prediction> back = read_predictions_jsonl(dir / "preds.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0].scene_id == "000001");
    CHECK(back[0].box.x_min == 1.0);
    CHECK(back[0].confidence == 0.25);
    CHECK(back[1].box.y_max == 10.0);
    std::filesystem::remove_all(dir);
}
