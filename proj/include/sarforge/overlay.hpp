#ifndef SARFORGE_OVERLAY_HPP
#define SARFORGE_OVERLAY_HPP

#include <string>
#include <vector>

#include "sarforge/rng.hpp"
#include "sarforge/sensor.hpp"
#include "sarforge/types.hpp"

namespace sarforge {

/// One chip anchored in scene coordinates.
struct Placement {
    int chip_index = 0;  // into the caller's chip list
    int x = 0;           // top-left column in the scene
    int y = 0;           // top-left row in the scene
    BBox chip_rect;      // chip extent in scene coordinates
};

struct AnnotatedBox {
    BBox box;
    std::string class_name;
    std::string role = "target";  // "target" or "distractor"
};

/// Per-scene ground truth: auto-computed boxes plus the draw that produced
/// the scene, so any record can be regenerated from its seed.
struct SceneAnnotation {
    std::string scene_id;
    SeedSpec seed;
    SensorConfig sensor;
    std::vector<AnnotatedBox> boxes;
};

/// Uniformly random size x size crop of the background.
ComplexRaster crop_background(const ComplexRaster& bg, int size, RandomStream& stream);

/// Zeroes a random share of the brightest signature pixels. The bright set is
/// the top bright_fraction of nonzero-magnitude pixels (at least 8, ties
/// broken by row-major index); ceil(dropout_share * |set|) members are zeroed,
/// chosen uniformly without replacement.
TargetChip dropout_bright_points(const TargetChip& chip, double bright_fraction,
                                 double dropout_share, RandomStream& stream);

/// Rejection-samples pairwise-disjoint chip rectangles, uniform over the
/// feasible region. Placement over background structures is intentionally not
/// prevented. Throws PlacementError after max_attempts rejections for a chip.
std::vector<Placement> place_targets(int scene_width, int scene_height,
                                     const std::vector<const TargetChip*>& chips,
                                     RandomStream& stream, int max_attempts = 100);

struct OverlayResult {
    ComplexRaster scene;
    SceneAnnotation annotation;
};

/// Five-step incrustation of synthetic chips into a background crop:
///   1. zero the background under every placed shadow mask,
///   2. add complex thermal noise to the cut background and band-limit it
///      with the sensor function,
///   3. copy the step-2 values at shadow pixels into the original background,
///   4. band-limit each chip signature and complex-add it over its rectangle,
///   5. return the complex scene (callers apply the quarter-power LUT).
/// Boxes come from compute_bbox on each chip, translated to scene coordinates.
/// Pixels outside every chip rectangle are bit-identical to bg_crop.
OverlayResult overlay_scene(const ComplexRaster& bg_crop,
                            const std::vector<const TargetChip*>& chips,
                            const std::vector<Placement>& placements,
                            const SensorConfig& cfg, RandomStream& stream,
                            const std::string& role = "target");

/// Tight box over signature pixels with |z| >= threshold_ratio * max|z|.
BBox compute_bbox(const ComplexRaster& signature, double threshold_ratio = 0.1);
BBox compute_bbox(const TargetChip& chip, double threshold_ratio = 0.1);

/// One measured chip (image + 3-class segmentation) for incrustation.
struct MeasuredChipRef {
    const ComplexRaster* image = nullptr;
    const Mask* segmentation = nullptr;  // 1 = target, 2 = shadow
    int x = 0;
    int y = 0;
};

struct MeasuredOverlayResult {
    ComplexRaster scene;
    std::vector<BBox> boxes;  // tight over segmentation label 1
};

/// Same five-step pipeline for measured chips: shadows from segmentation
/// label 2; target pixels (label 1) REPLACE scene values, since a measured
/// pixel already contains clutter. Boxes are tight over label 1; a chip with
/// no target-labeled pixels contributes shadow only and yields no box.
MeasuredOverlayResult overlay_measured_scene(const ComplexRaster& bg,
                                             const std::vector<MeasuredChipRef>& chips,
                                             const SensorConfig& cfg,
                                             RandomStream& stream);

/// Single-chip convenience wrapper around overlay_measured_scene.
struct MeasuredChipResult {
    ComplexRaster scene;
    BBox box;
};
MeasuredChipResult overlay_measured_chip(const ComplexRaster& chip_img, const Mask& seg,
                                         const ComplexRaster& bg, int origin_x,
                                         int origin_y, const SensorConfig& cfg,
                                         RandomStream& stream);

}  // namespace sarforge

#endif  // SARFORGE_OVERLAY_HPP
