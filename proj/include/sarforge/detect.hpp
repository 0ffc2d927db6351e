#ifndef SARFORGE_DETECT_HPP
#define SARFORGE_DETECT_HPP

#include <string>
#include <vector>

#include "sarforge/metrics.hpp"
#include "sarforge/types.hpp"

namespace sarforge {

/// Cell-averaging CFAR parameters. The training band is the square annulus
/// between Chebyshev radii guard_px and guard_px + train_px.
struct CfarConfig {
    int guard_px = 4;
    int train_px = 8;
    double threshold_factor = 3.0;  // alpha, must be > 1
    int min_area_px = 4;
    int merge_gap_px = 2;  // morphological closing radius

    void validate() const {
        if (train_px <= 0) throw ConfigError("cfar: train_px must be > 0");
        if (guard_px < 0) throw ConfigError("cfar: guard_px must be >= 0");
        if (threshold_factor <= 1.0) throw ConfigError("cfar: threshold_factor must be > 1");
        if (min_area_px < 1) throw ConfigError("cfar: min_area_px must be >= 1");
        if (merge_gap_px < 0) throw ConfigError("cfar: merge_gap_px must be >= 0");
    }
};

/// Stage 1 of the detector: flags intensity cells exceeding
/// threshold_factor times the local training-annulus mean. Exposed so the
/// false-alarm statistics can be measured without the grouping stages.
std::vector<uint8_t> cfar_flag_map(const std::vector<double>& intensity, int width,
                                   int height, const CfarConfig& cfg);

/// Full pipeline: flag, close gaps (radius merge_gap_px), group into
/// 8-connected components, drop components under min_area_px, emit one
/// confidence-scored box per component. Deterministic; boxes in row-major
/// component order.
std::vector<Prediction> cfar_detect(const ComplexRaster& scene, const CfarConfig& cfg,
                                    const std::string& scene_id = "");

/// 8-bit variant: intensity reconstructed as value^4 (inverse of the
/// quarter-power display stretch, up to scale; CFAR is scale-free).
std::vector<Prediction> cfar_detect(const Pgm8& image, const CfarConfig& cfg,
                                    const std::string& scene_id = "");

}  // namespace sarforge

#endif  // SARFORGE_DETECT_HPP
