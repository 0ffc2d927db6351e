#ifndef SARFORGE_PATCHWORK_HPP
#define SARFORGE_PATCHWORK_HPP

#include <functional>
#include <vector>

#include "sarforge/overlay.hpp"
#include "sarforge/rng.hpp"
#include "sarforge/sim.hpp"
#include "sarforge/types.hpp"

namespace sarforge {

struct PatchworkConfig {
    int rows = 4;
    int cols = 4;
    int vignette_size = 128;
    int overlap = 16;

    void validate() const {
        if (rows < 1 || cols < 1) throw ConfigError("patchwork: grid must be >= 1x1");
        if (overlap < 0 || overlap >= vignette_size) {
            throw ConfigError("patchwork: overlap must be in [0, vignette_size)");
        }
        if (2 * overlap > vignette_size) {
            throw ConfigError("patchwork: overlap strips may not meet (2*overlap <= size)");
        }
    }
    int output_width() const { return cols * vignette_size - (cols - 1) * overlap; }
    int output_height() const { return rows * vignette_size - (rows - 1) * overlap; }
};

/// Per-axis blend weights for the vignette at grid_index out of grid_count:
/// linear 0-to-1 ramps across interior overlap strips, 1 elsewhere. Opposing
/// ramps of adjacent vignettes sum to 1, so the weights form a partition of
/// unity over the whole output.
std::vector<double> patchwork_axis_weights(int grid_index, int grid_count,
                                           const PatchworkConfig& cfg);

struct PatchworkResult {
    ComplexRaster image;
    std::vector<AnnotatedBox> boxes;
};

/// Blends a rows x cols grid of vignettes (row-major) into one scene:
/// separable linear fade weights on complex amplitudes, overlapping weighted
/// values summed, boxes translated by each vignette's grid offset.
PatchworkResult build_patchwork(const std::vector<ComplexRaster>& vignettes,
                                const std::vector<std::vector<AnnotatedBox>>& boxes,
                                const PatchworkConfig& cfg);

/// One patchwork of single-target vignettes built on the fly: each cell takes
/// a uniformly drawn chip (with replacement) composited into a crop of a
/// uniformly drawn background via the overlay pipeline.
PatchworkResult build_patchwork_scene(const std::vector<TargetChip>& chip_pool,
                                      const std::vector<ComplexRaster>& backgrounds,
                                      const PatchworkConfig& cfg,
                                      const SensorConfig& sensor, RandomStream& stream);

/// Assembles `count` patchworks; patchwork i uses the stream derived from
/// (master_seed, i), so any index can be produced independently.
size_t assemble_patchwork_dataset(
    const std::vector<TargetChip>& chip_pool,
    const std::vector<ComplexRaster>& backgrounds, const PatchworkConfig& cfg,
    const SensorConfig& sensor, size_t count, uint64_t master_seed,
    const std::function<void(size_t index, PatchworkResult&&, SeedSpec)>& sink);

}  // namespace sarforge

#endif  // SARFORGE_PATCHWORK_HPP
