#include "sarforge/patchwork.hpp"

namespace sarforge {

std::vector<double> patchwork_axis_weights(int grid_index, int grid_count,
                                           const PatchworkConfig& cfg) {
    cfg.validate();
    const int v = cfg.vignette_size;
    const int o = cfg.overlap;
    std::vector<double> w(static_cast<size_t>(v), 1.0);
    if (o == 0) return w;
    // Incoming ramp (not on the first vignette): 0 -> 1 across the strip,
    // sampled at pixel centers so opposing ramps sum to exactly 1.
    if (grid_index > 0) {
        for (int u = 0; u < o; ++u) w[static_cast<size_t>(u)] = (u + 0.5) / o;
    }
    // Outgoing ramp (not on the last vignette).
    if (grid_index < grid_count - 1) {
        for (int u = 0; u < o; ++u) {
            w[static_cast<size_t>(v - o + u)] = (o - u - 0.5) / o;
        }
    }
    return w;
}

PatchworkResult build_patchwork(const std::vector<ComplexRaster>& vignettes,
                                const std::vector<std::vector<AnnotatedBox>>& boxes,
                                const PatchworkConfig& cfg) {
    cfg.validate();
    const size_t cells = static_cast<size_t>(cfg.rows) * cfg.cols;
    if (vignettes.size() != cells || boxes.size() != cells) {
        throw ConfigError("patchwork: grid shape mismatch");
    }
    for (const ComplexRaster& vg : vignettes) {
        if (vg.width != cfg.vignette_size || vg.height != cfg.vignette_size) {
            throw ConfigError("patchwork: vignette size mismatch");
        }
    }

    const int stride = cfg.vignette_size - cfg.overlap;
    PatchworkResult result;
    result.image = ComplexRaster::zeros(cfg.output_width(), cfg.output_height());

    for (int gy = 0; gy < cfg.rows; ++gy) {
        const std::vector<double> wy = patchwork_axis_weights(gy, cfg.rows, cfg);
        for (int gx = 0; gx < cfg.cols; ++gx) {
            const std::vector<double> wx = patchwork_axis_weights(gx, cfg.cols, cfg);
            const ComplexRaster& vg = vignettes[static_cast<size_t>(gy) * cfg.cols + gx];
            const int ox = gx * stride;
            const int oy = gy * stride;
            for (int y = 0; y < cfg.vignette_size; ++y) {
                for (int x = 0; x < cfg.vignette_size; ++x) {
                    const double w = wx[static_cast<size_t>(x)] * wy[static_cast<size_t>(y)];
                    const complexf z = vg.at(x, y);
                    result.image.at(ox + x, oy + y) +=
                        complexf(static_cast<float>(w * z.real()),
                                 static_cast<float>(w * z.imag()));
                }
            }
            for (const AnnotatedBox& b : boxes[static_cast<size_t>(gy) * cfg.cols + gx]) {
                AnnotatedBox shifted = b;
                shifted.box.x_min += ox;
                shifted.box.x_max += ox;
                shifted.box.y_min += oy;
                shifted.box.y_max += oy;
                result.boxes.push_back(shifted);
            }
        }
    }
    return result;
}

PatchworkResult build_patchwork_scene(const std::vector<TargetChip>& chip_pool,
                                      const std::vector<ComplexRaster>& backgrounds,
                                      const PatchworkConfig& cfg,
                                      const SensorConfig& sensor, RandomStream& stream) {
    cfg.validate();
    if (chip_pool.empty()) throw ConfigError("patchwork dataset: empty chip pool");
    if (backgrounds.empty()) throw ConfigError("patchwork dataset: no backgrounds");

    std::vector<ComplexRaster> vignettes;
    std::vector<std::vector<AnnotatedBox>> boxes;
    vignettes.reserve(static_cast<size_t>(cfg.rows) * cfg.cols);
    boxes.reserve(vignettes.capacity());

    for (int cell = 0; cell < cfg.rows * cfg.cols; ++cell) {
        const size_t chip_idx = static_cast<size_t>(
            stream.uniform_int(0, static_cast<int64_t>(chip_pool.size()) - 1));
        const size_t bg_idx = static_cast<size_t>(
            stream.uniform_int(0, static_cast<int64_t>(backgrounds.size()) - 1));
        const TargetChip& chip = chip_pool[chip_idx];
        if (chip.signature.width > cfg.vignette_size ||
            chip.signature.height > cfg.vignette_size) {
            throw ConfigError("patchwork dataset: chip larger than vignette");
        }
        ComplexRaster crop =
            crop_background(backgrounds[bg_idx], cfg.vignette_size, stream);
        std::vector<const TargetChip*> chips{&chip};
        const std::vector<Placement> placements =
            place_targets(cfg.vignette_size, cfg.vignette_size, chips, stream);
        OverlayResult scene = overlay_scene(crop, chips, placements, sensor, stream);
        vignettes.push_back(std::move(scene.scene));
        boxes.push_back(std::move(scene.annotation.boxes));
    }
    return build_patchwork(vignettes, boxes, cfg);
}

size_t assemble_patchwork_dataset(
    const std::vector<TargetChip>& chip_pool,
    const std::vector<ComplexRaster>& backgrounds, const PatchworkConfig& cfg,
    const SensorConfig& sensor, size_t count, uint64_t master_seed,
    const std::function<void(size_t index, PatchworkResult&&, SeedSpec)>& sink) {
    for (size_t i = 0; i < count; ++i) {
        const SeedSpec seed{master_seed, i};
        RandomStream stream = derive_stream(seed);
        sink(i, build_patchwork_scene(chip_pool, backgrounds, cfg, sensor, stream), seed);
    }
    return count;
}

}  // namespace sarforge
