#include "sarforge/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sarforge {
namespace {

bool rects_disjoint(const BBox& a, const BBox& b) {
    return intersection_area(a, b) == 0.0;
}

BBox rect_at(int x, int y, int w, int h) {
    return BBox{static_cast<double>(x), static_cast<double>(y),
                static_cast<double>(x + w), static_cast<double>(y + h)};
}

// Shared core of the five-step pipeline. Each item contributes a shadow mask
// region and a target write (complex-add for synthetic signatures, replace
// for measured pixels).
struct OverlayItem {
    const Mask* shadow_mask = nullptr;      // labels 1/2 in chip coordinates
    const ComplexRaster* target = nullptr;  // contribution values
    const Mask* target_where = nullptr;     // if set, replace where label==1; else add all
    int x = 0;
    int y = 0;
};

ComplexRaster run_five_steps(const ComplexRaster& bg, const std::vector<OverlayItem>& items,
                             const SensorConfig& cfg, RandomStream& stream) {
    for (const OverlayItem& item : items) {
        if (item.x < 0 || item.y < 0 ||
            item.x + item.shadow_mask->width > bg.width ||
            item.y + item.shadow_mask->height > bg.height) {
            throw PlacementError("overlay: chip rectangle outside scene bounds");
        }
        if (item.target->width != item.shadow_mask->width ||
            item.target->height != item.shadow_mask->height) {
            throw ConfigError("overlay: chip image and mask dimensions differ");
        }
    }

    // Step 1: cut the background out under every shadow.
    ComplexRaster cut = bg;
    for (const OverlayItem& item : items) {
        const Mask& m = *item.shadow_mask;
        for (int cy = 0; cy < m.height; ++cy) {
            for (int cx = 0; cx < m.width; ++cx) {
                if (m.at(cx, cy) == Mask::shadow) {
                    cut.at(item.x + cx, item.y + cy) = complexf{0.0f, 0.0f};
                }
            }
        }
    }

    // Step 2: thermal noise on the cut background, then the sensor function
    // blurs the background into the overlaid shadows.
    ComplexRaster noisy = add_thermal_noise(cut, cfg.noise_sigma, stream);
    ComplexRaster blurred = apply_sensor_function(noisy, cfg);

    // Step 3: paste the noisy shadows back into the original background.
    ComplexRaster out = bg;
    for (const OverlayItem& item : items) {
        const Mask& m = *item.shadow_mask;
        for (int cy = 0; cy < m.height; ++cy) {
            for (int cx = 0; cx < m.width; ++cx) {
                if (m.at(cx, cy) == Mask::shadow) {
                    out.at(item.x + cx, item.y + cy) = blurred.at(item.x + cx, item.y + cy);
                }
            }
        }
    }

    // Step 4: add (or, for measured pixels, substitute) the targets.
    for (const OverlayItem& item : items) {
        const ComplexRaster& t = *item.target;
        for (int cy = 0; cy < t.height; ++cy) {
            for (int cx = 0; cx < t.width; ++cx) {
                if (item.target_where != nullptr) {
                    if (item.target_where->at(cx, cy) == Mask::target) {
                        out.at(item.x + cx, item.y + cy) = t.at(cx, cy);
                    }
                } else {
                    out.at(item.x + cx, item.y + cy) += t.at(cx, cy);
                }
            }
        }
    }
    // Step 5 (8-bit LUT) is the caller's: the complex scene is the product here.
    return out;
}

}  // namespace

ComplexRaster crop_background(const ComplexRaster& bg, int size, RandomStream& stream) {
    if (size < 1) throw ConfigError("crop size must be >= 1");
    if (bg.width < size || bg.height < size) {
        throw ConfigError("background smaller than requested crop");
    }
    const int x0 = static_cast<int>(stream.uniform_int(0, bg.width - size));
    const int y0 = static_cast<int>(stream.uniform_int(0, bg.height - size));
    ComplexRaster out = ComplexRaster::zeros(size, size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            out.at(x, y) = bg.at(x0 + x, y0 + y);
        }
    }
    return out;
}

TargetChip dropout_bright_points(const TargetChip& chip, double bright_fraction,
                                 double dropout_share, RandomStream& stream) {
    if (bright_fraction <= 0.0 || bright_fraction > 1.0) {
        throw ConfigError("bright_fraction must be in (0, 1]");
    }
    if (dropout_share < 0.0 || dropout_share > 1.0) {
        throw ConfigError("dropout_share must be in [0, 1]");
    }
    TargetChip out = chip;
    if (dropout_share == 0.0) return out;

    std::vector<size_t> nonzero;
    nonzero.reserve(out.signature.size());
    for (size_t i = 0; i < out.signature.size(); ++i) {
        if (std::abs(out.signature.samples[i]) > 0.0f) nonzero.push_back(i);
    }
    if (nonzero.empty()) throw ConfigError("dropout: chip has no nonzero pixels");

    const size_t wanted = static_cast<size_t>(
        std::ceil(bright_fraction * static_cast<double>(nonzero.size())));
    const size_t bright_count = std::min(nonzero.size(), std::max<size_t>(8, wanted));

    // Top bright_count by magnitude, ties broken by row-major index.
    std::partial_sort(nonzero.begin(), nonzero.begin() + static_cast<long>(bright_count),
                      nonzero.end(), [&](size_t a, size_t b) {
                          const float ma = std::abs(out.signature.samples[a]);
                          const float mb = std::abs(out.signature.samples[b]);
                          if (ma != mb) return ma > mb;
                          return a < b;
                      });
    nonzero.resize(bright_count);

    const size_t drop = static_cast<size_t>(
        std::ceil(dropout_share * static_cast<double>(bright_count)));
    // Partial Fisher-Yates: the first `drop` entries are a uniform subset.
    for (size_t i = 0; i < drop; ++i) {
        const size_t j = static_cast<size_t>(
            stream.uniform_int(static_cast<int64_t>(i),
                               static_cast<int64_t>(bright_count - 1)));
        std::swap(nonzero[i], nonzero[j]);
        out.signature.samples[nonzero[i]] = complexf{0.0f, 0.0f};
    }
    return out;
}

std::vector<Placement> place_targets(int scene_width, int scene_height,
                                     const std::vector<const TargetChip*>& chips,
                                     RandomStream& stream, int max_attempts) {
    if (chips.empty()) throw ConfigError("place_targets: need >= 1 chip");
    std::vector<Placement> placements;
    placements.reserve(chips.size());
    for (size_t i = 0; i < chips.size(); ++i) {
        const int cw = chips[i]->signature.width;
        const int ch = chips[i]->signature.height;
        if (cw > scene_width || ch > scene_height) {
            throw ConfigError("place_targets: chip larger than scene");
        }
        bool placed = false;
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            const int x = static_cast<int>(stream.uniform_int(0, scene_width - cw));
            const int y = static_cast<int>(stream.uniform_int(0, scene_height - ch));
            const BBox rect = rect_at(x, y, cw, ch);
            const bool clear = std::all_of(
                placements.begin(), placements.end(),
                [&](const Placement& p) { return rects_disjoint(p.chip_rect, rect); });
            if (clear) {
                placements.push_back(Placement{static_cast<int>(i), x, y, rect});
                placed = true;
                break;
            }
        }
        if (!placed) {
            throw PlacementError("could not place chip " + std::to_string(i) + " after " +
                                 std::to_string(max_attempts) + " attempts");
        }
    }
    return placements;
}

OverlayResult overlay_scene(const ComplexRaster& bg_crop,
                            const std::vector<const TargetChip*>& chips,
                            const std::vector<Placement>& placements,
                            const SensorConfig& cfg, RandomStream& stream,
                            const std::string& role) {
    cfg.validate();
    OverlayResult result;
    result.annotation.sensor = cfg;
    if (placements.empty()) {
        result.scene = bg_crop;
        return result;
    }

    // Band-limit each signature before insertion (step 4 preparation).
    std::vector<ComplexRaster> filtered;
    filtered.reserve(placements.size());
    std::vector<OverlayItem> items;
    items.reserve(placements.size());
    for (const Placement& p : placements) {
        const TargetChip& chip = *chips.at(static_cast<size_t>(p.chip_index));
        chip.validate();
        filtered.push_back(apply_sensor_function(chip.signature, cfg));
    }
    for (size_t i = 0; i < placements.size(); ++i) {
        const Placement& p = placements[i];
        const TargetChip& chip = *chips.at(static_cast<size_t>(p.chip_index));
        items.push_back(OverlayItem{&chip.shadow_mask, &filtered[i], nullptr, p.x, p.y});
    }
    result.scene = run_five_steps(bg_crop, items, cfg, stream);

    for (const Placement& p : placements) {
        const TargetChip& chip = *chips.at(static_cast<size_t>(p.chip_index));
        BBox box = compute_bbox(chip);
        box.x_min += p.x;
        box.x_max += p.x;
        box.y_min += p.y;
        box.y_max += p.y;
        result.annotation.boxes.push_back(AnnotatedBox{box, chip.class_name, role});
    }
    return result;
}

BBox compute_bbox(const ComplexRaster& signature, double threshold_ratio) {
    float peak = 0.0f;
    for (const complexf& z : signature.samples) peak = std::max(peak, std::abs(z));
    if (peak <= 0.0f) throw AnnotationError("compute_bbox: empty target support");
    const float threshold = static_cast<float>(threshold_ratio) * peak;

    int x_min = signature.width;
    int y_min = signature.height;
    int x_max = -1;
    int y_max = -1;
    for (int y = 0; y < signature.height; ++y) {
        for (int x = 0; x < signature.width; ++x) {
            if (std::abs(signature.at(x, y)) >= threshold) {
                x_min = std::min(x_min, x);
                y_min = std::min(y_min, y);
                x_max = std::max(x_max, x);
                y_max = std::max(y_max, y);
            }
        }
    }
    return BBox{static_cast<double>(x_min), static_cast<double>(y_min),
                static_cast<double>(x_max + 1), static_cast<double>(y_max + 1)};
}

BBox compute_bbox(const TargetChip& chip, double threshold_ratio) {
    return compute_bbox(chip.signature, threshold_ratio);
}

MeasuredOverlayResult overlay_measured_scene(const ComplexRaster& bg,
                                             const std::vector<MeasuredChipRef>& chips,
                                             const SensorConfig& cfg,
                                             RandomStream& stream) {
    cfg.validate();
    MeasuredOverlayResult result;
    std::vector<OverlayItem> items;
    items.reserve(chips.size());
    for (const MeasuredChipRef& c : chips) {
        if (c.image->width != c.segmentation->width ||
            c.image->height != c.segmentation->height) {
            throw ConfigError("measured chip: image and segmentation dimensions differ");
        }
        items.push_back(OverlayItem{c.segmentation, c.image, c.segmentation, c.x, c.y});
    }
    if (items.empty()) {
        result.scene = bg;
        return result;
    }
    result.scene = run_five_steps(bg, items, cfg, stream);

    for (const MeasuredChipRef& c : chips) {
        int x_min = c.segmentation->width;
        int y_min = c.segmentation->height;
        int x_max = -1;
        int y_max = -1;
        for (int y = 0; y < c.segmentation->height; ++y) {
            for (int x = 0; x < c.segmentation->width; ++x) {
                if (c.segmentation->at(x, y) == Mask::target) {
                    x_min = std::min(x_min, x);
                    y_min = std::min(y_min, y);
                    x_max = std::max(x_max, x);
                    y_max = std::max(y_max, y);
                }
            }
        }
        if (x_max < 0) continue;  // shadow-only contribution, nothing to label
        result.boxes.push_back(BBox{static_cast<double>(c.x + x_min),
                                    static_cast<double>(c.y + y_min),
                                    static_cast<double>(c.x + x_max + 1),
                                    static_cast<double>(c.y + y_max + 1)});
    }
    return result;
}

MeasuredChipResult overlay_measured_chip(const ComplexRaster& chip_img, const Mask& seg,
                                         const ComplexRaster& bg, int origin_x,
                                         int origin_y, const SensorConfig& cfg,
                                         RandomStream& stream) {
    bool has_target = false;
    for (uint8_t v : seg.labels) {
        if (v == Mask::target) {
            has_target = true;
            break;
        }
    }
    if (!has_target) throw AnnotationError("measured chip: no target-labeled pixels");

    MeasuredOverlayResult scene = overlay_measured_scene(
        bg, {MeasuredChipRef{&chip_img, &seg, origin_x, origin_y}}, cfg, stream);
    return MeasuredChipResult{std::move(scene.scene), scene.boxes.at(0)};
}

}  // namespace sarforge
