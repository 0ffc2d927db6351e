#include "sarforge/detect.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace sarforge {
namespace {

// Summed-area table; sat[(y+1)*(w+1) + (x+1)] = sum over [0..x] x [0..y].
std::vector<double> build_sat(const std::vector<double>& v, int w, int h) {
    std::vector<double> sat(static_cast<size_t>(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double row = 0.0;
        for (int x = 0; x < w; ++x) {
            row += v[static_cast<size_t>(y) * w + x];
            sat[static_cast<size_t>(y + 1) * (w + 1) + (x + 1)] =
                sat[static_cast<size_t>(y) * (w + 1) + (x + 1)] + row;
        }
    }
    return sat;
}

// Sum and cell count of the clipped box [x-r, x+r] x [y-r, y+r].
std::pair<double, int> box_sum(const std::vector<double>& sat, int w, int h, int x,
                               int y, int r) {
    const int x0 = std::max(0, x - r);
    const int y0 = std::max(0, y - r);
    const int x1 = std::min(w - 1, x + r);
    const int y1 = std::min(h - 1, y + r);
    const size_t stride = static_cast<size_t>(w) + 1;
    const double s = sat[static_cast<size_t>(y1 + 1) * stride + (x1 + 1)] -
                     sat[static_cast<size_t>(y0) * stride + (x1 + 1)] -
                     sat[static_cast<size_t>(y1 + 1) * stride + (x0)] +
                     sat[static_cast<size_t>(y0) * stride + (x0)];
    return {s, (x1 - x0 + 1) * (y1 - y0 + 1)};
}

// Chebyshev-ball dilation / erosion via running box maxima over the binary map.
std::vector<uint8_t> morph_square(const std::vector<uint8_t>& in, int w, int h, int r,
                                  bool dilate) {
    if (r <= 0) return in;
    std::vector<uint8_t> tmp(in.size());
    std::vector<uint8_t> out(in.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t v = dilate ? 0 : 1;
            for (int dx = -r; dx <= r; ++dx) {
                const int xx = x + dx;
                // Outside the image counts as empty.
                const uint8_t s =
                    (xx >= 0 && xx < w) ? in[static_cast<size_t>(y) * w + xx] : 0;
                v = dilate ? std::max(v, s) : std::min(v, s);
            }
            tmp[static_cast<size_t>(y) * w + x] = v;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            uint8_t v = dilate ? 0 : 1;
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = y + dy;
                const uint8_t s =
                    (yy >= 0 && yy < h) ? tmp[static_cast<size_t>(yy) * w + x] : 0;
                v = dilate ? std::max(v, s) : std::min(v, s);
            }
            out[static_cast<size_t>(y) * w + x] = v;
        }
    }
    return out;
}

std::vector<Prediction> detect_on_intensity(const std::vector<double>& intensity,
                                            int w, int h, const CfarConfig& cfg,
                                            const std::string& scene_id) {
    cfg.validate();
    const int reach = cfg.guard_px + cfg.train_px;
    if (w <= 2 * reach + 1 || h <= 2 * reach + 1) {
        throw ConfigError("cfar: scene smaller than the training window");
    }

    const std::vector<double> sat = build_sat(intensity, w, h);
    std::vector<uint8_t> flags(intensity.size(), 0);
    std::vector<double> exceedance(intensity.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto [outer_sum, outer_n] = box_sum(sat, w, h, x, y, reach);
            const auto [inner_sum, inner_n] = box_sum(sat, w, h, x, y, cfg.guard_px);
            const double train_sum = outer_sum - inner_sum;
            const int train_n = outer_n - inner_n;
            const double mean = train_n > 0 ? train_sum / train_n : 0.0;
            const double level = cfg.threshold_factor * mean;
            const size_t i = static_cast<size_t>(y) * w + x;
            if (level > 0.0) {
                exceedance[i] = intensity[i] / level;
            } else {
                exceedance[i] = intensity[i] > 0.0 ? 2.0 : 0.0;
            }
            flags[i] = intensity[i] > level && intensity[i] > 0.0 ? 1 : 0;
        }
    }

    // Bridge scatterer gaps within one object, then group.
    std::vector<uint8_t> closed =
        morph_square(morph_square(flags, w, h, cfg.merge_gap_px, true), w, h,
                     cfg.merge_gap_px, false);

    std::vector<Prediction> detections;
    std::vector<uint8_t> seen(closed.size(), 0);
    std::deque<std::pair<int, int>> queue;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            const size_t si = static_cast<size_t>(sy) * w + sx;
            if (closed[si] == 0 || seen[si] != 0) continue;
            int x_min = sx;
            int x_max = sx;
            int y_min = sy;
            int y_max = sy;
            int area = 0;
            double peak = 0.0;
            seen[si] = 1;
            queue.emplace_back(sx, sy);
            while (!queue.empty()) {
                const auto [cx, cy] = queue.front();
                queue.pop_front();
                ++area;
                x_min = std::min(x_min, cx);
                x_max = std::max(x_max, cx);
                y_min = std::min(y_min, cy);
                y_max = std::max(y_max, cy);
                peak = std::max(peak, exceedance[static_cast<size_t>(cy) * w + cx]);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const size_t ni = static_cast<size_t>(ny) * w + nx;
                        if (closed[ni] != 0 && seen[ni] == 0) {
                            seen[ni] = 1;
                            queue.emplace_back(nx, ny);
                        }
                    }
                }
            }
            if (area < cfg.min_area_px) continue;
            Prediction p;
            p.scene_id = scene_id;
            p.box = BBox{static_cast<double>(x_min), static_cast<double>(y_min),
                         static_cast<double>(x_max + 1), static_cast<double>(y_max + 1)};
            p.confidence = std::clamp(1.0 - std::exp(-(peak - 1.0)), 0.0, 1.0);
            detections.push_back(std::move(p));
        }
    }
    return detections;
}

}  // namespace

std::vector<uint8_t> cfar_flag_map(const std::vector<double>& intensity, int width,
                                   int height, const CfarConfig& cfg) {
    cfg.validate();
    if (intensity.size() != static_cast<size_t>(width) * height) {
        throw ConfigError("cfar_flag_map: buffer does not match dimensions");
    }
    const int reach = cfg.guard_px + cfg.train_px;
    if (width <= 2 * reach + 1 || height <= 2 * reach + 1) {
        throw ConfigError("cfar: scene smaller than the training window");
    }
    const std::vector<double> sat = build_sat(intensity, width, height);
    std::vector<uint8_t> flags(intensity.size(), 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const auto [outer_sum, outer_n] = box_sum(sat, width, height, x, y, reach);
            const auto [inner_sum, inner_n] = box_sum(sat, width, height, x, y, cfg.guard_px);
            const double mean =
                (outer_n - inner_n) > 0 ? (outer_sum - inner_sum) / (outer_n - inner_n) : 0.0;
            const size_t i = static_cast<size_t>(y) * width + x;
            flags[i] =
                intensity[i] > cfg.threshold_factor * mean && intensity[i] > 0.0 ? 1 : 0;
        }
    }
    return flags;
}

std::vector<Prediction> cfar_detect(const ComplexRaster& scene, const CfarConfig& cfg,
                                    const std::string& scene_id) {
    std::vector<double> intensity(scene.size());
    for (size_t i = 0; i < scene.size(); ++i) {
        const double re = scene.samples[i].real();
        const double im = scene.samples[i].imag();
        intensity[i] = re * re + im * im;
    }
    return detect_on_intensity(intensity, scene.width, scene.height, cfg, scene_id);
}

std::vector<Prediction> cfar_detect(const Pgm8& image, const CfarConfig& cfg,
                                    const std::string& scene_id) {
    std::vector<double> intensity(image.pixels.size());
    for (size_t i = 0; i < image.pixels.size(); ++i) {
        const double v = image.pixels[i];
        intensity[i] = v * v * v * v;
    }
    return detect_on_intensity(intensity, image.width, image.height, cfg, scene_id);
}

}  // namespace sarforge
