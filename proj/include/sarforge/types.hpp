#ifndef SARFORGE_TYPES_HPP
#define SARFORGE_TYPES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sarforge/errors.hpp"

namespace sarforge {

using complexf = std::complex<float>;

/// Complex-valued SAR image (scene, chip, or clutter). Row-major, origin
/// top-left, x = column (cross-range), y = row (range).
struct ComplexRaster {
    int width = 0;
    int height = 0;
    std::vector<complexf> samples;

    static ComplexRaster zeros(int width, int height) {
        ComplexRaster r;
        r.width = width;
        r.height = height;
        r.samples.assign(static_cast<size_t>(width) * height, complexf{0.0f, 0.0f});
        return r;
    }

    size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
    complexf& at(int x, int y) { return samples[index(x, y)]; }
    const complexf& at(int x, int y) const { return samples[index(x, y)]; }
    size_t size() const { return samples.size(); }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    bool dims_consistent() const {
        return width >= 0 && height >= 0 &&
               samples.size() == static_cast<size_t>(width) * height;
    }

    bool all_finite() const {
        for (const complexf& z : samples) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
        return true;
    }
};

/// 3-class label image: 0 = background, 1 = target, 2 = shadow.
struct Mask {
    static constexpr uint8_t background = 0;
    static constexpr uint8_t target = 1;
    static constexpr uint8_t shadow = 2;

    int width = 0;
    int height = 0;
    std::vector<uint8_t> labels;

    static Mask zeros(int width, int height) {
        Mask m;
        m.width = width;
        m.height = height;
        m.labels.assign(static_cast<size_t>(width) * height, background);
        return m;
    }

    size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
    uint8_t& at(int x, int y) { return labels[index(x, y)]; }
    uint8_t at(int x, int y) const { return labels[index(x, y)]; }
    size_t size() const { return labels.size(); }

    bool labels_valid() const {
        return std::all_of(labels.begin(), labels.end(),
                           [](uint8_t v) { return v <= shadow; });
    }
};

/// 8-bit grayscale image (quarter-power LUT output, PGM payload).
struct Pgm8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;

    static Pgm8 zeros(int width, int height) {
        Pgm8 img;
        img.width = width;
        img.height = height;
        img.pixels.assign(static_cast<size_t>(width) * height, 0);
        return img;
    }

    size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
    uint8_t& at(int x, int y) { return pixels[index(x, y)]; }
    uint8_t at(int x, int y) const { return pixels[index(x, y)]; }
};

/// Axis-aligned box, half-open convention [x_min, x_max) x [y_min, y_max).
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    bool valid() const {
        return x_min >= 0.0 && y_min >= 0.0 && x_min < x_max && y_min < y_max;
    }
    bool contains(const BBox& inner) const {
        return inner.x_min >= x_min && inner.y_min >= y_min &&
               inner.x_max <= x_max && inner.y_max <= y_max;
    }
};

inline double intersection_area(const BBox& a, const BBox& b) {
    const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

/// Paired target signature and shadow mask with pose metadata.
struct TargetChip {
    ComplexRaster signature;
    Mask shadow_mask;
    std::string class_name;
    double azimuth_deg = 0.0;     // in [0, 360)
    double depression_deg = 0.0;

    void validate() const {
        if (signature.width != shadow_mask.width || signature.height != shadow_mask.height) {
            throw ConfigError("target chip: signature and shadow mask dimensions differ");
        }
    }
};

/// Reproducibility contract: a derived stream is a pure function of
/// (master_seed, stream_index), so work units can run in any order.
struct SeedSpec {
    uint64_t master_seed = 0;
    uint64_t stream_index = 0;
};

}  // namespace sarforge

#endif  // SARFORGE_TYPES_HPP
