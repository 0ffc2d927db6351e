#include "sarforge/sensor.hpp"

#include <algorithm>
#include <cmath>

#include "sarforge/fft.hpp"

namespace sarforge {
namespace {

// Signed frequency of DFT bin f for length n: result in [-n/2, (n-1)/2].
int signed_freq(int f, int n) { return f < (n + 1) / 2 ? f : f - n; }

// Lowest signed frequency inside a band of b bins centered on DC.
int band_lo(int b) { return -(b / 2); }

}  // namespace

int retained_band(int n, double resolution_px) {
    const int b = static_cast<int>(std::lround(n / resolution_px));
    return std::clamp(b, 1, n);
}

ComplexRaster apply_sensor_function(const ComplexRaster& img, const SensorConfig& cfg) {
    cfg.validate();
    if (img.width < 4 || img.height < 4) {
        throw ConfigError("sensor function requires an image of at least 4x4");
    }
    const int w = img.width;
    const int h = img.height;

    std::vector<std::complex<double>> buf(img.size());
    for (size_t i = 0; i < img.size(); ++i) {
        buf[i] = std::complex<double>(img.samples[i].real(), img.samples[i].imag());
    }
    fft2d(buf, w, h, false);

    const int band_rows = retained_band(h, cfg.range_resolution_px);
    const int band_cols = retained_band(w, cfg.crossrange_resolution_px);
    const std::vector<double> wrow = make_window(cfg.window, band_rows);
    const std::vector<double> wcol = make_window(cfg.window, band_cols);
    const int row_lo = band_lo(band_rows);
    const int col_lo = band_lo(band_cols);

    for (int fy = 0; fy < h; ++fy) {
        const int sy = signed_freq(fy, h);
        const int iy = sy - row_lo;
        const bool row_in = iy >= 0 && iy < band_rows;
        for (int fx = 0; fx < w; ++fx) {
            const int sx = signed_freq(fx, w);
            const int ix = sx - col_lo;
            auto& bin = buf[static_cast<size_t>(fy) * w + fx];
            if (row_in && ix >= 0 && ix < band_cols) {
                bin *= wrow[static_cast<size_t>(iy)] * wcol[static_cast<size_t>(ix)];
            } else {
                bin = 0.0;
            }
        }
    }

    fft2d(buf, w, h, true);

    ComplexRaster out;
    out.width = w;
    out.height = h;
    out.samples.resize(img.size());
    for (size_t i = 0; i < img.size(); ++i) {
        out.samples[i] = complexf(static_cast<float>(buf[i].real()),
                                  static_cast<float>(buf[i].imag()));
    }
    return out;
}

ComplexRaster add_thermal_noise(const ComplexRaster& img, double sigma,
                                RandomStream& stream) {
    if (sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
    ComplexRaster out = img;
    if (sigma == 0.0) return out;
    for (complexf& z : out.samples) {
        const double re = stream.normal() * sigma;
        const double im = stream.normal() * sigma;
        z += complexf(static_cast<float>(re), static_cast<float>(im));
    }
    return out;
}

Pgm8 quarter_power_lut(const ComplexRaster& img, double scale_percentile) {
    if (img.size() == 0) throw ConfigError("quarter-power LUT: empty image");
    if (scale_percentile <= 0.0 || scale_percentile > 100.0) {
        throw ConfigError("quarter-power LUT: percentile must be in (0, 100]");
    }
    std::vector<double> v(img.size());
    for (size_t i = 0; i < img.size(); ++i) {
        v[i] = std::sqrt(std::abs(std::complex<double>(img.samples[i].real(),
                                                       img.samples[i].imag())));
    }

    // Linear-interpolation percentile over the sorted values.
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const double pos = (sorted.size() - 1) * scale_percentile / 100.0;
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    const double scale = sorted[lo] + frac * (sorted[hi] - sorted[lo]);

    Pgm8 out = Pgm8::zeros(img.width, img.height);
    if (scale <= 0.0) return out;  // all-zero image maps to all-zero bytes
    for (size_t i = 0; i < v.size(); ++i) {
        const double mapped = std::round(v[i] / scale * 255.0);  // half away from zero
        out.pixels[i] = static_cast<uint8_t>(std::clamp(mapped, 0.0, 255.0));
    }
    return out;
}

AugmentationDraw sample_augmentation(const AugmentationConfig& cfg, RandomStream& stream) {
    cfg.validate();
    AugmentationDraw draw;
    draw.range_resolution_factor =
        stream.uniform(cfg.resolution_jitter[0], cfg.resolution_jitter[1]);
    draw.crossrange_resolution_factor =
        stream.uniform(cfg.resolution_jitter[0], cfg.resolution_jitter[1]);
    draw.noise_sigma = stream.uniform(cfg.noise_sigma_range[0], cfg.noise_sigma_range[1]);
    draw.n_targets = static_cast<int>(
        stream.uniform_int(cfg.n_targets_range[0], cfg.n_targets_range[1]));
    return draw;
}

SensorConfig apply_augmentation(const SensorConfig& base, const AugmentationDraw& draw) {
    SensorConfig cfg = base;
    cfg.range_resolution_px =
        std::max(1.0, base.range_resolution_px * draw.range_resolution_factor);
    cfg.crossrange_resolution_px =
        std::max(1.0, base.crossrange_resolution_px * draw.crossrange_resolution_factor);
    cfg.noise_sigma = draw.noise_sigma;
    return cfg;
}

}  // namespace sarforge
