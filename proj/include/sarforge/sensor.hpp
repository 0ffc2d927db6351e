#ifndef SARFORGE_SENSOR_HPP
#define SARFORGE_SENSOR_HPP

#include <array>

#include "sarforge/rng.hpp"
#include "sarforge/types.hpp"
#include "sarforge/window.hpp"

namespace sarforge {

/// Imaging-system model: band-limiting resolutions, spectral taper, and
/// thermal noise level. Resolutions are in pixels of the fixed output grid.
struct SensorConfig {
    double range_resolution_px = 1.0;       // rows (y)
    double crossrange_resolution_px = 1.0;  // columns (x)
    WindowSpec window = WindowSpec::taylor(4, 35.0);
    double noise_sigma = 0.0;  // per-component std dev of complex thermal noise

    void validate() const {
        if (range_resolution_px < 1.0 || crossrange_resolution_px < 1.0) {
            throw ConfigError("sensor: resolutions must be >= 1 pixel");
        }
        if (noise_sigma < 0.0) throw ConfigError("sensor: noise_sigma must be >= 0");
    }
};

/// Domain-randomization ranges for scene generation.
struct AugmentationConfig {
    std::array<double, 2> resolution_jitter{1.0, 1.0};  // multiplicative, per axis
    std::array<double, 2> noise_sigma_range{0.0, 0.0};
    std::array<int, 2> n_targets_range{1, 3};
    double bright_fraction = 0.01;
    double dropout_share = 0.5;
    int crop_size = 640;

    void validate() const {
        if (resolution_jitter[0] > resolution_jitter[1] ||
            noise_sigma_range[0] > noise_sigma_range[1] ||
            n_targets_range[0] > n_targets_range[1]) {
            throw ConfigError("augmentation: range lo must be <= hi");
        }
        if (resolution_jitter[0] <= 0.0 || noise_sigma_range[0] < 0.0) {
            throw ConfigError("augmentation: jitter must be positive, sigma >= 0");
        }
        if (n_targets_range[0] < 1 || n_targets_range[1] > 16) {
            throw ConfigError("augmentation: n_targets must be within [1, 16]");
        }
        if (bright_fraction <= 0.0 || bright_fraction > 1.0 || dropout_share < 0.0 ||
            dropout_share > 1.0) {
            throw ConfigError("augmentation: fractions must be in (0, 1]");
        }
        if (crop_size < 1) throw ConfigError("augmentation: crop_size must be >= 1");
    }
};

/// One concrete randomization draw.
struct AugmentationDraw {
    double range_resolution_factor = 1.0;
    double crossrange_resolution_factor = 1.0;
    double noise_sigma = 0.0;
    int n_targets = 1;
};

/// Number of spectral bins retained along one axis of length n at the given
/// resolution (central fraction 1/resolution of the bandwidth).
int retained_band(int n, double resolution_px);

/// Band-limits and apodizes the image spectrum: forward 2-D DFT, zero outside
/// the central 1/range_resolution x 1/crossrange_resolution band, multiply the
/// retained band by the separable window, inverse DFT. Grid size is unchanged.
ComplexRaster apply_sensor_function(const ComplexRaster& img, const SensorConfig& cfg);

/// Adds independent zero-mean Gaussian draws of std dev sigma to the real and
/// imaginary component of every sample, in row-major order.
ComplexRaster add_thermal_noise(const ComplexRaster& img, double sigma,
                                RandomStream& stream);

/// Display stretch v = (|z|^2)^(1/4); the scale_percentile-th percentile of v
/// maps to 255, values clipped to [0, 255], rounding half away from zero.
/// An all-zero image maps to all-zero bytes.
Pgm8 quarter_power_lut(const ComplexRaster& img, double scale_percentile = 99.5);

/// Uniform draw of each randomized parameter. Draw order: range factor,
/// cross-range factor, noise sigma, target count (endpoints inclusive).
AugmentationDraw sample_augmentation(const AugmentationConfig& cfg, RandomStream& stream);

/// Applies a draw to a base sensor config; resolutions are clamped to >= 1.
SensorConfig apply_augmentation(const SensorConfig& base, const AugmentationDraw& draw);

}  // namespace sarforge

#endif  // SARFORGE_SENSOR_HPP
