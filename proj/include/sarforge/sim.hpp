#ifndef SARFORGE_SIM_HPP
#define SARFORGE_SIM_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sarforge/rng.hpp"
#include "sarforge/sensor.hpp"
#include "sarforge/types.hpp"

namespace sarforge {

struct Scatterer {
    double x = 0.0;  // column, pixels
    double y = 0.0;  // row, pixels
    double amplitude = 1.0;
    double phase = 0.0;  // radians
};

/// Point-scattering-center description of one object: scatterers, a ground
/// footprint polygon, and an equivalent shadow length in range pixels.
struct ScattererSet {
    std::vector<Scatterer> scatterers;
    std::vector<std::array<double, 2>> footprint_polygon;  // (x, y) vertices
    double height_px = 0.0;
};

/// Stand-in clutter statistics: K-distributed (Gamma texture times speckle).
struct ClutterConfig {
    double mean_intensity = 1.0;
    double texture_shape = 1e9;   // Gamma shape; large values approach pure speckle
    double correlation_px = 0.0;  // box-smoothing width for the texture field

    void validate() const {
        if (mean_intensity <= 0.0) throw ConfigError("clutter: mean_intensity must be > 0");
        if (texture_shape <= 0.0) throw ConfigError("clutter: texture_shape must be > 0");
        if (correlation_px < 0.0) throw ConfigError("clutter: correlation_px must be >= 0");
    }
};

/// Rotates scatterer positions and footprint about (center, center) by
/// azimuth_deg (normalized to [0, 360); 0 is an exact identity).
ScattererSet rotate_scatterer_set(const ScattererSet& set, double azimuth_deg,
                                  double center);

double polygon_area(const std::vector<std::array<double, 2>>& polygon);
bool point_in_polygon(double x, double y,
                      const std::vector<std::array<double, 2>>& polygon);

/// Band-limited synthesis of a complex signature from scattering centers:
/// each scatterer contributes a_i e^{j phi_i} e^{-j2pi(kx x_i + ky y_i)/N}
/// over the retained spectral band, apodized per the sensor window, then
/// inverse-transformed onto the chip grid.
ComplexRaster synthesize_signature(const ScattererSet& set, int chip_size,
                                   const SensorConfig& cfg);

/// Geometric shadow model: footprint pixels get label 1 (target); pixels
/// reached by sweeping the footprint down-range (+y) by height_px get
/// label 2 (shadow). azimuth_deg rotates the footprint about the chip center.
Mask synthesize_shadow_mask(const ScattererSet& set, int chip_size,
                            double azimuth_deg = 0.0);

/// K-distributed clutter field with E[|z|^2] = mean_intensity. Texture draws
/// precede speckle draws, both row-major.
ComplexRaster synthesize_clutter(int width, int height, const ClutterConfig& cfg,
                                 RandomStream& stream);

struct TargetTemplate {
    std::string class_name;
    ScattererSet geometry;  // height_px is the physical height in pixels
};

/// Angular sampling grid for a chip library. Full circle: azimuths i*step for
/// i in [0, 360/step). Sector [start, stop]: both endpoints included.
struct ChipGridSpec {
    double azimuth_step_deg = 0.5;
    std::vector<double> depressions_deg{15.0, 16.0, 17.0};
    std::optional<std::array<double, 2>> azimuth_sector_deg;  // inclusive

    std::vector<double> azimuths() const;
};

/// Generates one chip per (class, azimuth, depression), class-major. The
/// template's footprint is rotated per azimuth; shadow length is
/// height_px / tan(depression). Returns the chip count fed to the sink.
size_t generate_chip_library(const std::vector<TargetTemplate>& templates,
                             const ChipGridSpec& grid, int chip_size,
                             const SensorConfig& cfg,
                             const std::function<void(TargetChip&&)>& sink);

enum class TemplateStyle { vehicle, tree, house };

/// Deterministic procedural object template derived from (seed, class name).
TargetTemplate make_procedural_template(const std::string& class_name, uint64_t seed,
                                        int chip_size,
                                        TemplateStyle style = TemplateStyle::vehicle);

}  // namespace sarforge

#endif  // SARFORGE_SIM_HPP
