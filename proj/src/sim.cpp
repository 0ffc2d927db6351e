#include "sarforge/sim.hpp"

#include <algorithm>
#include <cmath>

#include "sarforge/fft.hpp"
#include "sarforge/hash.hpp"

namespace sarforge {
namespace {

constexpr double kPi = 3.14159265358979323846;

int signed_freq_lo(int band) { return -(band / 2); }

void validate_set(const ScattererSet& set, int chip_size) {
    if (set.scatterers.empty()) throw ConfigError("scatterer set is empty");
    for (const Scatterer& s : set.scatterers) {
        if (s.x < 0.0 || s.x >= chip_size || s.y < 0.0 || s.y >= chip_size) {
            throw ConfigError("scatterer outside chip bounds");
        }
        if (s.amplitude < 0.0) throw ConfigError("scatterer amplitude must be >= 0");
    }
}

// Proper segment intersection test for the polygon simplicity check.
bool segments_cross(const std::array<double, 2>& a, const std::array<double, 2>& b,
                    const std::array<double, 2>& c, const std::array<double, 2>& d) {
    auto orient = [](const std::array<double, 2>& p, const std::array<double, 2>& q,
                     const std::array<double, 2>& r) {
        const double v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
        return (v > 0.0) - (v < 0.0);
    };
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

void validate_polygon(const std::vector<std::array<double, 2>>& poly) {
    if (poly.size() < 3) throw ConfigError("footprint polygon needs >= 3 vertices");
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // Skip adjacent edges (shared endpoint).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
                throw ConfigError("footprint polygon is self-intersecting");
            }
        }
    }
}

}  // namespace

double polygon_area(const std::vector<std::array<double, 2>>& polygon) {
    double twice = 0.0;
    const size_t n = polygon.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& p = polygon[i];
        const auto& q = polygon[(i + 1) % n];
        twice += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(twice);
}

bool point_in_polygon(double x, double y,
                      const std::vector<std::array<double, 2>>& polygon) {
    // Even-odd crossing rule.
    bool inside = false;
    const size_t n = polygon.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const double xi = polygon[i][0];
        const double yi = polygon[i][1];
        const double xj = polygon[j][0];
        const double yj = polygon[j][1];
        if ((yi > y) != (yj > y)) {
            const double cross_x = xj + (y - yj) / (yi - yj) * (xi - xj);
            if (x < cross_x) inside = !inside;
        }
    }
    return inside;
}

ScattererSet rotate_scatterer_set(const ScattererSet& set, double azimuth_deg,
                                  double center) {
    double az = std::fmod(azimuth_deg, 360.0);
    if (az < 0.0) az += 360.0;
    ScattererSet out = set;
    if (az == 0.0) return out;  // exact identity, bit-for-bit

    const double rad = az * kPi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    auto rot = [&](double& x, double& y) {
        const double dx = x - center;
        const double dy = y - center;
        x = center + dx * c - dy * s;
        y = center + dx * s + dy * c;
    };
    for (Scatterer& p : out.scatterers) rot(p.x, p.y);
    for (auto& v : out.footprint_polygon) rot(v[0], v[1]);
    return out;
}

ComplexRaster synthesize_signature(const ScattererSet& set, int chip_size,
                                   const SensorConfig& cfg) {
    cfg.validate();
    if (chip_size < 16) throw ConfigError("chip_size must be >= 16");
    validate_set(set, chip_size);

    const int n = chip_size;
    const int band_rows = retained_band(n, cfg.range_resolution_px);
    const int band_cols = retained_band(n, cfg.crossrange_resolution_px);
    const int row_lo = signed_freq_lo(band_rows);
    const int col_lo = signed_freq_lo(band_cols);
    const std::vector<double> wrow = make_window(cfg.window, band_rows);
    const std::vector<double> wcol = make_window(cfg.window, band_cols);

    // Accumulate the band spectrum as a sum of separable rank-1 terms.
    std::vector<std::complex<double>> band(static_cast<size_t>(band_rows) * band_cols,
                                           0.0);
    std::vector<std::complex<double>> ey(band_rows);
    std::vector<std::complex<double>> ex(band_cols);
    for (const Scatterer& p : set.scatterers) {
        const std::complex<double> c0 =
            p.amplitude * std::exp(std::complex<double>(0.0, p.phase));
        for (int iy = 0; iy < band_rows; ++iy) {
            const double arg = -2.0 * kPi * (row_lo + iy) * p.y / n;
            ey[iy] = std::exp(std::complex<double>(0.0, arg));
        }
        for (int ix = 0; ix < band_cols; ++ix) {
            const double arg = -2.0 * kPi * (col_lo + ix) * p.x / n;
            ex[ix] = c0 * std::exp(std::complex<double>(0.0, arg));
        }
        for (int iy = 0; iy < band_rows; ++iy) {
            std::complex<double>* row = band.data() + static_cast<size_t>(iy) * band_cols;
            for (int ix = 0; ix < band_cols; ++ix) row[ix] += ey[iy] * ex[ix];
        }
    }

    // Apodize and scatter into the full spectrum at wrapped bin indices.
    std::vector<std::complex<double>> spectrum(static_cast<size_t>(n) * n, 0.0);
    for (int iy = 0; iy < band_rows; ++iy) {
        const int fy = ((row_lo + iy) % n + n) % n;
        for (int ix = 0; ix < band_cols; ++ix) {
            const int fx = ((col_lo + ix) % n + n) % n;
            spectrum[static_cast<size_t>(fy) * n + fx] =
                band[static_cast<size_t>(iy) * band_cols + ix] * wrow[iy] * wcol[ix];
        }
    }
    fft2d(spectrum, n, n, true);

    ComplexRaster out;
    out.width = n;
    out.height = n;
    out.samples.resize(spectrum.size());
    for (size_t i = 0; i < spectrum.size(); ++i) {
        out.samples[i] = complexf(static_cast<float>(spectrum[i].real()),
                                  static_cast<float>(spectrum[i].imag()));
    }
    return out;
}

Mask synthesize_shadow_mask(const ScattererSet& set, int chip_size,
                            double azimuth_deg) {
    if (chip_size < 1) throw ConfigError("chip_size must be >= 1");
    if (set.height_px < 0.0) throw ConfigError("height_px must be >= 0");
    const ScattererSet rotated =
        rotate_scatterer_set(set, azimuth_deg, 0.5 * chip_size);
    validate_polygon(rotated.footprint_polygon);
    if (polygon_area(rotated.footprint_polygon) < 1.0) {
        throw ConfigError("footprint polygon area below 1 px^2");
    }

    Mask mask = Mask::zeros(chip_size, chip_size);
    const int sweep = static_cast<int>(std::lround(set.height_px));
    for (int y = 0; y < chip_size; ++y) {
        for (int x = 0; x < chip_size; ++x) {
            if (point_in_polygon(x, y, rotated.footprint_polygon)) {
                mask.at(x, y) = Mask::target;
            }
        }
    }
    // Shadow: pixels whose up-range neighbors within the sweep lie in the
    // footprint, excluding the footprint itself.
    for (int y = 0; y < chip_size; ++y) {
        for (int x = 0; x < chip_size; ++x) {
            if (mask.at(x, y) == Mask::target) continue;
            for (int dy = 1; dy <= sweep; ++dy) {
                const int yy = y - dy;
                if (yy < 0) break;
                if (mask.at(x, yy) == Mask::target) {
                    mask.at(x, y) = Mask::shadow;
                    break;
                }
            }
        }
    }
    return mask;
}

ComplexRaster synthesize_clutter(int width, int height, const ClutterConfig& cfg,
                                 RandomStream& stream) {
    cfg.validate();
    if (width < 64 || height < 64) {
        throw ConfigError("clutter field must be at least 64x64");
    }
    const size_t n = static_cast<size_t>(width) * height;

    // Gamma texture, mean = mean_intensity.
    const double scale = cfg.mean_intensity / cfg.texture_shape;
    std::vector<double> texture(n);
    for (double& t : texture) t = stream.gamma(cfg.texture_shape) * scale;

    // Periodic separable box smoothing; preserves the texture mean exactly.
    const int k = std::min(static_cast<int>(std::lround(cfg.correlation_px)),
                           std::min(width, height));
    if (k >= 2) {
        std::vector<double> tmp(n);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double acc = 0.0;
                for (int j = 0; j < k; ++j) {
                    const int xx = (x + j - k / 2 + width * 2) % width;
                    acc += texture[static_cast<size_t>(y) * width + xx];
                }
                tmp[static_cast<size_t>(y) * width + x] = acc / k;
            }
        }
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double acc = 0.0;
                for (int j = 0; j < k; ++j) {
                    const int yy = (y + j - k / 2 + height * 2) % height;
                    acc += tmp[static_cast<size_t>(yy) * width + x];
                }
                texture[static_cast<size_t>(y) * width + x] = acc / k;
            }
        }
    }

    // Unit-mean-intensity circular Gaussian speckle.
    ComplexRaster out = ComplexRaster::zeros(width, height);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (size_t i = 0; i < n; ++i) {
        const double amp = std::sqrt(texture[i]);
        const double re = stream.normal() * inv_sqrt2;
        const double im = stream.normal() * inv_sqrt2;
        out.samples[i] = complexf(static_cast<float>(amp * re),
                                  static_cast<float>(amp * im));
    }
    return out;
}

std::vector<double> ChipGridSpec::azimuths() const {
    if (azimuth_step_deg <= 0.0) throw ConfigError("azimuth step must be > 0");
    std::vector<double> result;
    if (azimuth_sector_deg) {
        const double start = (*azimuth_sector_deg)[0];
        const double stop = (*azimuth_sector_deg)[1];
        if (stop < start) throw ConfigError("azimuth sector is reversed");
        const int count =
            static_cast<int>(std::floor((stop - start) / azimuth_step_deg + 1e-9)) + 1;
        result.reserve(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) result.push_back(start + i * azimuth_step_deg);
    } else {
        const double steps = 360.0 / azimuth_step_deg;
        const int count = static_cast<int>(std::lround(steps));
        if (std::abs(steps - count) > 1e-6) {
            throw ConfigError("360 must be divisible by the azimuth step");
        }
        result.reserve(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) result.push_back(i * azimuth_step_deg);
    }
    return result;
}

size_t generate_chip_library(const std::vector<TargetTemplate>& templates,
                             const ChipGridSpec& grid, int chip_size,
                             const SensorConfig& cfg,
                             const std::function<void(TargetChip&&)>& sink) {
    if (templates.empty()) throw ConfigError("chip library needs >= 1 template");
    if (grid.depressions_deg.empty()) throw ConfigError("chip library needs >= 1 depression");
    const std::vector<double> azimuths = grid.azimuths();
    const double center = 0.5 * chip_size;

    size_t count = 0;
    for (const TargetTemplate& tpl : templates) {
        for (const double az : azimuths) {
            const ScattererSet rotated = rotate_scatterer_set(tpl.geometry, az, center);
            for (const double depression : grid.depressions_deg) {
                if (depression <= 0.0 || depression >= 90.0) {
                    throw ConfigError("depression must be in (0, 90) degrees");
                }
                ScattererSet posed = rotated;
                posed.height_px =
                    tpl.geometry.height_px / std::tan(depression * kPi / 180.0);
                TargetChip chip;
                chip.signature = synthesize_signature(posed, chip_size, cfg);
                chip.shadow_mask = synthesize_shadow_mask(posed, chip_size, 0.0);
                chip.class_name = tpl.class_name;
                chip.azimuth_deg = std::fmod(az, 360.0);
                chip.depression_deg = depression;
                sink(std::move(chip));
                ++count;
            }
        }
    }
    return count;
}

TargetTemplate make_procedural_template(const std::string& class_name, uint64_t seed,
                                        int chip_size, TemplateStyle style) {
    if (chip_size < 16) throw ConfigError("chip_size must be >= 16");
    Fnv1a64 name_hash;
    name_hash.update(class_name);
    RandomStream stream(SeedSpec{seed, name_hash.digest()});

    const double center = 0.5 * chip_size;
    const double unit = chip_size / 128.0;  // geometry authored at 128 px scale

    TargetTemplate tpl;
    tpl.class_name = class_name;
    ScattererSet& geo = tpl.geometry;

    // Footprint: jittered ellipse, star-shaped so it is always simple.
    double half_len = 0.0;
    double half_wid = 0.0;
    int n_scatterers = 0;
    switch (style) {
        case TemplateStyle::vehicle:
            half_len = stream.uniform(8.0, 14.0) * unit;
            half_wid = stream.uniform(5.0, 9.0) * unit;
            n_scatterers = static_cast<int>(stream.uniform_int(5, 30));
            geo.height_px = stream.uniform(5.0, 12.0) * unit;
            break;
        case TemplateStyle::tree:
            half_len = stream.uniform(3.0, 5.0) * unit;
            half_wid = stream.uniform(3.0, 5.0) * unit;
            n_scatterers = static_cast<int>(stream.uniform_int(3, 6));
            geo.height_px = stream.uniform(14.0, 20.0) * unit;
            break;
        case TemplateStyle::house:
            half_len = stream.uniform(10.0, 16.0) * unit;
            half_wid = stream.uniform(8.0, 12.0) * unit;
            n_scatterers = static_cast<int>(stream.uniform_int(8, 14));
            geo.height_px = stream.uniform(8.0, 14.0) * unit;
            break;
    }
    const double orientation = stream.uniform(0.0, 2.0 * kPi);
    const double co = std::cos(orientation);
    const double so = std::sin(orientation);
    const int n_vertices = 12;
    for (int k = 0; k < n_vertices; ++k) {
        const double phi = 2.0 * kPi * k / n_vertices;
        const double jitter = stream.uniform(0.85, 1.0);
        const double ex = half_len * jitter * std::cos(phi);
        const double ey = half_wid * jitter * std::sin(phi);
        geo.footprint_polygon.push_back(
            {center + ex * co - ey * so, center + ex * so + ey * co});
    }

    // Scattering centers inside the footprint. Houses get a few bright
    // corner-like returns; trees stay dim.
    const auto& poly = geo.footprint_polygon;
    for (int i = 0; i < n_scatterers; ++i) {
        Scatterer s;
        do {
            s.x = center + stream.uniform(-half_len, half_len);
            s.y = center + stream.uniform(-half_len, half_len);
        } while (!point_in_polygon(s.x, s.y, poly));
        switch (style) {
            case TemplateStyle::vehicle:
                s.amplitude = stream.uniform(0.25, 1.0);
                break;
            case TemplateStyle::tree:
                s.amplitude = stream.uniform(0.08, 0.3);
                break;
            case TemplateStyle::house:
                s.amplitude = (i < 4) ? stream.uniform(0.6, 1.2)
                                      : stream.uniform(0.1, 0.4);
                break;
        }
        s.phase = stream.uniform(0.0, 2.0 * kPi);
        geo.scatterers.push_back(s);
    }
    return tpl;
}

}  // namespace sarforge
