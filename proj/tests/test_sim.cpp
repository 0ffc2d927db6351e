#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"

#include "sarforge/sim.hpp"

using namespace sarforge;

namespace {

ScattererSet single_point(double x, double y, double amplitude = 1.0) {
    ScattererSet set;
    set.scatterers.push_back(Scatterer{x, y, amplitude, 0.0});
    set.footprint_polygon = {{x - 2, y - 2}, {x + 2, y - 2}, {x + 2, y + 2}, {x - 2, y + 2}};
    set.height_px = 0.0;
    return set;
}

std::vector<std::array<double, 2>> regular_polygon(double cx, double cy, double radius,
                                                   int sides) {
    std::vector<std::array<double, 2>> poly;
    for (int k = 0; k < sides; ++k) {
        const double phi = 2.0 * 3.14159265358979323846 * k / sides;
        poly.push_back({cx + radius * std::cos(phi), cy + radius * std::sin(phi)});
    }
    return poly;
}

size_t count_label(const Mask& m, uint8_t label) {
    size_t n = 0;
    for (const uint8_t v : m.labels) n += v == label ? 1 : 0;
    return n;
}

std::pair<double, double> interpolated_peak(const ComplexRaster& img) {
    int px = 0;
    int py = 0;
    double peak = -1.0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double m = std::abs(std::complex<double>(img.at(x, y)));
            if (m > peak) {
                peak = m;
                px = x;
                py = y;
            }
        }
    }
    auto refine = [&](double m0, double m1, double m2) {
        const double denom = m0 - 2.0 * m1 + m2;
        return denom == 0.0 ? 0.0 : 0.5 * (m0 - m2) / denom;
    };
    const double dx = refine(std::abs(std::complex<double>(img.at(px - 1, py))),
                             peak, std::abs(std::complex<double>(img.at(px + 1, py))));
    const double dy = refine(std::abs(std::complex<double>(img.at(px, py - 1))),
                             peak, std::abs(std::complex<double>(img.at(px, py + 1))));
    return {px + dx, py + dy};
}

}  // namespace

TEST_CASE("synthesize_signature: center scatterer at identity config is an impulse") {
    SensorConfig cfg;
    cfg.window = WindowSpec::rectangular();
    const int n = 64;
    const ComplexRaster sig = synthesize_signature(single_point(32.0, 32.0), n, cfg);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const float expected = (x == 32 && y == 32) ? 1.0f : 0.0f;
            CHECK(std::abs(sig.at(x, y) - complexf{expected, 0.0f}) <= 1e-5f);
        }
    }
}

TEST_CASE("synthesize_signature: off-grid scatterer peaks at its position") {
    SensorConfig cfg;
    cfg.window = WindowSpec::taylor(4, 35.0);
    const ComplexRaster sig = synthesize_signature(single_point(10.5, 20.0), 64, cfg);
    const auto [px, py] = interpolated_peak(sig);
    CHECK(std::abs(px - 10.5) <= 0.5);
    CHECK(std::abs(py - 20.0) <= 0.5);
}

TEST_CASE("synthesize_signature: two scatterers at 3x resolution resolve") {
    SensorConfig cfg;
    cfg.window = WindowSpec::rectangular();
    cfg.range_resolution_px = 2.0;
    cfg.crossrange_resolution_px = 2.0;
    ScattererSet set = single_point(29.0, 32.0);
    set.scatterers.push_back(Scatterer{35.0, 32.0, 1.0, 0.0});  // 6 px = 3x resolution
    const ComplexRaster sig = synthesize_signature(set, 64, cfg);

    // Both expected peak pixels sit above half power, the midpoint dips below.
    const double a = std::abs(std::complex<double>(sig.at(29, 32)));
    const double b = std::abs(std::complex<double>(sig.at(35, 32)));
    const double mid = std::abs(std::complex<double>(sig.at(32, 32)));
    const double half_power = std::sqrt(0.5) * std::max(a, b);
    CHECK(a > half_power);
    CHECK(b > half_power);
    CHECK(mid < half_power);
}

TEST_CASE("synthesize_signature: sidelobes are small away from the scatterer") {
    SensorConfig cfg;  // default taylor(4, 35)
    cfg.range_resolution_px = 2.0;
    cfg.crossrange_resolution_px = 2.0;
    const ComplexRaster sig = synthesize_signature(single_point(32.0, 32.0), 64, cfg);
    const double peak = std::abs(std::complex<double>(sig.at(32, 32)));
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            if (std::abs(x - 32) > 8 || std::abs(y - 32) > 8) {
                CHECK(std::abs(std::complex<double>(sig.at(x, y))) < 0.05 * peak);
            }
        }
    }
}

TEST_CASE("synthesize_signature: energy matches Parseval within 1%") {
    SensorConfig cfg;
    cfg.window = WindowSpec::taylor(4, 35.0);
    cfg.range_resolution_px = 1.5;
    cfg.crossrange_resolution_px = 1.5;
    const int n = 64;
    ScattererSet set = single_point(16.0, 16.0, 1.0);
    set.scatterers.push_back(Scatterer{44.0, 20.0, 0.5, 1.2});
    set.scatterers.push_back(Scatterer{30.0, 48.0, 2.0, -0.7});

    const int band = retained_band(n, 1.5);
    const std::vector<double> w = make_window(cfg.window, band);
    double w2 = 0.0;
    for (const double v : w) w2 += v * v;
    const double expected = (1.0 + 0.25 + 4.0) * (w2 * w2) / (static_cast<double>(n) * n);

    const ComplexRaster sig = synthesize_signature(set, n, cfg);
    double e = 0.0;
    for (const complexf& z : sig.samples) e += std::norm(std::complex<double>(z));
    CHECK(e == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("synthesize_shadow_mask: square footprint sweeps into a strip") {
    ScattererSet set;
    set.scatterers.push_back(Scatterer{32.0, 32.0, 1.0, 0.0});
    set.footprint_polygon = {{27.5, 27.5}, {37.5, 27.5}, {37.5, 37.5}, {27.5, 37.5}};
    set.height_px = 5.0;
    const Mask mask = synthesize_shadow_mask(set, 64);

    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            uint8_t expected = Mask::background;
            if (x >= 28 && x <= 37 && y >= 28 && y <= 37) expected = Mask::target;
            if (x >= 28 && x <= 37 && y >= 38 && y <= 42) expected = Mask::shadow;
            CHECK(mask.at(x, y) == expected);
        }
    }
    CHECK(count_label(mask, Mask::target) == 100);
    CHECK(count_label(mask, Mask::shadow) == 50);
}

TEST_CASE("synthesize_shadow_mask: zero height has no shadow") {
    ScattererSet set = single_point(32.0, 32.0);
    set.height_px = 0.0;
    const Mask mask = synthesize_shadow_mask(set, 64);
    CHECK(count_label(mask, Mask::shadow) == 0);
    CHECK(count_label(mask, Mask::target) > 0);
}

TEST_CASE("synthesize_shadow_mask: rotation keeps a round footprint's shadow area") {
    ScattererSet set;
    set.scatterers.push_back(Scatterer{32.0, 32.0, 1.0, 0.0});
    set.footprint_polygon = regular_polygon(32.0, 32.0, 8.0, 16);
    set.height_px = 5.0;
    const Mask m0 = synthesize_shadow_mask(set, 64, 0.0);
    const Mask m45 = synthesize_shadow_mask(set, 64, 45.0);
    const double a0 = static_cast<double>(count_label(m0, Mask::shadow));
    const double a45 = static_cast<double>(count_label(m45, Mask::shadow));
    CHECK(std::abs(a45 - a0) / a0 <= 0.10);
}

TEST_CASE("synthesize_shadow_mask: degenerate footprint is a config error") {
    ScattererSet set = single_point(32.0, 32.0);
    set.footprint_polygon = {{32.0, 32.0}, {32.4, 32.0}, {32.4, 32.4}, {32.0, 32.4}};
    CHECK_THROWS_AS(synthesize_shadow_mask(set, 64), ConfigError);
}

TEST_CASE("rotate_scatterer_set: full turn is bit-identical") {
    ScattererSet set = single_point(20.25, 41.5, 0.75);
    set.footprint_polygon = regular_polygon(20.25, 41.5, 6.0, 7);
    const ScattererSet turned = rotate_scatterer_set(set, 360.0, 32.0);
    REQUIRE(turned.scatterers.size() == set.scatterers.size());
    CHECK(turned.scatterers[0].x == set.scatterers[0].x);
    CHECK(turned.scatterers[0].y == set.scatterers[0].y);
    for (size_t i = 0; i < set.footprint_polygon.size(); ++i) {
        CHECK(turned.footprint_polygon[i][0] == set.footprint_polygon[i][0]);
        CHECK(turned.footprint_polygon[i][1] == set.footprint_polygon[i][1]);
    }
}

TEST_CASE("synthesize_clutter: speckle statistics and determinism") {
    ClutterConfig cfg;
    cfg.mean_intensity = 4.0;
    cfg.texture_shape = 1e6;  // effectively pure speckle
    RandomStream s1 = derive_stream(SeedSpec{21, 0});
    const ComplexRaster field = synthesize_clutter(512, 512, cfg, s1);

    double mean = 0.0;
    double mean2 = 0.0;
    for (const complexf& z : field.samples) {
        const double i = std::norm(std::complex<double>(z));
        mean += i;
        mean2 += i * i;
    }
    mean /= static_cast<double>(field.size());
    mean2 /= static_cast<double>(field.size());
    const double var = mean2 - mean * mean;
    CHECK(mean >= 3.8);
    CHECK(mean <= 4.2);
    CHECK(var / (mean * mean) == doctest::Approx(1.0).epsilon(0.05));

    RandomStream s2 = derive_stream(SeedSpec{21, 0});
    const ComplexRaster again = synthesize_clutter(512, 512, cfg, s2);
    CHECK(again.samples == field.samples);
}

TEST_CASE("synthesize_clutter: textured and smoothed fields keep their mean") {
    ClutterConfig cfg;
    cfg.mean_intensity = 2.0;
    cfg.texture_shape = 1.5;
    cfg.correlation_px = 4.0;
    RandomStream stream = derive_stream(SeedSpec{22, 0});
    const ComplexRaster field = synthesize_clutter(512, 512, cfg, stream);
    double mean = 0.0;
    for (const complexf& z : field.samples) mean += std::norm(std::complex<double>(z));
    mean /= static_cast<double>(field.size());
    CHECK(mean == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("chip grid: full-circle and sector counts") {
    ChipGridSpec quad;
    quad.azimuth_step_deg = 90.0;
    quad.depressions_deg = {15.0};
    CHECK(quad.azimuths().size() == 4);

    ChipGridSpec sector;
    sector.azimuth_step_deg = 5.0;
    sector.azimuth_sector_deg = {{0.0, 100.0}};
    CHECK(sector.azimuths().size() == 21);

    ChipGridSpec fine;
    fine.azimuth_step_deg = 0.5;
    CHECK(fine.azimuths().size() == 720);

    ChipGridSpec bad;
    bad.azimuth_step_deg = 7.0;  // 360/7 is not integral
    CHECK_THROWS_AS(bad.azimuths(), ConfigError);
}

TEST_CASE("generate_chip_library: one chip per (class, azimuth, depression)") {
    SensorConfig cfg;
    cfg.range_resolution_px = 2.0;
    cfg.crossrange_resolution_px = 2.0;
    const TargetTemplate tpl = make_procedural_template("alpha", 3, 32);
    ChipGridSpec grid;
    grid.azimuth_step_deg = 90.0;
    grid.depressions_deg = {15.0};
    std::vector<TargetChip> chips;
    const size_t count = generate_chip_library(
        {tpl}, grid, 32, cfg, [&](TargetChip&& c) { chips.push_back(std::move(c)); });
    CHECK(count == 4);
    REQUIRE(chips.size() == 4);
    for (const TargetChip& c : chips) {
        CHECK(c.class_name == "alpha");
        CHECK(c.signature.width == 32);
        CHECK(c.shadow_mask.width == 32);
        CHECK(c.signature.all_finite());
        CHECK(count_label(c.shadow_mask, Mask::target) > 0);
    }
    // Azimuth 0 chip equals an explicit 0-degree synthesis bit-for-bit.
    const ComplexRaster direct = synthesize_signature(tpl.geometry, 32, cfg);
    CHECK(chips[0].signature.samples == direct.samples);
}

TEST_CASE("make_procedural_template: deterministic, valid, style-dependent") {
    const TargetTemplate a1 = make_procedural_template("boxer", 9, 128);
    const TargetTemplate a2 = make_procedural_template("boxer", 9, 128);
    REQUIRE(a1.geometry.scatterers.size() == a2.geometry.scatterers.size());
    for (size_t i = 0; i < a1.geometry.scatterers.size(); ++i) {
        CHECK(a1.geometry.scatterers[i].x == a2.geometry.scatterers[i].x);
        CHECK(a1.geometry.scatterers[i].amplitude == a2.geometry.scatterers[i].amplitude);
    }
    const TargetTemplate b = make_procedural_template("boxer", 10, 128);
    bool differs = b.geometry.scatterers.size() != a1.geometry.scatterers.size();
    if (!differs) differs = b.geometry.scatterers[0].x != a1.geometry.scatterers[0].x;
    CHECK(differs);

    CHECK(a1.geometry.scatterers.size() >= 5);
    CHECK(a1.geometry.scatterers.size() <= 30);
    CHECK(polygon_area(a1.geometry.footprint_polygon) >= 1.0);
    for (const Scatterer& s : a1.geometry.scatterers) {
        CHECK(point_in_polygon(s.x, s.y, a1.geometry.footprint_polygon));
    }

    const TargetTemplate tree = make_procedural_template("tree", 9, 128, TemplateStyle::tree);
    const TargetTemplate house =
        make_procedural_template("house", 9, 128, TemplateStyle::house);
    double tree_peak = 0.0;
    for (const Scatterer& s : tree.geometry.scatterers) {
        tree_peak = std::max(tree_peak, s.amplitude);
    }
    double house_peak = 0.0;
    for (const Scatterer& s : house.geometry.scatterers) {
        house_peak = std::max(house_peak, s.amplitude);
    }
    CHECK(tree_peak < house_peak);  // houses keep bright corner returns
}
