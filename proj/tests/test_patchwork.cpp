#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"

#include "sarforge/patchwork.hpp"

using namespace sarforge;

namespace {

std::vector<ComplexRaster> constant_grid(int cells, int size, complexf value) {
    std::vector<ComplexRaster> vignettes;
    for (int i = 0; i < cells; ++i) {
        ComplexRaster v = ComplexRaster::zeros(size, size);
        for (complexf& z : v.samples) z = value;
        vignettes.push_back(std::move(v));
    }
    return vignettes;
}

}  // namespace

TEST_CASE("build_patchwork: 4x4 grid of 128 px vignettes with 16 px overlap is 464 px") {
    PatchworkConfig cfg;
    CHECK(cfg.output_width() == 464);
    CHECK(cfg.output_height() == 464);

    const auto vignettes = constant_grid(16, 128, complexf{1.0f, 0.0f});
    const std::vector<std::vector<AnnotatedBox>> boxes(16);
    const PatchworkResult out = build_patchwork(vignettes, boxes, cfg);
    CHECK(out.image.width == 464);
    CHECK(out.image.height == 464);
}

TEST_CASE("build_patchwork: constant vignettes blend to the same constant") {
    PatchworkConfig cfg;
    const complexf c{0.75f, -0.25f};
    const auto vignettes = constant_grid(16, 128, c);
    const std::vector<std::vector<AnnotatedBox>> boxes(16);
    const PatchworkResult out = build_patchwork(vignettes, boxes, cfg);
    for (const complexf& z : out.image.samples) {
        CHECK(std::abs(z - c) <= 1e-6f);
    }
}

TEST_CASE("build_patchwork: 1x1 grid is the vignette itself") {
    PatchworkConfig cfg;
    cfg.rows = 1;
    cfg.cols = 1;
    RandomStream stream = derive_stream(SeedSpec{30, 0});
    ComplexRaster v = ComplexRaster::zeros(128, 128);
    for (complexf& z : v.samples) {
        z = complexf(static_cast<float>(stream.uniform(-1.0, 1.0)),
                     static_cast<float>(stream.uniform(-1.0, 1.0)));
    }
    const PatchworkResult out = build_patchwork({v}, {{}}, cfg);
    CHECK(out.image.samples == v.samples);
}

TEST_CASE("patchwork weights form a partition of unity") {
    PatchworkConfig cfg;
    const int stride = cfg.vignette_size - cfg.overlap;
    std::vector<double> field(static_cast<size_t>(cfg.output_width()), 0.0);
    for (int g = 0; g < cfg.cols; ++g) {
        const std::vector<double> w = patchwork_axis_weights(g, cfg.cols, cfg);
        for (int u = 0; u < cfg.vignette_size; ++u) {
            field[static_cast<size_t>(g * stride + u)] += w[static_cast<size_t>(u)];
        }
    }
    for (const double v : field) CHECK(std::abs(v - 1.0) <= 1e-9);
}

TEST_CASE("build_patchwork: boxes translate into bounds, cores stay verbatim") {
    PatchworkConfig cfg;
    auto vignettes = constant_grid(16, 128, complexf{0.0f, 0.0f});
    // Distinctive content in cell (1,1) = grid index 5.
    RandomStream stream = derive_stream(SeedSpec{31, 0});
    for (complexf& z : vignettes[5].samples) {
        z = complexf(static_cast<float>(stream.uniform(0.5, 1.0)),
                     static_cast<float>(stream.uniform(0.5, 1.0)));
    }
    std::vector<std::vector<AnnotatedBox>> boxes(16);
    boxes[5].push_back(AnnotatedBox{BBox{40.0, 50.0, 70.0, 80.0}, "test", "target"});

    const PatchworkResult out = build_patchwork(vignettes, boxes, cfg);
    REQUIRE(out.boxes.size() == 1);
    const BBox expected{112.0 + 40.0, 112.0 + 50.0, 112.0 + 70.0, 112.0 + 80.0};
    CHECK(out.boxes[0].box.x_min == expected.x_min);
    CHECK(out.boxes[0].box.y_max == expected.y_max);
    CHECK(out.boxes[0].box.x_max <= out.image.width);
    CHECK(out.boxes[0].box.y_max <= out.image.height);

    // Non-overlap core of cell (1,1): local [16, 112) in both axes has unit
    // weight and no neighbor contributions (they are zero there anyway).
    for (int y = 16; y < 112; ++y) {
        for (int x = 16; x < 112; ++x) {
            REQUIRE(out.image.at(112 + x, 112 + y) == vignettes[5].at(x, y));
        }
    }
}

TEST_CASE("build_patchwork: grid shape mismatch is a config error") {
    PatchworkConfig cfg;
    const auto vignettes = constant_grid(15, 128, complexf{1.0f, 0.0f});
    const std::vector<std::vector<AnnotatedBox>> boxes(15);
    CHECK_THROWS_AS(build_patchwork(vignettes, boxes, cfg), ConfigError);

    PatchworkConfig bad;
    bad.overlap = 128;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("assemble_patchwork_dataset: counts, boxes, determinism") {
    // Small pool: two synthetic chips and one clutter background.
    SensorConfig sensor;
    sensor.range_resolution_px = 1.5;
    sensor.crossrange_resolution_px = 1.5;
    sensor.noise_sigma = 0.1;

    ScattererSet set;
    set.scatterers.push_back(Scatterer{24.0, 22.0, 1.0, 0.0});
    set.scatterers.push_back(Scatterer{26.0, 27.0, 0.8, 1.0});
    set.footprint_polygon = {{18.5, 18.5}, {30.5, 18.5}, {30.5, 30.5}, {18.5, 30.5}};
    set.height_px = 6.0;
    TargetChip chip;
    chip.signature = synthesize_signature(set, 48, sensor);
    chip.shadow_mask = synthesize_shadow_mask(set, 48);
    chip.class_name = "alpha";
    std::vector<TargetChip> pool{chip, chip};

    ClutterConfig clutter;
    RandomStream bg_stream = derive_stream(SeedSpec{32, 0});
    std::vector<ComplexRaster> backgrounds{
        synthesize_clutter(256, 256, clutter, bg_stream)};

    PatchworkConfig cfg;
    std::vector<PatchworkResult> first;
    const size_t n = assemble_patchwork_dataset(
        pool, backgrounds, cfg, sensor, 3, 77,
        [&](size_t, PatchworkResult&& r, SeedSpec) { first.push_back(std::move(r)); });
    CHECK(n == 3);
    REQUIRE(first.size() == 3);
    for (const PatchworkResult& r : first) {
        CHECK(r.image.width == 464);
        CHECK(r.boxes.size() == 16);  // one target per vignette
        for (const AnnotatedBox& b : r.boxes) {
            CHECK(b.box.x_max <= r.image.width);
            CHECK(b.box.y_max <= r.image.height);
        }
    }

    std::vector<PatchworkResult> second;
    assemble_patchwork_dataset(
        pool, backgrounds, cfg, sensor, 3, 77,
        [&](size_t, PatchworkResult&& r, SeedSpec) { second.push_back(std::move(r)); });
    for (size_t i = 0; i < 3; ++i) {
        CHECK(first[i].image.samples == second[i].image.samples);
    }

    // Full production run: 200 patchworks, one target per vignette, so a 4x4
    // grid yields 3200 boxes in total.
    size_t images = 0;
    size_t boxes = 0;
    assemble_patchwork_dataset(pool, backgrounds, cfg, sensor, 200, 3,
                               [&](size_t, PatchworkResult&& r, SeedSpec) {
                                   ++images;
                                   boxes += r.boxes.size();
                               });
    CHECK(images == 200);
    CHECK(boxes == 3200);
}
