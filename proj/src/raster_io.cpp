#include "sarforge/raster_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <limits>

namespace sarforge {
namespace {

// Dimensions above this are treated as corrupt headers rather than real data.
constexpr uint64_t kMaxPixels = uint64_t{1} << 34;

void put_u64le(std::ostream& out, uint64_t v) {
    std::array<unsigned char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

uint64_t get_u64le(std::istream& in, const std::string& origin) {
    std::array<unsigned char, 8> b;
    if (!in.read(reinterpret_cast<char*>(b.data()), 8)) {
        throw IoError(origin + ": truncated header");
    }
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_f32le(std::ostream& out, float v) {
    static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    std::array<unsigned char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::pair<int, int> read_header(std::istream& in, const char* magic,
                                const std::string& origin) {
    char got[4];
    if (!in.read(got, 4)) throw IoError(origin + ": truncated header");
    if (std::memcmp(got, magic, 4) != 0) {
        throw FormatError(origin + ": bad magic, expected " + std::string(magic, 4));
    }
    const uint64_t w = get_u64le(in, origin);
    const uint64_t h = get_u64le(in, origin);
    if (w == 0 || h == 0 || w > kMaxPixels || h > kMaxPixels || w * h > kMaxPixels) {
        throw FormatError(origin + ": dimensions out of range (" + std::to_string(w) +
                          "x" + std::to_string(h) + ")");
    }
    return {static_cast<int>(w), static_cast<int>(h)};
}

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    body(out);
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

template <typename Fn>
auto read_file(const std::filesystem::path& path, Fn&& body) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    return body(in, path.string());
}

}  // namespace

ComplexRaster read_raster(std::istream& in, const std::string& origin) {
    const auto [w, h] = read_header(in, "SFC1", origin);
    ComplexRaster raster;
    raster.width = w;
    raster.height = h;
    const size_t n = static_cast<size_t>(w) * h;
    std::vector<unsigned char> raw(8 * n);
    if (!in.read(reinterpret_cast<char*>(raw.data()),
                 static_cast<std::streamsize>(raw.size()))) {
        throw IoError(origin + ": truncated payload");
    }
    // Decode bytewise so the format stays bit-exact regardless of host order.
    raster.samples.resize(n);
    const unsigned char* bytes = raw.data();
    for (size_t i = 0; i < 2 * n; ++i) {
        uint32_t bits = static_cast<uint32_t>(bytes[4 * i]) |
                        (static_cast<uint32_t>(bytes[4 * i + 1]) << 8) |
                        (static_cast<uint32_t>(bytes[4 * i + 2]) << 16) |
                        (static_cast<uint32_t>(bytes[4 * i + 3]) << 24);
        float f;
        std::memcpy(&f, &bits, 4);
        if (i % 2 == 0) {
            raster.samples[i / 2].real(f);
        } else {
            raster.samples[i / 2].imag(f);
        }
    }
    return raster;
}

ComplexRaster read_raster(const std::filesystem::path& path) {
    return read_file(path, [](std::istream& in, const std::string& origin) {
        return read_raster(in, origin);
    });
}

void write_raster(const ComplexRaster& raster, std::ostream& out) {
    if (!raster.dims_consistent()) {
        throw ConfigError("raster: sample count does not match dimensions");
    }
    out.write("SFC1", 4);
    put_u64le(out, static_cast<uint64_t>(raster.width));
    put_u64le(out, static_cast<uint64_t>(raster.height));
    for (const complexf& z : raster.samples) {
        put_f32le(out, z.real());
        put_f32le(out, z.imag());
    }
}

void write_raster(const ComplexRaster& raster, const std::filesystem::path& path) {
    write_file(path, [&](std::ostream& out) { write_raster(raster, out); });
}

Mask read_mask(std::istream& in, const std::string& origin) {
    const auto [w, h] = read_header(in, "SFM1", origin);
    Mask mask;
    mask.width = w;
    mask.height = h;
    mask.labels.resize(static_cast<size_t>(w) * h);
    if (!in.read(reinterpret_cast<char*>(mask.labels.data()),
                 static_cast<std::streamsize>(mask.labels.size()))) {
        throw IoError(origin + ": truncated payload");
    }
    if (!mask.labels_valid()) throw FormatError(origin + ": label outside {0,1,2}");
    return mask;
}

Mask read_mask(const std::filesystem::path& path) {
    return read_file(path, [](std::istream& in, const std::string& origin) {
        return read_mask(in, origin);
    });
}

void write_mask(const Mask& mask, std::ostream& out) {
    if (mask.labels.size() != static_cast<size_t>(mask.width) * mask.height) {
        throw ConfigError("mask: label count does not match dimensions");
    }
    if (!mask.labels_valid()) throw ConfigError("mask: label outside {0,1,2}");
    out.write("SFM1", 4);
    put_u64le(out, static_cast<uint64_t>(mask.width));
    put_u64le(out, static_cast<uint64_t>(mask.height));
    out.write(reinterpret_cast<const char*>(mask.labels.data()),
              static_cast<std::streamsize>(mask.labels.size()));
}

void write_mask(const Mask& mask, const std::filesystem::path& path) {
    write_file(path, [&](std::ostream& out) { write_mask(mask, out); });
}

Pgm8 read_pgm8(std::istream& in, const std::string& origin) {
    std::string magic;
    in >> magic;
    if (magic != "P5") throw FormatError(origin + ": not a binary PGM (P5)");
    long long w = 0;
    long long h = 0;
    long long maxval = 0;
    if (!(in >> w >> h >> maxval)) throw FormatError(origin + ": bad PGM header");
    if (maxval != 255) throw FormatError(origin + ": PGM maxval must be 255");
    if (w <= 0 || h <= 0 || static_cast<uint64_t>(w) * h > kMaxPixels) {
        throw FormatError(origin + ": PGM dimensions out of range");
    }
    in.get();  // single whitespace byte after maxval
    Pgm8 img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.resize(static_cast<size_t>(w) * h);
    if (!in.read(reinterpret_cast<char*>(img.pixels.data()),
                 static_cast<std::streamsize>(img.pixels.size()))) {
        throw IoError(origin + ": truncated PGM payload");
    }
    return img;
}

Pgm8 read_pgm8(const std::filesystem::path& path) {
    return read_file(path, [](std::istream& in, const std::string& origin) {
        return read_pgm8(in, origin);
    });
}

void write_pgm8(const Pgm8& image, std::ostream& out) {
    if (image.pixels.size() != static_cast<size_t>(image.width) * image.height) {
        throw ConfigError("pgm: pixel count does not match dimensions");
    }
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
}

void write_pgm8(const Pgm8& image, const std::filesystem::path& path) {
    write_file(path, [&](std::ostream& out) { write_pgm8(image, out); });
}

}  // namespace sarforge
