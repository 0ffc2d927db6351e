#ifndef SARFORGE_RASTER_IO_HPP
#define SARFORGE_RASTER_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "sarforge/types.hpp"

namespace sarforge {

// CF32: magic "SFC1", u64le width, u64le height, row-major interleaved
// (re, im) float32le payload.
ComplexRaster read_raster(std::istream& in, const std::string& origin = "<stream>");
ComplexRaster read_raster(const std::filesystem::path& path);
void write_raster(const ComplexRaster& raster, std::ostream& out);
void write_raster(const ComplexRaster& raster, const std::filesystem::path& path);

// SFM1: magic "SFM1", same header, raw label bytes. Labels must be in {0,1,2}.
Mask read_mask(std::istream& in, const std::string& origin = "<stream>");
Mask read_mask(const std::filesystem::path& path);
void write_mask(const Mask& mask, std::ostream& out);
void write_mask(const Mask& mask, const std::filesystem::path& path);

// Binary PGM ("P5"), maxval 255 only.
Pgm8 read_pgm8(std::istream& in, const std::string& origin = "<stream>");
Pgm8 read_pgm8(const std::filesystem::path& path);
void write_pgm8(const Pgm8& image, std::ostream& out);
void write_pgm8(const Pgm8& image, const std::filesystem::path& path);

}  // namespace sarforge

#endif  // SARFORGE_RASTER_IO_HPP
