#pragma once

#include <filesystem>

#include "fringe/image.hpp"

namespace fringe {

enum class BitDepth { Eight = 8, Sixteen = 16 };

// Loads an 8/16-bit PNG (any colour type; grey is replicated to RGB, alpha is
// dropped) or a binary P6 PPM. Codes are scaled by 1/255 or 1/65535.
RgbImage load_image(const std::filesystem::path& path);

// Writes PNG, or binary PPM when the extension is ".ppm". Values are clamped
// to [0,1] and rounded to the nearest code.
void save_image(const RgbImage& image, const std::filesystem::path& path, BitDepth depth = BitDepth::Eight);

// Single-channel PNG; NaN is written as code 0.
void save_gray_png(const Plane& values, const std::filesystem::path& path, BitDepth depth);

// 8-bit grey PNG of the finite values stretched to their min..max range.
void save_normalized_png(const Plane& values, const std::filesystem::path& path);

std::uint16_t quantize(double value, BitDepth depth);

// Float raster interchange format, little endian:
//   bytes 0-3  magic "FRF1"
//   bytes 4-7  uint32 width
//   bytes 8-11 uint32 height
//   then width*height float32 values, row-major; NaN marks masked pixels.
void write_float_raster(const Plane& values, const std::filesystem::path& path);
Plane read_float_raster(const std::filesystem::path& path);

// ASCII PLY with one vertex (x, y, depth) per valid pixel on the stride grid.
// Returns the number of vertices written.
std::size_t export_point_cloud(const DepthMap& depth, const std::filesystem::path& path, int stride = 1);

}  // namespace fringe
