#include "fringe/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "fringe/error.hpp"

namespace fringe {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_read(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec) || fs::is_directory(path, ec)) fail(ErrorKind::MissingFile, path.string());
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) fail(ErrorKind::MissingFile, path.string());
  return f;
}

FilePtr open_for_write(const fs::path& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) fail(ErrorKind::Unwritable, path.string());
  return f;
}

double max_code(BitDepth depth) { return depth == BitDepth::Sixteen ? 65535.0 : 255.0; }

bool has_extension(const fs::path& path, std::string_view ext) {
  auto e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e == ext;
}

// libpng reports errors through longjmp; convert them into Error at the call site.
void png_error_handler(png_structp png, png_const_charp msg) {
  auto* message = static_cast<std::string*>(png_get_error_ptr(png));
  if (message) *message = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

RgbImage load_png(std::FILE* file, const fs::path& path) {
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::CorruptHeader, path.string() + ": cannot allocate PNG reader");
  }
  volatile bool header_done = false;
  std::vector<png_byte> buffer;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(header_done ? ErrorKind::UnsupportedFormat : ErrorKind::CorruptHeader, path.string() + ": " + message);
  }
  png_init_io(png, file);
  png_read_info(png, info);
  header_done = true;

  const int color_type = png_get_color_type(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  if (bit_depth < 8) bit_depth = 8;
  if constexpr (std::endian::native == std::endian::little) {
    if (bit_depth == 16) png_set_swap(png);
  }
  png_read_update_info(png, info);

  const auto width = static_cast<int>(png_get_image_width(png, info));
  const auto height = static_cast<int>(png_get_image_height(png, info));
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  const int channels = png_get_channels(png, info);
  bit_depth = png_get_bit_depth(png, info);
  if (channels != 3 || (bit_depth != 8 && bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::UnsupportedFormat, path.string() + ": unexpected PNG layout");
  }
  buffer.resize(rowbytes * static_cast<std::size_t>(height));
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * static_cast<std::size_t>(y);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  RgbImage image(width, height);
  const double scale = bit_depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
  for (int y = 0; y < height; ++y) {
    const png_bytep row = rows[static_cast<std::size_t>(y)];
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const std::size_t k = static_cast<std::size_t>(x) * 3 + static_cast<std::size_t>(c);
        unsigned code = 0;
        if (bit_depth == 16) {
          std::uint16_t v;
          std::memcpy(&v, row + 2 * k, sizeof v);
          code = v;
        } else {
          code = row[k];
        }
        image.at(c, x, y) = code * scale;
      }
    }
  }
  return image;
}

// Reads one whitespace/comment-delimited PNM header token.
bool read_pnm_token(std::FILE* f, std::string& token) {
  token.clear();
  int ch = std::fgetc(f);
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = std::fgetc(f);
    } else if (std::isspace(ch)) {
      ch = std::fgetc(f);
    } else {
      break;
    }
  }
  while (ch != EOF && !std::isspace(ch)) {
    token.push_back(static_cast<char>(ch));
    ch = std::fgetc(f);
  }
  return !token.empty();
}

RgbImage load_ppm(std::FILE* file, const fs::path& path) {
  std::string magic, w, h, maxval;
  if (!read_pnm_token(file, magic) || magic != "P6") fail(ErrorKind::UnsupportedFormat, path.string() + ": only binary P6 PPM is supported");
  if (!read_pnm_token(file, w) || !read_pnm_token(file, h) || !read_pnm_token(file, maxval)) {
    fail(ErrorKind::CorruptHeader, path.string() + ": truncated PPM header");
  }
  int width = 0, height = 0, max = 0;
  try {
    width = std::stoi(w);
    height = std::stoi(h);
    max = std::stoi(maxval);
  } catch (const std::exception&) {
    fail(ErrorKind::CorruptHeader, path.string() + ": non-numeric PPM header field");
  }
  if (width <= 0 || height <= 0 || max <= 0 || max > 65535) fail(ErrorKind::CorruptHeader, path.string() + ": bad PPM dimensions or maxval");
  const std::size_t bytes_per_sample = max > 255 ? 2 : 1;
  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3 * bytes_per_sample);
  if (std::fread(raw.data(), 1, raw.size(), file) != raw.size()) fail(ErrorKind::CorruptHeader, path.string() + ": truncated PPM data");

  RgbImage image(width, height);
  const double scale = 1.0 / max;
  std::size_t k = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < 3; ++c, ++k) {
        const unsigned code = bytes_per_sample == 2 ? (raw[2 * k] << 8) | raw[2 * k + 1] : raw[k];
        image.at(c, x, y) = code * scale;
      }
    }
  }
  return image;
}

void write_png(const fs::path& path, int width, int height, int channels, BitDepth depth,
               const std::vector<std::uint16_t>& codes) {
  auto file = open_for_write(path);
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::Unwritable, path.string() + ": cannot allocate PNG writer");
  }
  const int bit_depth = static_cast<int>(depth);
  const std::size_t row_samples = static_cast<std::size_t>(width) * static_cast<std::size_t>(channels);
  std::vector<png_byte> row(row_samples * (bit_depth == 16 ? 2 : 1));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::Unwritable, path.string() + ": " + message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    const std::size_t base = static_cast<std::size_t>(y) * row_samples;
    for (std::size_t k = 0; k < row_samples; ++k) {
      const std::uint16_t code = codes[base + k];
      if (bit_depth == 16) {
        row[2 * k] = static_cast<png_byte>(code >> 8);
        row[2 * k + 1] = static_cast<png_byte>(code & 0xff);
      } else {
        row[k] = static_cast<png_byte>(code);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) fail(ErrorKind::Unwritable, path.string());
}

void write_ppm(const RgbImage& image, const fs::path& path, BitDepth depth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Unwritable, path.string());
  out << "P6\n" << image.width() << ' ' << image.height() << '\n' << static_cast<int>(max_code(depth)) << '\n';
  std::vector<char> raw;
  raw.reserve(image.pixel_count() * 3 * (depth == BitDepth::Sixteen ? 2 : 1));
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const std::uint16_t code = quantize(image.at(c, x, y), depth);
        if (depth == BitDepth::Sixteen) raw.push_back(static_cast<char>(code >> 8));
        raw.push_back(static_cast<char>(code & 0xff));
      }
    }
  }
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (!out) fail(ErrorKind::Unwritable, path.string());
}

}  // namespace

std::uint16_t quantize(double value, BitDepth depth) {
  if (std::isnan(value)) return 0;
  return static_cast<std::uint16_t>(std::lround(std::clamp(value, 0.0, 1.0) * max_code(depth)));
}

RgbImage load_image(const fs::path& path) {
  auto file = open_for_read(path);
  std::array<unsigned char, 8> signature{};
  const std::size_t n = std::fread(signature.data(), 1, signature.size(), file.get());
  std::rewind(file.get());
  if (n == signature.size() && png_sig_cmp(signature.data(), 0, signature.size()) == 0) return load_png(file.get(), path);
  if (n >= 2 && signature[0] == 'P' && signature[1] == '6') return load_ppm(file.get(), path);
  if (n >= 2 && signature[0] == 'P' && signature[1] >= '1' && signature[1] <= '7') {
    fail(ErrorKind::UnsupportedFormat, path.string() + ": only binary P6 PPM is supported");
  }
  if (n >= 4 && signature[1] == 'P' && signature[2] == 'N' && signature[3] == 'G') {
    fail(ErrorKind::CorruptHeader, path.string() + ": damaged PNG signature");
  }
  fail(ErrorKind::UnsupportedFormat, path.string());
}

void save_image(const RgbImage& image, const fs::path& path, BitDepth depth) {
  if (has_extension(path, ".ppm")) {
    write_ppm(image, path, depth);
    return;
  }
  std::vector<std::uint16_t> codes(image.pixel_count() * 3);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    for (int c = 0; c < 3; ++c) codes[3 * i + static_cast<std::size_t>(c)] = quantize(image.channel(c)[i], depth);
  }
  write_png(path, image.width(), image.height(), 3, depth, codes);
}

void save_normalized_png(const Plane& values, const std::filesystem::path& path) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : values.data()) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Plane scaled(values.width(), values.height(), kMaskedValue);
  const double span = hi > lo ? hi - lo : 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isfinite(values[i])) scaled[i] = (values[i] - lo) / span;
  }
  save_gray_png(scaled, path, BitDepth::Eight);
}

void save_gray_png(const Plane& values, const fs::path& path, BitDepth depth) {
  std::vector<std::uint16_t> codes(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) codes[i] = quantize(values[i], depth);
  write_png(path, values.width(), values.height(), 1, depth, codes);
}

void write_float_raster(const Plane& values, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Unwritable, path.string());
  auto put_u32 = [&out](std::uint32_t v) {
    const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b.data(), 4);
  };
  out.write("FRF1", 4);
  put_u32(static_cast<std::uint32_t>(values.width()));
  put_u32(static_cast<std::uint32_t>(values.height()));
  for (double v : values.data()) put_u32(std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  if (!out) fail(ErrorKind::Unwritable, path.string());
}

Plane read_float_raster(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) fail(ErrorKind::MissingFile, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::MissingFile, path.string());
  std::array<unsigned char, 12> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) fail(ErrorKind::CorruptHeader, path.string() + ": truncated header");
  if (std::memcmp(header.data(), "FRF1", 4) != 0) fail(ErrorKind::UnsupportedFormat, path.string() + ": not a float raster");
  auto u32 = [&header](std::size_t at) {
    return static_cast<std::uint32_t>(header[at]) | (static_cast<std::uint32_t>(header[at + 1]) << 8) |
           (static_cast<std::uint32_t>(header[at + 2]) << 16) | (static_cast<std::uint32_t>(header[at + 3]) << 24);
  };
  const std::uint32_t width = u32(4);
  const std::uint32_t height = u32(8);
  if (width == 0 || height == 0 || width > (1u << 16) || height > (1u << 16)) fail(ErrorKind::CorruptHeader, path.string() + ": bad dimensions");
  Plane values(static_cast<int>(width), static_cast<int>(height));
  std::vector<unsigned char> raw(values.size() * 4);
  if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
    fail(ErrorKind::CorruptHeader, path.string() + ": truncated data");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * i]) | (static_cast<std::uint32_t>(raw[4 * i + 1]) << 8) |
                               (static_cast<std::uint32_t>(raw[4 * i + 2]) << 16) | (static_cast<std::uint32_t>(raw[4 * i + 3]) << 24);
    values[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return values;
}

std::size_t export_point_cloud(const DepthMap& depth, const fs::path& path, int stride) {
  if (stride <= 0) fail(ErrorKind::InvalidArgument, "point cloud stride must be positive");
  std::ostringstream body;
  body.precision(9);
  std::size_t count = 0;
  for (int y = 0; y < depth.height(); y += stride) {
    for (int x = 0; x < depth.width(); x += stride) {
      const std::size_t i = depth.depth().index(x, y);
      if (!depth.is_valid(i)) continue;
      body << x << ' ' << y << ' ' << depth[i] << '\n';
      ++count;
    }
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Unwritable, path.string());
  out << "ply\nformat ascii 1.0\nelement vertex " << count
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n"
      << body.str();
  if (!out) fail(ErrorKind::Unwritable, path.string());
  return count;
}

}  // namespace fringe
