#include "binofeat/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

#include "binofeat/errors.hpp"

namespace binofeat {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path);
  return f;
}

constexpr float kLumaR = 0.299f, kLumaG = 0.587f, kLumaB = 0.114f;

// Raw 16-bit rows (already host-endian) from a PNG file. channels in {1,3,4},
// bit depth normalized to 16 by scaling 8-bit values by 257.
struct RawPng {
  int width = 0, height = 0, channels = 0;
  std::vector<std::uint16_t> pixels;  // interleaved
};

RawPng read_png_raw(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  png_byte header[8];
  if (std::fread(header, 1, 8, f.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
    throw FormatError("not a PNG file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("libpng init failed for " + path);
  }

  std::vector<std::uint16_t> pixels;
  std::vector<png_bytep> row_ptrs;
  std::vector<png_byte> raw;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("PNG decode error in " + path);
  }

  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_read_update_info(png, info);

  const int depth = png_get_bit_depth(png, info);
  const int channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);

  raw.resize(rowbytes * h);
  row_ptrs.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = raw.data() + y * rowbytes;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  RawPng out;
  out.width = static_cast<int>(w);
  out.height = static_cast<int>(h);
  out.channels = channels;
  out.pixels.resize(static_cast<std::size_t>(w) * h * channels);
  if (depth == 16) {
    // PNG stores 16-bit samples MSB first.
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
      out.pixels[i] = static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
  } else {
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
      out.pixels[i] = static_cast<std::uint16_t>(raw[i] * 257);
  }
  return out;
}

bool has_suffix(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

// Binary PGM (P5) / PPM (P6), 8- or 16-bit.
RawPng read_pnm_raw(const std::string& path) {
  FilePtr f = open_file(path, "rb");
  char magic[3] = {0, 0, 0};
  if (std::fscanf(f.get(), "%2s", magic) != 1 ||
      (std::strcmp(magic, "P5") != 0 && std::strcmp(magic, "P6") != 0))
    throw FormatError("not a binary PGM/PPM: " + path);
  const int channels = (std::strcmp(magic, "P6") == 0) ? 3 : 1;

  auto next_int = [&](int& value) {
    int c;
    do {
      c = std::fgetc(f.get());
      if (c == '#') {
        while (c != '\n' && c != EOF) c = std::fgetc(f.get());
      }
    } while (c == ' ' || c == '\t' || c == '\n' || c == '\r');
    int v = 0;
    bool any = false;
    while (c >= '0' && c <= '9') {
      v = v * 10 + (c - '0');
      any = true;
      c = std::fgetc(f.get());
    }
    if (!any) throw FormatError("malformed PNM header in " + path);
    value = v;
  };

  int w, h, maxval;
  next_int(w);
  next_int(h);
  next_int(maxval);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
    throw FormatError("bad PNM dimensions in " + path);

  RawPng out;
  out.width = w;
  out.height = h;
  out.channels = channels;
  const std::size_t count = static_cast<std::size_t>(w) * h * channels;
  out.pixels.resize(count);
  if (maxval < 256) {
    std::vector<std::uint8_t> buf(count);
    if (std::fread(buf.data(), 1, count, f.get()) != count)
      throw FormatError("truncated PNM data in " + path);
    const int scale = 65535 / maxval;
    for (std::size_t i = 0; i < count; ++i)
      out.pixels[i] = static_cast<std::uint16_t>(buf[i] * scale);
  } else {
    std::vector<std::uint8_t> buf(count * 2);
    if (std::fread(buf.data(), 1, count * 2, f.get()) != count * 2)
      throw FormatError("truncated PNM data in " + path);
    for (std::size_t i = 0; i < count; ++i)  // MSB first
      out.pixels[i] = static_cast<std::uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);
  }
  return out;
}

RawPng read_raw(const std::string& path) {
  if (has_suffix(path, ".pgm") || has_suffix(path, ".ppm") || has_suffix(path, ".pnm"))
    return read_pnm_raw(path);
  return read_png_raw(path);
}

}  // namespace

ImageF32 read_image_gray(const std::string& path) {
  const RawPng raw = read_raw(path);
  ImageF32 img(raw.width, raw.height);
  const float inv = 1.f / 65535.f;
  if (raw.channels == 1) {
    for (int y = 0; y < raw.height; ++y)
      for (int x = 0; x < raw.width; ++x)
        img.at(x, y) = raw.pixels[static_cast<std::size_t>(y) * raw.width + x] * inv;
  } else {
    for (int y = 0; y < raw.height; ++y)
      for (int x = 0; x < raw.width; ++x) {
        const std::size_t i =
            (static_cast<std::size_t>(y) * raw.width + x) * raw.channels;
        img.at(x, y) = (kLumaR * raw.pixels[i] + kLumaG * raw.pixels[i + 1] +
                        kLumaB * raw.pixels[i + 2]) *
                       inv;
      }
  }
  return img;
}

ImageF32 read_depth(const std::string& path, double depth_scale) {
  const RawPng raw = read_raw(path);
  if (raw.channels != 1)
    throw FormatError("depth image must be single-channel: " + path);
  ImageF32 img(raw.width, raw.height);
  // read_raw scales 8-bit inputs by 257; depth files are 16-bit so values
  // arrive unmodified.
  for (int y = 0; y < raw.height; ++y)
    for (int x = 0; x < raw.width; ++x) {
      const std::uint16_t v = raw.pixels[static_cast<std::size_t>(y) * raw.width + x];
      img.at(x, y) = static_cast<float>(v / depth_scale);
    }
  return img;
}

namespace {

void write_png(const std::string& path, int width, int height, int channels,
               int bit_depth, const std::vector<std::uint8_t>& bytes) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng init failed for " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG write error for " + path);
  }
  png_init_io(png, f.get());
  const int color = channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(png, info, width, height, bit_depth, color, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t rowbytes =
      static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(bytes.data() + y * rowbytes);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_gray_as_rgb_png(const std::string& path, const ImageF32& img) {
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(img.width()) * img.height() * 3);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const float v = std::min(1.f, std::max(0.f, img.at(x, y)));
      const auto b = static_cast<std::uint8_t>(std::lround(v * 255.0));
      const std::size_t i = (static_cast<std::size_t>(y) * img.width() + x) * 3;
      rgb[i] = rgb[i + 1] = rgb[i + 2] = b;
    }
  write_png(path, img.width(), img.height(), 3, 8, rgb);
}

void write_depth_png(const std::string& path, const ImageF32& depth_m,
                     double depth_scale) {
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(depth_m.width()) *
                                  depth_m.height() * 2);
  for (int y = 0; y < depth_m.height(); ++y)
    for (int x = 0; x < depth_m.width(); ++x) {
      double raw = std::round(static_cast<double>(depth_m.at(x, y)) * depth_scale);
      raw = std::min(65535.0, std::max(0.0, raw));
      const auto v = static_cast<std::uint16_t>(raw);
      const std::size_t i = (static_cast<std::size_t>(y) * depth_m.width() + x) * 2;
      bytes[i] = static_cast<std::uint8_t>(v >> 8);  // MSB first
      bytes[i + 1] = static_cast<std::uint8_t>(v & 0xff);
    }
  write_png(path, depth_m.width(), depth_m.height(), 1, 16, bytes);
}

void write_rgb_png(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw ShapeError("write_rgb_png: buffer size mismatch");
  write_png(path, width, height, 3, 8, rgb);
}

}  // namespace binofeat
