#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binofeat/image.hpp"

namespace binofeat {

// Reads an 8-bit gray/RGB or 16-bit gray PNG, or a binary PGM/PPM, as
// grayscale in [0,1]. Color inputs are converted with ITU-R 601 luma weights.
// Throws IoError (missing file) / FormatError (undecodable).
ImageF32 read_image_gray(const std::string& path);

// Reads a 16-bit grayscale PNG (or 16-bit PGM) and divides raw values by
// depth_scale to get meters. Raw value 0 stays 0 (= missing).
ImageF32 read_depth(const std::string& path, double depth_scale);

// Writes [0,1] grayscale as an 8-bit RGB PNG (replicated channels).
void write_gray_as_rgb_png(const std::string& path, const ImageF32& img);

// Writes meters as a 16-bit grayscale PNG of round(depth * depth_scale),
// clamped to [0, 65535].
void write_depth_png(const std::string& path, const ImageF32& depth_m,
                     double depth_scale);

// Writes an interleaved 8-bit RGB buffer (used by the plot emitter).
void write_rgb_png(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb);

}  // namespace binofeat
