#pragma once

#include <string>

#include "diffpose/image.hpp"

namespace diffpose {

struct ImageIoError : std::runtime_error {
  explicit ImageIoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// 8-bit PNG, sRGB-encoded color. Load decodes to linear [0,1]; grayscale
/// files come back as 1 channel, color as 3 (alpha is dropped).
ImageF load_png_color(const std::string& path);
void save_png_color(const std::string& path, const ImageF& img);

/// 8-bit PNG holding a binary mask; >127 maps to 1.
ImageF load_png_mask(const std::string& path);
void save_png_mask(const std::string& path, const ImageF& mask);

/// 16-bit grayscale PNG (millimeter depth interchange).
Image16 load_png_u16(const std::string& path);
void save_png_u16(const std::string& path, const Image16& img);

/// PFM float raster ("Pf"/"PF", little-endian, bottom-up rows). Lossless
/// storage for synthesized observations.
ImageF load_pfm(const std::string& path);
void save_pfm(const std::string& path, const ImageF& img);

}  // namespace diffpose
