#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace diffpose {

/// Row-major float image, 1 or 3 channels. Color is linear [0,1]; depth is
/// meters with 0 as the invalid sentinel; masks are 0/1.
struct ImageF {
  int width = 0, height = 0, channels = 1;
  std::vector<float> data;

  ImageF() = default;
  ImageF(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c), data(static_cast<size_t>(w) * h * c, fill) {}

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  bool same_shape(const ImageF& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

/// 16-bit single-channel raster (depth interchange format).
struct Image16 {
  int width = 0, height = 0;
  std::vector<uint16_t> data;

  Image16() = default;
  Image16(int w, int h) : width(w), height(h), data(static_cast<size_t>(w) * h, 0) {}
  uint16_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  uint16_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

float srgb_to_linear(float s);
float linear_to_srgb(float v);

/// Quantizes a linear-light image through the 8-bit sRGB codec grid, i.e. the
/// values a PNG round trip would produce.
ImageF quantize_srgb8(const ImageF& img);

}  // namespace diffpose
