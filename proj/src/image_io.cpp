#include "diffpose/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace diffpose {

float srgb_to_linear(float s) {
  if (s <= 0.04045f) return s / 12.92f;
  return std::pow((s + 0.055f) / 1.055f, 2.4f);
}

float linear_to_srgb(float v) {
  v = std::min(1.0f, std::max(0.0f, v));
  if (v <= 0.0031308f) return v * 12.92f;
  return 1.055f * std::pow(v, 1.0f / 2.4f) - 0.055f;
}

ImageF quantize_srgb8(const ImageF& img) {
  ImageF out = img;
  for (float& v : out.data) {
    const int byte = static_cast<int>(std::lround(linear_to_srgb(v) * 255.0f));
    v = srgb_to_linear(static_cast<float>(byte) / 255.0f);
  }
  return out;
}

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

struct PngRead {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngRead() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWrite {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWrite() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

// Decodes any PNG to 8- or 16-bit gray/RGB rows.
void read_png_rows(const std::string& path, int& width, int& height, int& channels,
                   int& bit_depth, std::vector<std::vector<png_byte>>& rows) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw ImageIoError("cannot open PNG for reading: " + path);

  PngRead ctx;
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw ImageIoError("png_create_read_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw ImageIoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw ImageIoError("PNG decode error: " + path);

  png_init_io(ctx.png, fp.get());
  png_read_info(ctx.png, ctx.info);

  png_set_palette_to_rgb(ctx.png);
  png_set_expand_gray_1_2_4_to_8(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
  height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
  bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  channels = png_get_channels(ctx.png, ctx.info);

  rows.assign(height, std::vector<png_byte>(png_get_rowbytes(ctx.png, ctx.info)));
  std::vector<png_bytep> row_ptrs(height);
  for (int y = 0; y < height; ++y) row_ptrs[y] = rows[y].data();
  png_read_image(ctx.png, row_ptrs.data());
  png_read_end(ctx.png, nullptr);
}

void write_png_rows(const std::string& path, int width, int height, int color_type,
                    int bit_depth, const std::vector<std::vector<png_byte>>& rows) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw ImageIoError("cannot open PNG for writing: " + path);

  PngWrite ctx;
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw ImageIoError("png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw ImageIoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw ImageIoError("PNG encode error: " + path);

  png_init_io(ctx.png, fp.get());
  png_set_IHDR(ctx.png, ctx.info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  std::vector<png_bytep> row_ptrs(height);
  for (int y = 0; y < height; ++y)
    row_ptrs[y] = const_cast<png_bytep>(rows[y].data());
  png_write_image(ctx.png, row_ptrs.data());
  png_write_end(ctx.png, nullptr);
}

}  // namespace

ImageF load_png_color(const std::string& path) {
  int w, h, c, depth;
  std::vector<std::vector<png_byte>> rows;
  read_png_rows(path, w, h, c, depth, rows);
  if (depth != 8) throw ImageIoError("expected 8-bit color PNG: " + path);

  ImageF img(w, h, c >= 3 ? 3 : 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int k = 0; k < img.channels; ++k)
        img.at(x, y, k) = srgb_to_linear(rows[y][x * c + k] / 255.0f);
  return img;
}

void save_png_color(const std::string& path, const ImageF& img) {
  const int c = img.channels;
  std::vector<std::vector<png_byte>> rows(img.height, std::vector<png_byte>(img.width * c));
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int k = 0; k < c; ++k)
        rows[y][x * c + k] = static_cast<png_byte>(
            std::lround(linear_to_srgb(img.at(x, y, k)) * 255.0f));
  write_png_rows(path, img.width, img.height,
                 c == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, 8, rows);
}

ImageF load_png_mask(const std::string& path) {
  int w, h, c, depth;
  std::vector<std::vector<png_byte>> rows;
  read_png_rows(path, w, h, c, depth, rows);
  if (depth != 8) throw ImageIoError("expected 8-bit mask PNG: " + path);

  ImageF mask(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      mask.at(x, y) = rows[y][x * c] > 127 ? 1.0f : 0.0f;
  return mask;
}

void save_png_mask(const std::string& path, const ImageF& mask) {
  std::vector<std::vector<png_byte>> rows(mask.height, std::vector<png_byte>(mask.width));
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      rows[y][x] = mask.at(x, y) > 0.5f ? 255 : 0;
  write_png_rows(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY, 8, rows);
}

Image16 load_png_u16(const std::string& path) {
  int w, h, c, depth;
  std::vector<std::vector<png_byte>> rows;
  read_png_rows(path, w, h, c, depth, rows);
  if (depth != 16 || c != 1) throw ImageIoError("expected 16-bit grayscale PNG: " + path);

  Image16 img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.at(x, y) = static_cast<uint16_t>((rows[y][2 * x] << 8) | rows[y][2 * x + 1]);
  return img;
}

void save_png_u16(const std::string& path, const Image16& img) {
  std::vector<std::vector<png_byte>> rows(img.height, std::vector<png_byte>(img.width * 2));
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const uint16_t v = img.at(x, y);
      rows[y][2 * x] = static_cast<png_byte>(v >> 8);
      rows[y][2 * x + 1] = static_cast<png_byte>(v & 0xff);
    }
  write_png_rows(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

ImageF load_pfm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ImageIoError("cannot open PFM: " + path);

  std::string magic;
  int w, h;
  double scale;
  f >> magic >> w >> h >> scale;
  if ((magic != "PF" && magic != "Pf") || w <= 0 || h <= 0)
    throw ImageIoError("bad PFM header: " + path);
  if (scale >= 0) throw ImageIoError("big-endian PFM not supported: " + path);
  f.get();  // single whitespace after the scale

  ImageF img(w, h, magic == "PF" ? 3 : 1);
  const size_t row_floats = static_cast<size_t>(w) * img.channels;
  for (int y = h - 1; y >= 0; --y) {
    f.read(reinterpret_cast<char*>(&img.data[static_cast<size_t>(y) * row_floats]),
           static_cast<std::streamsize>(row_floats * sizeof(float)));
  }
  if (!f) throw ImageIoError("truncated PFM: " + path);
  return img;
}

void save_pfm(const std::string& path, const ImageF& img) {
  if (img.channels != 1 && img.channels != 3)
    throw ImageIoError("PFM supports 1 or 3 channels");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ImageIoError("cannot open PFM for writing: " + path);

  f << (img.channels == 3 ? "PF" : "Pf") << "\n"
    << img.width << " " << img.height << "\n"
    << "-1.0\n";
  const size_t row_floats = static_cast<size_t>(img.width) * img.channels;
  for (int y = img.height - 1; y >= 0; --y) {
    f.write(reinterpret_cast<const char*>(&img.data[static_cast<size_t>(y) * row_floats]),
            static_cast<std::streamsize>(row_floats * sizeof(float)));
  }
}

}  // namespace diffpose
