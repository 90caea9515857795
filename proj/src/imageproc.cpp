#include "diffpose/imageproc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diffpose {

namespace {

constexpr double kBlurSigma = 1.4;
constexpr int kBlurRadius = 2;  // 5x5
constexpr double kPercentile = 0.99;
constexpr double kMagEps = 1e-12;

const std::array<double, 5>& blur_kernel() {
  static const std::array<double, 5> k = [] {
    std::array<double, 5> v{};
    double sum = 0.0;
    for (int i = -kBlurRadius; i <= kBlurRadius; ++i) {
      v[i + kBlurRadius] = std::exp(-0.5 * i * i / (kBlurSigma * kBlurSigma));
      sum += v[i + kBlurRadius];
    }
    for (double& x : v) x /= sum;
    return v;
  }();
  return k;
}

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Separable 5-tap blur with replicated borders, all channels.
ImageF gaussian_blur5(const ImageF& img) {
  const auto& k = blur_kernel();
  const int w = img.width, h = img.height, c = img.channels;
  ImageF tmp(w, h, c), out(w, h, c);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int i = -kBlurRadius; i <= kBlurRadius; ++i)
          acc += k[i + kBlurRadius] * img.at(clampi(x + i, 0, w - 1), y, ch);
        tmp.at(x, y, ch) = static_cast<float>(acc);
      }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int i = -kBlurRadius; i <= kBlurRadius; ++i)
          acc += k[i + kBlurRadius] * tmp.at(x, clampi(y + i, 0, h - 1), ch);
        out.at(x, y, ch) = static_cast<float>(acc);
      }
  return out;
}

// Adjoint of gaussian_blur5 (scatter with the same kernel, border clamps
// accumulate into the edge pixels).
ImageF gaussian_blur5_adjoint(const ImageF& up) {
  const auto& k = blur_kernel();
  const int w = up.width, h = up.height, c = up.channels;
  ImageF tmp(w, h, c), out(w, h, c);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch) {
        const double g = up.at(x, y, ch);
        if (g == 0.0) continue;
        for (int i = -kBlurRadius; i <= kBlurRadius; ++i)
          tmp.at(x, clampi(y + i, 0, h - 1), ch) += static_cast<float>(k[i + kBlurRadius] * g);
      }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int ch = 0; ch < c; ++ch) {
        const double g = tmp.at(x, y, ch);
        if (g == 0.0) continue;
        for (int i = -kBlurRadius; i <= kBlurRadius; ++i)
          out.at(clampi(x + i, 0, w - 1), y, ch) += static_cast<float>(k[i + kBlurRadius] * g);
      }
  return out;
}

constexpr double kLumR = 0.299, kLumG = 0.587, kLumB = 0.114;

// Sobel responses with replicated borders.
void sobel(const ImageF& lum, ImageF& gx, ImageF& gy) {
  const int w = lum.width, h = lum.height;
  gx = ImageF(w, h, 1);
  gy = ImageF(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      auto px = [&](int dx, int dy) {
        return static_cast<double>(lum.at(clampi(x + dx, 0, w - 1), clampi(y + dy, 0, h - 1)));
      };
      gx.at(x, y) = static_cast<float>(
          (px(1, -1) + 2 * px(1, 0) + px(1, 1)) - (px(-1, -1) + 2 * px(-1, 0) + px(-1, 1)));
      gy.at(x, y) = static_cast<float>(
          (px(-1, 1) + 2 * px(0, 1) + px(1, 1)) - (px(-1, -1) + 2 * px(0, -1) + px(1, -1)));
    }
}

double percentile99(const ImageF& mag) {
  std::vector<float> v(mag.data);
  const size_t idx = std::min(v.size() - 1, static_cast<size_t>(kPercentile * (v.size() - 1)));
  std::nth_element(v.begin(), v.begin() + idx, v.end());
  return std::max(static_cast<double>(v[idx]), 1e-8);
}

struct EdgeState {
  ImageF blurred;  // 3ch
  ImageF gx, gy, mag;
  double norm;
};

EdgeState edge_forward(const ImageF& rgb) {
  if (rgb.channels != 3) throw std::invalid_argument("edge_map expects a 3-channel image");
  EdgeState s;
  s.blurred = gaussian_blur5(rgb);
  ImageF lum(rgb.width, rgb.height, 1);
  for (int y = 0; y < rgb.height; ++y)
    for (int x = 0; x < rgb.width; ++x)
      lum.at(x, y) = static_cast<float>(kLumR * s.blurred.at(x, y, 0) +
                                        kLumG * s.blurred.at(x, y, 1) +
                                        kLumB * s.blurred.at(x, y, 2));
  sobel(lum, s.gx, s.gy);
  s.mag = ImageF(rgb.width, rgb.height, 1);
  for (size_t i = 0; i < s.mag.data.size(); ++i) {
    const double gx = s.gx.data[i], gy = s.gy.data[i];
    s.mag.data[i] = static_cast<float>(std::sqrt(gx * gx + gy * gy + kMagEps * kMagEps));
  }
  s.norm = percentile99(s.mag);
  return s;
}

}  // namespace

ImageF edge_map(const ImageF& rgb) {
  EdgeState s = edge_forward(rgb);
  ImageF out(rgb.width, rgb.height, 1);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = static_cast<float>(std::clamp(s.mag.data[i] / s.norm, 0.0, 1.0));
  return out;
}

ImageF edge_map_backward(const ImageF& rgb, const ImageF& upstream) {
  EdgeState s = edge_forward(rgb);
  const int w = rgb.width, h = rgb.height;

  // d/d(gx,gy): clamp gate, constant 1/norm, magnitude quotient.
  ImageF dgx(w, h, 1), dgy(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double m = s.mag.at(x, y);
      if (m / s.norm >= 1.0) continue;  // clamped, zero gradient
      const double g = upstream.at(x, y) / (s.norm * m);
      dgx.at(x, y) = static_cast<float>(g * s.gx.at(x, y));
      dgy.at(x, y) = static_cast<float>(g * s.gy.at(x, y));
    }

  // Adjoint Sobel: scatter each response gradient back onto its 3x3 support.
  ImageF dlum(w, h, 1);
  static const int ox[3] = {-1, 0, 1};
  static const double wx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};   // [row dy][col dx]
  static const double wy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double gx = dgx.at(x, y), gy = dgy.at(x, y);
      if (gx == 0.0 && gy == 0.0) continue;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          const double wsum = wx[r][c] * gx + wy[r][c] * gy;
          if (wsum == 0.0) continue;
          dlum.at(clampi(x + ox[c], 0, w - 1), clampi(y + ox[r], 0, h - 1)) +=
              static_cast<float>(wsum);
        }
    }

  ImageF dblur(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double g = dlum.at(x, y);
      dblur.at(x, y, 0) = static_cast<float>(g * kLumR);
      dblur.at(x, y, 1) = static_cast<float>(g * kLumG);
      dblur.at(x, y, 2) = static_cast<float>(g * kLumB);
    }
  return gaussian_blur5_adjoint(dblur);
}

ImageF mask_dilate(const ImageF& mask, double radius_px) {
  if (radius_px < 0) throw std::invalid_argument("dilation radius must be >= 0");
  const int r = static_cast<int>(std::floor(radius_px));
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= radius_px * radius_px) offsets.emplace_back(dx, dy);

  const int w = mask.width, h = mask.height;
  ImageF out(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (mask.at(x, y) <= 0.5f) continue;
      for (auto [dx, dy] : offsets) {
        const int xx = x + dx, yy = y + dy;
        if (xx >= 0 && xx < w && yy >= 0 && yy < h) out.at(xx, yy) = 1.0f;
      }
    }
  return out;
}

ImageF decode_depth(const Image16& raw, double meters_per_unit) {
  if (meters_per_unit <= 0) throw std::invalid_argument("depth scale must be > 0");
  ImageF out(raw.width, raw.height, 1);
  for (int y = 0; y < raw.height; ++y)
    for (int x = 0; x < raw.width; ++x)
      out.at(x, y) = static_cast<float>(raw.at(x, y) * meters_per_unit);
  return out;
}

namespace {

// Area-average resample with exact fractional-overlap weights; `zero_poison`
// makes any window containing the depth sentinel produce 0.
ImageF area_resample(const ImageF& img, int ow, int oh, bool zero_poison) {
  const double sx = static_cast<double>(img.width) / ow;
  const double sy = static_cast<double>(img.height) / oh;
  ImageF out(ow, oh, img.channels);
  for (int y = 0; y < oh; ++y) {
    const double y0 = y * sy, y1 = (y + 1) * sy;
    for (int x = 0; x < ow; ++x) {
      const double x0 = x * sx, x1 = (x + 1) * sx;
      for (int c = 0; c < img.channels; ++c) {
        double acc = 0.0, wsum = 0.0;
        bool poisoned = false;
        for (int yy = static_cast<int>(y0); yy < static_cast<int>(std::ceil(y1)); ++yy) {
          const double wy = std::min<double>(yy + 1, y1) - std::max<double>(yy, y0);
          if (wy <= 0) continue;
          for (int xx = static_cast<int>(x0); xx < static_cast<int>(std::ceil(x1)); ++xx) {
            const double wx = std::min<double>(xx + 1, x1) - std::max<double>(xx, x0);
            if (wx <= 0) continue;
            const float v = img.at(clampi(xx, 0, img.width - 1), clampi(yy, 0, img.height - 1), c);
            if (zero_poison && v == 0.0f && wx * wy > 1e-12) poisoned = true;
            acc += wx * wy * v;
            wsum += wx * wy;
          }
        }
        out.at(x, y, c) = poisoned ? 0.0f : static_cast<float>(acc / wsum);
      }
    }
  }
  return out;
}

ImageF bilinear_resample(const ImageF& img, int ow, int oh) {
  ImageF out(ow, oh, img.channels);
  const double sx = static_cast<double>(img.width) / ow;
  const double sy = static_cast<double>(img.height) / oh;
  for (int y = 0; y < oh; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    const int y0 = clampi(static_cast<int>(std::floor(fy)), 0, img.height - 1);
    const int y1 = clampi(y0 + 1, 0, img.height - 1);
    const double ty = std::clamp(fy - y0, 0.0, 1.0);
    for (int x = 0; x < ow; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const int x0 = clampi(static_cast<int>(std::floor(fx)), 0, img.width - 1);
      const int x1 = clampi(x0 + 1, 0, img.width - 1);
      const double tx = std::clamp(fx - x0, 0.0, 1.0);
      for (int c = 0; c < img.channels; ++c) {
        const double top = (1 - tx) * img.at(x0, y0, c) + tx * img.at(x1, y0, c);
        const double bot = (1 - tx) * img.at(x0, y1, c) + tx * img.at(x1, y1, c);
        out.at(x, y, c) = static_cast<float>((1 - ty) * top + ty * bot);
      }
    }
  }
  return out;
}

void check_factor(double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("resize factor must be > 0");
}

}  // namespace

ImageF resize(const ImageF& img, double factor) {
  check_factor(factor);
  if (factor == 1.0) return img;
  const int ow = std::max(1, static_cast<int>(std::lround(img.width * factor)));
  const int oh = std::max(1, static_cast<int>(std::lround(img.height * factor)));
  if (factor < 1.0) return area_resample(img, ow, oh, false);
  return bilinear_resample(img, ow, oh);
}

ImageF resize_depth(const ImageF& depth, double factor) {
  check_factor(factor);
  if (factor == 1.0) return depth;
  const int ow = std::max(1, static_cast<int>(std::lround(depth.width * factor)));
  const int oh = std::max(1, static_cast<int>(std::lround(depth.height * factor)));
  if (factor < 1.0) return area_resample(depth, ow, oh, true);
  return bilinear_resample(depth, ow, oh);  // upscale keeps sentinels only approximately
}

CameraIntrinsics scale_intrinsics(const CameraIntrinsics& K, double factor) {
  CameraIntrinsics out = K;
  out.fx = K.fx * factor;
  out.fy = K.fy * factor;
  // Pixel centers sit at half-integer offsets, so the principal point picks up
  // a (factor-1)/2 shift rather than a pure scale.
  out.cx = (K.cx + 0.5) * factor - 0.5;
  out.cy = (K.cy + 0.5) * factor - 0.5;
  out.width = std::max(1, static_cast<int>(std::lround(K.width * factor)));
  out.height = std::max(1, static_cast<int>(std::lround(K.height * factor)));
  return out;
}

}  // namespace diffpose
