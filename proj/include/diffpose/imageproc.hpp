#pragma once

#include "diffpose/geometry.hpp"
#include "diffpose/image.hpp"

namespace diffpose {

/// Edge-strength map: 5x5 Gaussian blur (sigma 1.4 px) -> luminance -> Sobel
/// magnitude -> division by the 99th-percentile magnitude, clamped to [0,1].
ImageF edge_map(const ImageF& rgb);

/// Adjoint of edge_map. `upstream` is dLoss/d(edge pixel); returns
/// dLoss/d(rgb pixel). The percentile normalizer is treated as a constant.
ImageF edge_map_backward(const ImageF& rgb, const ImageF& upstream);

/// Morphological dilation with a disc structuring element (dx^2+dy^2 <= r^2).
ImageF mask_dilate(const ImageF& mask, double radius_px);

/// raw * meters_per_unit; 0 stays 0 (invalid sentinel).
ImageF decode_depth(const Image16& raw, double meters_per_unit = 0.001);

/// Area-average downscale / bilinear upscale. factor in (0, ... ]; 1 is identity.
ImageF resize(const ImageF& img, double factor);

/// Depth-aware resize: any source window containing the 0 sentinel yields 0.
ImageF resize_depth(const ImageF& depth, double factor);

/// Intrinsics matching a resize by `factor` (pixel-center convention).
CameraIntrinsics scale_intrinsics(const CameraIntrinsics& K, double factor);

}  // namespace diffpose
