#pragma once

#include <array>
#include <string>
#include <vector>

#include "diffpose/geometry.hpp"
#include "diffpose/image.hpp"

namespace diffpose {

struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Triangle mesh with per-corner texture coordinates and a single diffuse
/// albedo texture (linear [0,1]). Object-frame positions are meters.
struct TexturedMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;       // position indices
  std::vector<std::array<Vec2, 3>> corner_uvs;     // one uv per triangle corner
  ImageF texture;                                  // H x W x 3
  double diameter = 0.0;                           // max pairwise vertex distance (subsampled)

  size_t triangle_count() const { return triangles.size(); }
  size_t vertex_count() const { return vertices.size(); }
};

/// Index check, degenerate-triangle check (area > 1e-12 m^2), diameter fill-in.
/// Throws MeshError on violations.
void validate_and_finalize(TexturedMesh& mesh);

/// Every-k-th vertex subsample, at most `max_points`, deterministic.
std::vector<Vec3> subsample_vertices(const TexturedMesh& mesh, size_t max_points);

/// Wavefront OBJ with v/vt/f records; polygons are fan-triangulated. The
/// texture is loaded from `texture_png` (sRGB decoded to linear).
TexturedMesh load_textured_mesh(const std::string& obj_path, const std::string& texture_png);

/// OBJ loaded with positions/uvs only; the caller supplies the texture.
TexturedMesh load_obj(const std::string& obj_path);

void save_obj(const std::string& obj_path, const TexturedMesh& mesh);

}  // namespace diffpose
