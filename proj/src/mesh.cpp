#include "diffpose/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "diffpose/image_io.hpp"

namespace diffpose {

void validate_and_finalize(TexturedMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  if (n < 3 || mesh.triangles.empty()) throw MeshError("mesh needs >= 3 vertices and >= 1 triangle");
  if (mesh.corner_uvs.size() != mesh.triangles.size())
    throw MeshError("corner uv count does not match triangle count");

  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
      if (tri[k] < 0 || tri[k] >= n) throw MeshError("triangle index out of range");
    const Vec3 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    const double area = 0.5 * ((b - a).cross(c - a)).norm();
    if (area <= 1e-12) throw MeshError("degenerate triangle " + std::to_string(t));
  }

  const auto pts = subsample_vertices(mesh, 1024);
  double best = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, (pts[i] - pts[j]).squaredNorm());
  mesh.diameter = std::sqrt(best);
}

std::vector<Vec3> subsample_vertices(const TexturedMesh& mesh, size_t max_points) {
  const size_t n = mesh.vertices.size();
  const size_t stride = (n + max_points - 1) / max_points;
  std::vector<Vec3> out;
  out.reserve(std::min(n, max_points));
  for (size_t i = 0; i < n; i += std::max<size_t>(1, stride)) out.push_back(mesh.vertices[i]);
  return out;
}

namespace {

// "3/7", "3//5", "3/7/5", or "3"; returns position and uv indices (1-based,
// may be negative per OBJ spec), uv = 0 when absent.
void parse_face_corner(const std::string& token, long& vi, long& ti) {
  vi = ti = 0;
  size_t first = token.find('/');
  vi = std::strtol(token.c_str(), nullptr, 10);
  if (first == std::string::npos) return;
  const std::string rest = token.substr(first + 1);
  if (!rest.empty() && rest[0] != '/') ti = std::strtol(rest.c_str(), nullptr, 10);
}

int resolve_index(long idx, size_t count) {
  if (idx > 0) return static_cast<int>(idx - 1);
  if (idx < 0) return static_cast<int>(count + idx);
  return -1;
}

}  // namespace

TexturedMesh load_obj(const std::string& obj_path) {
  std::ifstream f(obj_path);
  if (!f) throw MeshError("cannot open OBJ: " + obj_path);

  TexturedMesh mesh;
  std::vector<Vec2> uvs;
  std::string line;
  while (std::getline(f, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) throw MeshError("bad vertex record: " + line);
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "vt") {
      double u, v;
      if (!(ss >> u >> v)) throw MeshError("bad uv record: " + line);
      uvs.emplace_back(u, v);
    } else if (tag == "f") {
      std::vector<int> vi, ti;
      std::string tok;
      while (ss >> tok) {
        long v, t;
        parse_face_corner(tok, v, t);
        vi.push_back(resolve_index(v, mesh.vertices.size()));
        ti.push_back(resolve_index(t, uvs.size()));
      }
      if (vi.size() < 3) throw MeshError("face with fewer than 3 corners: " + line);
      for (size_t k = 2; k < vi.size(); ++k) {
        mesh.triangles.push_back({vi[0], vi[k - 1], vi[k]});
        std::array<Vec2, 3> corner{};
        const int ids[3] = {ti[0], ti[k - 1], ti[k]};
        for (int c = 0; c < 3; ++c) {
          if (ids[c] >= 0 && ids[c] < static_cast<int>(uvs.size()))
            corner[c] = uvs[ids[c]];
          else
            corner[c] = Vec2(0.0, 0.0);
        }
        mesh.corner_uvs.push_back(corner);
      }
    }
  }
  return mesh;
}

TexturedMesh load_textured_mesh(const std::string& obj_path, const std::string& texture_png) {
  TexturedMesh mesh = load_obj(obj_path);
  ImageF tex = load_png_color(texture_png);
  if (tex.channels == 1) {
    ImageF rgb(tex.width, tex.height, 3);
    for (int y = 0; y < tex.height; ++y)
      for (int x = 0; x < tex.width; ++x)
        for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = tex.at(x, y);
    tex = std::move(rgb);
  }
  mesh.texture = std::move(tex);
  validate_and_finalize(mesh);
  return mesh;
}

void save_obj(const std::string& obj_path, const TexturedMesh& mesh) {
  std::ofstream f(obj_path);
  if (!f) throw MeshError("cannot open OBJ for writing: " + obj_path);

  char buf[256];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    f << buf;
  }
  // Per-corner uvs are written verbatim, three per face.
  for (const auto& uv : mesh.corner_uvs)
    for (int c = 0; c < 3; ++c) {
      std::snprintf(buf, sizeof(buf), "vt %.17g %.17g\n", uv[c].x(), uv[c].y());
      f << buf;
    }
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    f << "f";
    for (int c = 0; c < 3; ++c) f << " " << tri[c] + 1 << "/" << 3 * t + c + 1;
    f << "\n";
  }
}

}  // namespace diffpose
