#pragma once

#include <Eigen/Core>
#include <stdexcept>

namespace diffpose {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

struct DegenerateQuaternionError : std::runtime_error {
  DegenerateQuaternionError() : std::runtime_error("quaternion norm is (near) zero") {}
};

struct BehindCameraError : std::runtime_error {
  BehindCameraError() : std::runtime_error("point has non-positive depth") {}
};

/// Rotation quaternion, stored (w, x, y, z).
struct Quaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  Quaternion() = default;
  Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  double norm() const;
  Vec4 coeffs() const { return Vec4(w, x, y, z); }
  static Quaternion from_coeffs(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

  /// Rotation about a unit axis by `angle_rad`.
  static Quaternion from_axis_angle(const Vec3& axis, double angle_rad);
};

Quaternion quat_normalize(const Quaternion& q);
Quaternion quat_multiply(const Quaternion& a, const Quaternion& b);
Quaternion quat_conjugate(const Quaternion& q);

/// Rotation matrix of q / |q|.
Mat3 quat_to_matrix(const Quaternion& q);

/// Geodesic angle (radians) between the rotations of two quaternions,
/// insensitive to the q / -q sign ambiguity.
double quat_angle_between(const Quaternion& a, const Quaternion& b);

/// d(R(q/|q|) v) / d(w,x,y,z), evaluated at the raw (possibly non-unit) q.
/// Columns are the partials w.r.t. each raw quaternion component.
Eigen::Matrix<double, 3, 4> rotate_point_jacobian(const Quaternion& q, const Vec3& v);

/// Rigid camera-from-object transform: p_cam = R(q) p_obj + t.
struct Pose {
  Quaternion rotation;
  Vec3 translation = Vec3::Zero();

  Pose() = default;
  Pose(const Quaternion& q, const Vec3& t) : rotation(q), translation(t) {}
  static Pose identity() { return {}; }
};

Vec3 pose_apply(const Pose& pose, const Vec3& p);
Pose pose_compose(const Pose& a, const Pose& b);
Pose pose_inverse(const Pose& a);

struct PoseApplyJacobian {
  Eigen::Matrix<double, 3, 4> d_quaternion;  // w.r.t. raw quaternion components
  Mat3 d_translation;                        // identity, kept for symmetry
};

PoseApplyJacobian pose_apply_jacobian(const Pose& pose, const Vec3& p);

struct CameraIntrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;

  bool valid() const {
    return fx > 0 && fy > 0 && cx > 0 && cx < width && cy > 0 && cy < height;
  }
};

/// Pinhole projection to continuous pixel coordinates. Throws BehindCameraError
/// if any z <= 1e-6 m.
Vec2 project(const CameraIntrinsics& K, const Vec3& p_cam);

/// d(u,v)/d(x,y,z) at p_cam. No depth check; callers filter first.
Eigen::Matrix<double, 2, 3> project_jacobian(const CameraIntrinsics& K, const Vec3& p_cam);

}  // namespace diffpose
