#include "diffpose/geometry.hpp"

#include <cmath>

namespace diffpose {

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle_rad) {
  const double half = 0.5 * angle_rad;
  const double s = std::sin(half);
  return {std::cos(half), s * axis.x(), s * axis.y(), s * axis.z()};
}

Quaternion quat_normalize(const Quaternion& q) {
  const double n = q.norm();
  if (n <= 1e-12) throw DegenerateQuaternionError();
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion quat_conjugate(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

Mat3 quat_to_matrix(const Quaternion& q_raw) {
  const Quaternion q = quat_normalize(q_raw);
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Mat3 R;
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

double quat_angle_between(const Quaternion& a, const Quaternion& b) {
  const Quaternion an = quat_normalize(a), bn = quat_normalize(b);
  double dot = an.w * bn.w + an.x * bn.x + an.y * bn.y + an.z * bn.z;
  dot = std::min(1.0, std::abs(dot));
  return 2.0 * std::acos(dot);
}

namespace {

// dR/dq_k for a UNIT quaternion, then chained through the normalization map.
void unit_rotation_derivatives(const Quaternion& q, Mat3 dR[4]) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  dR[0] << 0, -2 * z, 2 * y,
      2 * z, 0, -2 * x,
      -2 * y, 2 * x, 0;
  dR[1] << 0, 2 * y, 2 * z,
      2 * y, -4 * x, -2 * w,
      2 * z, 2 * w, -4 * x;
  dR[2] << -4 * y, 2 * x, 2 * w,
      2 * x, 0, 2 * z,
      -2 * w, 2 * z, -4 * y;
  dR[3] << -4 * z, -2 * w, 2 * x,
      2 * w, -4 * z, 2 * y,
      2 * x, 2 * y, 0;
}

}  // namespace

Eigen::Matrix<double, 3, 4> rotate_point_jacobian(const Quaternion& q_raw, const Vec3& v) {
  const double n = q_raw.norm();
  if (n <= 1e-12) throw DegenerateQuaternionError();
  const Quaternion q = quat_normalize(q_raw);

  Mat3 dR[4];
  unit_rotation_derivatives(q, dR);

  Eigen::Matrix<double, 3, 4> J_unit;
  for (int k = 0; k < 4; ++k) J_unit.col(k) = dR[k] * v;

  // q_hat = q_raw / n, so d q_hat / d q_raw = (I - q_hat q_hat^T) / n.
  const Vec4 qh = q.coeffs();
  const Eigen::Matrix4d P = (Eigen::Matrix4d::Identity() - qh * qh.transpose()) / n;
  return J_unit * P;
}

Vec3 pose_apply(const Pose& pose, const Vec3& p) {
  return quat_to_matrix(pose.rotation) * p + pose.translation;
}

PoseApplyJacobian pose_apply_jacobian(const Pose& pose, const Vec3& p) {
  PoseApplyJacobian J;
  J.d_quaternion = rotate_point_jacobian(pose.rotation, p);
  J.d_translation = Mat3::Identity();
  return J;
}

Pose pose_compose(const Pose& a, const Pose& b) {
  Pose out;
  out.rotation = quat_normalize(quat_multiply(a.rotation, b.rotation));
  out.translation = quat_to_matrix(a.rotation) * b.translation + a.translation;
  return out;
}

Pose pose_inverse(const Pose& a) {
  Pose out;
  out.rotation = quat_normalize(quat_conjugate(a.rotation));
  out.translation = -(quat_to_matrix(out.rotation) * a.translation);
  return out;
}

Vec2 project(const CameraIntrinsics& K, const Vec3& p) {
  if (p.z() <= 1e-6) throw BehindCameraError();
  return {K.fx * p.x() / p.z() + K.cx, K.fy * p.y() / p.z() + K.cy};
}

Eigen::Matrix<double, 2, 3> project_jacobian(const CameraIntrinsics& K, const Vec3& p) {
  const double iz = 1.0 / p.z();
  Eigen::Matrix<double, 2, 3> J;
  J << K.fx * iz, 0, -K.fx * p.x() * iz * iz,
      0, K.fy * iz, -K.fy * p.y() * iz * iz;
  return J;
}

}  // namespace diffpose
