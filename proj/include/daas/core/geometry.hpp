#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include <Eigen/Dense>

namespace daas {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

// Local ENU-style frame in meters, z up.
using Position3 = Vector3<double>;
// Velocities share the representation (m/s per axis).
using Velocity3 = Vector3<double>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar euclidean_distance(const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).norm();
}

// Ground-plane (x/y) distance, ignoring altitude.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar horizontal_distance(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  return (a.template head<2>() - b.template head<2>()).norm();
}

template <typename Derived>
typename Derived::Scalar horizontal_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.template head<2>().norm();
}

// Scales the horizontal part of `v` down to `max_horizontal` and clamps the
// vertical component to +/- `max_vertical`.
template <typename Scalar>
Vector3<Scalar> clamp_velocity(const Vector3<Scalar>& v, Scalar max_horizontal, Scalar max_vertical) {
  Vector3<Scalar> out = v;
  const Scalar h = horizontal_norm(v);
  if (h > max_horizontal && h > Scalar(0)) {
    out.template head<2>() *= max_horizontal / h;
  }
  out.z() = std::clamp(v.z(), -max_vertical, max_vertical);
  return out;
}

template <typename Scalar>
Scalar path_length(std::span<const Vector3<Scalar>> points) {
  Scalar total = 0;
  for (std::size_t i = 1; i < points.size(); ++i) total += euclidean_distance(points[i - 1], points[i]);
  return total;
}

template <typename Scalar>
Scalar horizontal_path_length(std::span<const Vector3<Scalar>> points) {
  Scalar total = 0;
  for (std::size_t i = 1; i < points.size(); ++i) total += horizontal_distance(points[i - 1], points[i]);
  return total;
}

// Azimuth of `to` seen from `from`, radians CCW from +x.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar bearing(const Eigen::MatrixBase<DerivedA>& from, const Eigen::MatrixBase<DerivedB>& to) {
  return std::atan2(to.y() - from.y(), to.x() - from.x());
}

inline double wrap_angle(double a) { return std::remainder(a, 2.0 * M_PI); }

}  // namespace daas
