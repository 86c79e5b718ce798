// Copyright 2026 The radarprop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radarprop/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace radarprop {

CameraCalibration::CameraCalibration(const std::array<double, 12>& h,
                                     int image_width, int image_height)
    : width_(image_width), height_(image_height) {
  for (double c : h) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("projection matrix has non-finite entries");
    }
  }
  h_ = Eigen::Map<const Matrix34>(h.data());
  if (image_width <= 0 || image_height <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  const double det = h_.leftCols<3>().determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw std::invalid_argument("left 3x3 block of projection matrix is singular");
  }
}

CameraCalibration CameraCalibration::pinhole(
    double focal_px, double cx, double cy,
    const Eigen::Matrix3d& camera_from_vehicle,
    const Eigen::Vector3d& camera_center, int image_width, int image_height) {
  Eigen::Matrix3d k;
  k << focal_px, 0.0, cx, 0.0, focal_px, cy, 0.0, 0.0, 1.0;
  Matrix34 rt;
  rt.leftCols<3>() = camera_from_vehicle;
  rt.col(3) = -camera_from_vehicle * camera_center;
  const Matrix34 h = k * rt;
  std::array<double, 12> coeffs{};
  Eigen::Map<Matrix34>(coeffs.data()) = h;
  return CameraCalibration(coeffs, image_width, image_height);
}

std::array<double, 12> CameraCalibration::coefficients() const {
  std::array<double, 12> out{};
  Eigen::Map<Matrix34>(out.data()) = h_;
  return out;
}

Eigen::Vector3d CameraCalibration::camera_center() const {
  return -h_.leftCols<3>().partialPivLu().solve(h_.col(3));
}

bool CameraCalibration::operator==(const CameraCalibration& other) const {
  return width_ == other.width_ && height_ == other.height_ && h_ == other.h_;
}

double detection_distance(const RadarDetection& det) {
  if (det.range) return *det.range;
  return std::hypot(det.position.x, det.position.y);
}

Homogeneous project_point(const VehiclePoint& p, const CameraCalibration& calib) {
  const Eigen::Vector4d hp(p.x, p.y, p.z, 1.0);
  const Eigen::Vector3d img = calib.matrix() * hp;
  return {img.z(), {img.x() / img.z(), img.y() / img.z()}};
}

std::optional<PointOfInterest> project(const RadarDetection& det,
                                       const CameraCalibration& calib,
                                       const ProjectionOptions& opts) {
  const Homogeneous hp = project_point(det.position, calib);
  if (!(hp.w > opts.epsilon_w)) return std::nullopt;

  const double m = opts.margin_px;
  const auto [u, v] = hp.pixel;
  if (u < -m || u > calib.image_width() + m || v < -m ||
      v > calib.image_height() + m) {
    return std::nullopt;
  }
  const double d = detection_distance(det);
  if (!(d > 0.0)) return std::nullopt;
  return PointOfInterest{u, v, d, det.id};
}

std::vector<PointOfInterest> project_frame(std::span<const RadarDetection> dets,
                                           const CameraCalibration& calib,
                                           const ProjectionOptions& opts) {
  std::vector<PointOfInterest> out;
  out.reserve(dets.size());
  for (const auto& det : dets) {
    if (auto poi = project(det, calib, opts)) out.push_back(*poi);
  }
  return out;
}

std::optional<VehiclePoint> backproject(const ImagePoint& pixel, double distance,
                                        const CameraCalibration& calib) {
  // Ray: C + t * D with H * [C + tD; 1] = t * [u; v; 1], so t is the
  // homogeneous scale. Solve |(C + tD).xy| = distance for t > 0.
  const Eigen::Vector3d c = calib.camera_center();
  const Eigen::Vector3d dir =
      calib.matrix().leftCols<3>().partialPivLu().solve(
          Eigen::Vector3d(pixel.u, pixel.v, 1.0));
  const double a = dir.x() * dir.x() + dir.y() * dir.y();
  const double b = 2.0 * (c.x() * dir.x() + c.y() * dir.y());
  const double cc = c.x() * c.x() + c.y() * c.y() - distance * distance;
  if (a == 0.0) return std::nullopt;
  const double disc = b * b - 4.0 * a * cc;
  if (disc < 0.0) return std::nullopt;
  const double t = (-b + std::sqrt(disc)) / (2.0 * a);
  if (!(t > 0.0)) return std::nullopt;
  const Eigen::Vector3d p = c + t * dir;
  return VehiclePoint{p.x(), p.y(), p.z()};
}

}  // namespace radarprop
