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

#ifndef RADARPROP_GEOMETRY_HPP_
#define RADARPROP_GEOMETRY_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "radarprop/box.hpp"

namespace radarprop {

/// Meters in the vehicle frame: x forward, y left, z up.
struct VehiclePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const VehiclePoint&) const = default;
};

/// Continuous pixel coordinates. May lie outside the image.
struct ImagePoint {
  double u = 0.0;
  double v = 0.0;
};

/// One radar return. `range` is optional; when absent the horizontal norm of
/// the position stands in for it.
struct RadarDetection {
  VehiclePoint position;
  std::optional<double> range;
  double range_rate = 0.0;
  std::int64_t id = 0;

  bool operator==(const RadarDetection&) const = default;
};

/// Radar detection mapped into the image, carrying its distance.
struct PointOfInterest {
  double u = 0.0;
  double v = 0.0;
  double distance = 0.0;
  std::int64_t source_id = 0;

  bool operator==(const PointOfInterest&) const = default;
};

/// 3x4 projection matrix (row-major) plus image size. Construction validates
/// that the left 3x3 block is invertible and the image dimensions positive;
/// violations throw std::invalid_argument.
class CameraCalibration {
 public:
  using Matrix34 = Eigen::Matrix<double, 3, 4, Eigen::RowMajor>;

  CameraCalibration(const std::array<double, 12>& h, int image_width,
                    int image_height);

  /// Pinhole camera: intrinsics (focal, principal point) composed with a
  /// rigid vehicle-to-camera transform given by a rotation and the camera
  /// center in vehicle coordinates.
  static CameraCalibration pinhole(double focal_px, double cx, double cy,
                                   const Eigen::Matrix3d& camera_from_vehicle,
                                   const Eigen::Vector3d& camera_center,
                                   int image_width, int image_height);

  const Matrix34& matrix() const { return h_; }
  std::array<double, 12> coefficients() const;
  int image_width() const { return width_; }
  int image_height() const { return height_; }
  ImageRect image_rect() const { return {width_, height_}; }

  /// Camera center in vehicle coordinates (right null vector of H).
  Eigen::Vector3d camera_center() const;

  bool operator==(const CameraCalibration& other) const;

 private:
  Matrix34 h_;
  int width_;
  int height_;
};

struct ProjectionOptions {
  double epsilon_w = 1e-6;
  double margin_px = 0.0;
};

/// Distance attached to a detection's POI: reported range when present,
/// otherwise the horizontal norm of the position.
double detection_distance(const RadarDetection& det);

/// Homogeneous scale w and dehomogenized pixel of a vehicle point. Does no
/// visibility filtering.
struct Homogeneous {
  double w = 0.0;
  ImagePoint pixel;
};
Homogeneous project_point(const VehiclePoint& p, const CameraCalibration& calib);

/// Maps a detection into the image. Empty when the point is at or behind the
/// camera plane (w <= epsilon_w), when it lands outside the image expanded by
/// margin_px, or when its distance is not positive.
std::optional<PointOfInterest> project(const RadarDetection& det,
                                       const CameraCalibration& calib,
                                       const ProjectionOptions& opts = {});

/// Order-preserving filter-map of project().
std::vector<PointOfInterest> project_frame(std::span<const RadarDetection> dets,
                                           const CameraCalibration& calib,
                                           const ProjectionOptions& opts = {});

/// Point on the viewing ray through `pixel` whose horizontal distance from the
/// vehicle origin equals `distance`, in front of the camera. Empty when no
/// such point exists.
std::optional<VehiclePoint> backproject(const ImagePoint& pixel, double distance,
                                        const CameraCalibration& calib);

}  // namespace radarprop

#endif  // RADARPROP_GEOMETRY_HPP_
