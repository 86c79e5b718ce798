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

#ifndef RADARPROP_DATASET_HPP_
#define RADARPROP_DATASET_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "radarprop/box.hpp"
#include "radarprop/geometry.hpp"
#include "radarprop/proposals.hpp"

namespace radarprop {

enum class ObjectClass { kCar, kTruck, kPerson, kMotorcycle, kBicycle, kBus };

inline constexpr int kNumObjectClasses = 6;

std::string_view to_string(ObjectClass c);
std::optional<ObjectClass> object_class_from_string(std::string_view s);

struct Frame {
  std::int64_t frame_id = 0;
  std::vector<RadarDetection> detections;
  std::vector<BoundingBox> gt_boxes;
  std::vector<ObjectClass> gt_classes;
  std::string calib_ref;

  bool operator==(const Frame&) const = default;
};

using CalibrationMap = std::map<std::string, CameraCalibration, std::less<>>;

struct Dataset {
  std::vector<Frame> frames;
  CalibrationMap calibrations;

  const CameraCalibration& calibration_for(const Frame& frame) const;
};

/// Relative tolerance between a detection's reported range and the
/// horizontal norm of its position.
inline constexpr double kRangeTolerance = 1e-6;

/// Sidecar path for a dataset file: the extension is replaced by
/// ".calib.json" ("scenes.jsonl" -> "scenes.calib.json").
std::string calibration_sidecar_path(const std::string& dataset_path);

/// Reads a frame JSONL file plus its calibration sidecar. A missing sidecar
/// counts as an empty calibration map. Throws ParseError, ValidationError or
/// MissingCalibrationError naming the first offending line.
Dataset load_dataset(const std::string& path,
                     std::optional<std::string> calib_path = std::nullopt);

/// Writes frames as JSONL and calibrations as the sidecar JSON. Field order
/// is fixed.
void save_dataset(const Dataset& dataset, const std::string& path,
                  std::optional<std::string> calib_path = std::nullopt);

std::string frame_to_json_line(const Frame& frame);
Frame frame_from_json_line(std::string_view line);
std::string calibrations_to_json(const CalibrationMap& calibs);
CalibrationMap calibrations_from_json(std::string_view text);

/// Checks Frame invariants; throws ValidationError.
void validate_frame(const Frame& frame);

struct SynthConfig {
  int n_frames = 100;
  int pois_min = 1;
  int pois_max = 8;
  double d_min = 5.0;
  double d_max = 60.0;
  ScaleParams true_params{40.0, 0.4};
  double poi_jitter_px = 0.0;
  double size_jitter = 0.0;  // std of the multiplicative GT size factor
  std::uint64_t seed = 0;
  double radar_height = 0.5;

  // Camera model used for the emitted calibration.
  int image_width = 1600;
  int image_height = 900;
  double focal_px = 1000.0;
  double camera_height = 1.5;
  std::string calib_ref = "front";

  AnchorConfig anchors;
  ProposalConfig proposal;

  void validate() const;
};

/// Forward-camera calibration used by the generator.
CameraCalibration synth_calibration(const SynthConfig& cfg);

/// Deterministic synthetic scenes. Each object is a radar return at a sampled
/// range and azimuth; its ground truth box is an anchor template scaled by the
/// true parameters and placed at the projected return. With zero noise every
/// ground truth box is exactly one of the proposals propose() emits under the
/// true parameters.
Dataset synthesize(const SynthConfig& cfg);

}  // namespace radarprop

#endif  // RADARPROP_DATASET_HPP_
