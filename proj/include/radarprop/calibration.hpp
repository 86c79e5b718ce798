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

#ifndef RADARPROP_CALIBRATION_HPP_
#define RADARPROP_CALIBRATION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radarprop/dataset.hpp"
#include "radarprop/proposals.hpp"

namespace radarprop {

/// Evenly spaced axis: `steps` values from lo to hi inclusive. A single-step
/// axis requires lo == hi.
struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;

  double value(int i) const;
  std::vector<double> values() const;
  double step() const { return steps > 1 ? (hi - lo) / (steps - 1) : 0.0; }
};

struct GridSpec {
  AxisRange alpha{0.0, 2000.0, 51};
  AxisRange beta{0.0, 2.0, 41};
  /// One zoom level around the coarse argmax, same step counts.
  bool refine = false;

  /// Checks axis shape and that S(d) >= 0 at every grid point over
  /// [d_min, d_max]. Grid points with S == 0 are allowed; they propose nothing.
  void validate(const ProposalConfig& cfg) const;
};

/// Parameter-independent part of one frame: its ground truth and POIs.
struct CalibrationFrame {
  std::vector<BoundingBox> gt;
  std::vector<PointOfInterest> pois;
  ImageRect image;
};

/// Projects each frame's detections once. Frames without POIs are kept
/// unless `exclude_empty` is set.
std::vector<CalibrationFrame> prepare_calibration_frames(
    const Dataset& dataset, const ProjectionOptions& projection = {},
    bool exclude_empty = false);

/// Sum over frames and GT boxes of the best IOU against the frame's
/// proposals under `params`.
double objective(std::span<const CalibrationFrame> frames, const ScaleParams& params,
                 std::span<const AnchorTemplate> templates,
                 const ProposalConfig& cfg = {});

struct GridResult {
  std::vector<double> alpha_values;
  std::vector<double> beta_values;
  std::vector<double> objectives;  // row-major, alpha rows by beta columns
  ScaleParams best;
  double objective = 0.0;

  double at(std::size_t ia, std::size_t ib) const {
    return objectives[ia * beta_values.size() + ib];
  }
};

struct CalibrationReport {
  ScaleParams best;
  double objective = 0.0;
  GridResult grid;
  std::optional<GridResult> refined;
  std::size_t frames_used = 0;
  std::size_t total_gt = 0;
};

struct SearchOptions {
  unsigned threads = 1;
};

/// Exhaustive grid search. Ties go to the smallest alpha, then the smallest
/// beta. Throws std::invalid_argument on an empty frame list or invalid grid.
CalibrationReport grid_search(std::span<const CalibrationFrame> frames,
                              const GridSpec& grid,
                              std::span<const AnchorTemplate> templates,
                              const ProposalConfig& cfg = {},
                              const SearchOptions& opts = {});

CalibrationReport grid_search(const Dataset& dataset, const GridSpec& grid,
                              const AnchorConfig& anchors,
                              const ProposalConfig& cfg = {},
                              const SearchOptions& opts = {},
                              bool exclude_empty = false);

std::string calibration_report_to_json(const CalibrationReport& report);

}  // namespace radarprop

#endif  // RADARPROP_CALIBRATION_HPP_
