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

#ifndef RADARPROP_EVALUATION_HPP_
#define RADARPROP_EVALUATION_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "radarprop/box.hpp"
#include "radarprop/dataset.hpp"
#include "radarprop/proposals.hpp"

namespace radarprop {

/// Intersection over union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Largest IOU between `gt` and any of `candidates`; 0 when there are none.
double best_iou(const BoundingBox& gt, std::span<const BoundingBox> candidates);

struct AreaRange {
  std::string name;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double area) const { return area >= lo && area < hi; }
};

struct EvalConfig {
  std::vector<double> iou_thresholds{0.5, 0.75};
  std::vector<AreaRange> area_ranges{
      {"small", 0.0, 32.0 * 32.0},
      {"medium", 32.0 * 32.0, 96.0 * 96.0},
      {"large", 96.0 * 96.0, std::numeric_limits<double>::infinity()}};

  /// Thresholds must be strictly increasing in (0, 1]; area ranges must tile
  /// [0, inf) in order. Throws std::invalid_argument.
  void validate() const;
};

struct ThresholdRecall {
  double threshold = 0.0;
  std::size_t recalled = 0;
  double recall = 0.0;
};

struct AreaRecall {
  double threshold = 0.0;
  std::string area;
  std::size_t count = 0;
  std::size_t recalled = 0;
  double recall = 0.0;  // 0 when the class has no ground truth
};

struct AreaCount {
  std::string area;
  std::size_t count = 0;
};

struct EvalReport {
  std::size_t frames = 0;
  std::size_t total_gt = 0;
  double mean_best_iou = 0.0;
  std::vector<ThresholdRecall> recall_at;
  std::vector<AreaRecall> recall_by_area;  // threshold-major
  std::vector<AreaCount> counts;

  /// Recall at an exact configured threshold; throws std::out_of_range.
  double recall(double threshold) const;
};

/// Proposal recall against ground truth. Proposal sets are matched to frames
/// by frame_id; a missing, duplicated or unmatched frame_id throws
/// std::invalid_argument. A GT box is recalled at t when any proposal in its
/// frame reaches IOU >= t (no one-to-one matching).
EvalReport evaluate(std::span<const ProposalSet> proposals,
                    std::span<const Frame> frames, const EvalConfig& cfg = {});

std::string eval_report_to_json(const EvalReport& report);
/// Header plus one row per (threshold, area class).
std::string eval_report_to_csv(const EvalReport& report);

}  // namespace radarprop

#endif  // RADARPROP_EVALUATION_HPP_
