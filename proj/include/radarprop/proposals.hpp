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

#ifndef RADARPROP_PROPOSALS_HPP_
#define RADARPROP_PROPOSALS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radarprop/box.hpp"
#include "radarprop/geometry.hpp"

namespace radarprop {

/// Which point of an anchor coincides with its POI.
enum class Alignment { kCentered, kLeft, kRight, kBottom };

std::string_view to_string(Alignment a);
std::optional<Alignment> alignment_from_string(std::string_view s);

struct AnchorConfig {
  std::vector<double> sizes{32.0, 64.0, 128.0, 256.0};
  std::vector<double> aspect_ratios{0.5, 1.0, 2.0};
  std::vector<Alignment> alignments{Alignment::kCentered, Alignment::kRight,
                                    Alignment::kBottom, Alignment::kLeft};

  /// Throws std::invalid_argument on non-positive sizes or ratios, an empty
  /// list, or a duplicated (size, ratio, alignment) triple.
  void validate() const;
};

struct AnchorTemplate {
  double width = 0.0;
  double height = 0.0;
  Alignment alignment = Alignment::kCentered;

  bool operator==(const AnchorTemplate&) const = default;
};

/// Distance-compensation law S(d) = alpha / d + beta.
struct ScaleParams {
  double alpha = 0.0;  // pixel * meters
  double beta = 1.0;

  bool operator==(const ScaleParams&) const = default;
};

struct ProposalConfig {
  std::size_t max_proposals = 2000;
  double min_area = 16.0;
  double min_visible_frac = 0.25;
  double d_min = 1.0;
  double d_max = 100.0;

  void validate() const;
};

/// Throws std::invalid_argument unless S(d) > 0 on [d_min, d_max].
void validate_scale(const ScaleParams& params, const ProposalConfig& cfg);

/// One template per (size, ratio, alignment) triple, size-major, then ratio,
/// then alignment in the order listed in the config. Width = size * sqrt(r),
/// height = size / sqrt(r), so every ratio keeps area size^2.
std::vector<AnchorTemplate> anchor_templates(const AnchorConfig& cfg);

/// Scales the template about its alignment point and places that point on
/// the POI. Requires scale > 0.
BoundingBox place_anchor(const AnchorTemplate& tmpl, const PointOfInterest& poi,
                         double scale);

/// alpha / max(d, d_min) + beta.
double scale_factor(double distance, const ScaleParams& params,
                    double d_min = 1.0);

/// Clips a placed anchor to the image and applies the sliver filter. Empty if
/// the clipped box is smaller than min_area or than min_visible_frac of the
/// unclipped area.
std::optional<BoundingBox> clip_proposal(const BoundingBox& box,
                                         const ImageRect& image,
                                         const ProposalConfig& cfg);

struct ProposalSet {
  std::int64_t frame_id = 0;
  std::vector<BoundingBox> boxes;
  std::vector<std::int64_t> source_ids;

  std::size_t size() const { return boxes.size(); }
  bool operator==(const ProposalSet&) const = default;
};

/// Anchors for every POI, scaled by its distance, clipped and capped. Holds the
/// first max_proposals in (POI order, template order). POIs whose scale factor
/// is not positive contribute nothing.
ProposalSet propose(std::span<const PointOfInterest> pois,
                    std::span<const AnchorTemplate> templates,
                    const ScaleParams& params, const ImageRect& image,
                    const ProposalConfig& cfg = {}, std::int64_t frame_id = 0);

ProposalSet propose(std::span<const PointOfInterest> pois,
                    const AnchorConfig& anchors, const ScaleParams& params,
                    const CameraCalibration& calib,
                    const ProposalConfig& cfg = {}, std::int64_t frame_id = 0);

// Proposal JSONL: one {"frame_id", "boxes", "source_ids"} object per line.
std::string proposal_set_to_json_line(const ProposalSet& set);
ProposalSet proposal_set_from_json_line(std::string_view line);
void write_proposals(std::ostream& out, std::span<const ProposalSet> sets);
void save_proposals(const std::string& path, std::span<const ProposalSet> sets);
std::vector<ProposalSet> load_proposals(const std::string& path);

}  // namespace radarprop

#endif  // RADARPROP_PROPOSALS_HPP_
