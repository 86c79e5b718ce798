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

#include "radarprop/proposals.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "radarprop/error.hpp"

namespace radarprop {

using nlohmann::json;

std::string_view to_string(Alignment a) {
  switch (a) {
    case Alignment::kCentered: return "centered";
    case Alignment::kLeft: return "left";
    case Alignment::kRight: return "right";
    case Alignment::kBottom: return "bottom";
  }
  return "centered";
}

std::optional<Alignment> alignment_from_string(std::string_view s) {
  for (Alignment a : {Alignment::kCentered, Alignment::kLeft, Alignment::kRight,
                      Alignment::kBottom}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

void AnchorConfig::validate() const {
  if (sizes.empty() || aspect_ratios.empty() || alignments.empty()) {
    throw std::invalid_argument("anchor config needs at least one size, ratio and alignment");
  }
  for (double s : sizes) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("anchor sizes must be positive");
  }
  for (double r : aspect_ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("aspect ratios must be positive");
  }
  std::set<std::tuple<double, double, Alignment>> seen;
  for (double s : sizes) {
    for (double r : aspect_ratios) {
      for (Alignment a : alignments) {
        if (!seen.emplace(s, r, a).second) {
          throw std::invalid_argument("duplicate (size, ratio, alignment) in anchor config");
        }
      }
    }
  }
}

void ProposalConfig::validate() const {
  if (max_proposals == 0) throw std::invalid_argument("max_proposals must be positive");
  if (!(min_area >= 0.0)) throw std::invalid_argument("min_area must be non-negative");
  if (!(min_visible_frac >= 0.0 && min_visible_frac <= 1.0)) {
    throw std::invalid_argument("min_visible_frac must lie in [0, 1]");
  }
  if (!(d_min > 0.0 && d_min < d_max)) {
    throw std::invalid_argument("distance range must satisfy 0 < d_min < d_max");
  }
}

void validate_scale(const ScaleParams& params, const ProposalConfig& cfg) {
  if (!std::isfinite(params.alpha) || !std::isfinite(params.beta)) {
    throw std::invalid_argument("scale parameters must be finite");
  }
  // S is monotone in d, so the endpoints bound it.
  const double lo = params.alpha / cfg.d_max + params.beta;
  const double hi = params.alpha / cfg.d_min + params.beta;
  if (!(lo > 0.0 && hi > 0.0)) {
    throw std::invalid_argument("scale factor must be positive over the operating distance range");
  }
}

std::vector<AnchorTemplate> anchor_templates(const AnchorConfig& cfg) {
  cfg.validate();
  std::vector<AnchorTemplate> out;
  out.reserve(cfg.sizes.size() * cfg.aspect_ratios.size() * cfg.alignments.size());
  for (double size : cfg.sizes) {
    for (double ratio : cfg.aspect_ratios) {
      const double root = std::sqrt(ratio);
      for (Alignment a : cfg.alignments) {
        out.push_back({size * root, size / root, a});
      }
    }
  }
  return out;
}

BoundingBox place_anchor(const AnchorTemplate& tmpl, const PointOfInterest& poi,
                         double scale) {
  const double w = scale * tmpl.width;
  const double h = scale * tmpl.height;
  const double u = poi.u;
  const double v = poi.v;
  switch (tmpl.alignment) {
    case Alignment::kCentered:
      return {u - 0.5 * w, v - 0.5 * h, u + 0.5 * w, v + 0.5 * h};
    case Alignment::kLeft:
      return {u, v - 0.5 * h, u + w, v + 0.5 * h};
    case Alignment::kRight:
      return {u - w, v - 0.5 * h, u, v + 0.5 * h};
    case Alignment::kBottom:
      return {u - 0.5 * w, v - h, u + 0.5 * w, v};
  }
  return {};
}

double scale_factor(double distance, const ScaleParams& params, double d_min) {
  return params.alpha / std::max(distance, d_min) + params.beta;
}

std::optional<BoundingBox> clip_proposal(const BoundingBox& box,
                                         const ImageRect& image,
                                         const ProposalConfig& cfg) {
  auto clipped = clip_to(box, image);
  if (!clipped) return std::nullopt;
  const double area = clipped->area();
  if (area < cfg.min_area || area < cfg.min_visible_frac * box.area()) {
    return std::nullopt;
  }
  return clipped;
}

ProposalSet propose(std::span<const PointOfInterest> pois,
                    std::span<const AnchorTemplate> templates,
                    const ScaleParams& params, const ImageRect& image,
                    const ProposalConfig& cfg, std::int64_t frame_id) {
  ProposalSet out;
  out.frame_id = frame_id;
  const std::size_t want =
      std::min(cfg.max_proposals, pois.size() * templates.size());
  out.boxes.reserve(want);
  out.source_ids.reserve(want);
  for (const auto& poi : pois) {
    const double s = scale_factor(poi.distance, params, cfg.d_min);
    if (!(s > 0.0)) continue;
    for (const auto& tmpl : templates) {
      if (out.boxes.size() == cfg.max_proposals) return out;
      if (auto box = clip_proposal(place_anchor(tmpl, poi, s), image, cfg)) {
        out.boxes.push_back(*box);
        out.source_ids.push_back(poi.source_id);
      }
    }
  }
  return out;
}

ProposalSet propose(std::span<const PointOfInterest> pois,
                    const AnchorConfig& anchors, const ScaleParams& params,
                    const CameraCalibration& calib, const ProposalConfig& cfg,
                    std::int64_t frame_id) {
  const auto templates = anchor_templates(anchors);
  return propose(pois, templates, params, calib.image_rect(), cfg, frame_id);
}

std::string proposal_set_to_json_line(const ProposalSet& set) {
  json boxes = json::array();
  for (const auto& b : set.boxes) boxes.push_back({b.x1, b.y1, b.x2, b.y2});
  json j;
  j["frame_id"] = set.frame_id;
  j["boxes"] = std::move(boxes);
  j["source_ids"] = set.source_ids;
  return j.dump();
}

ProposalSet proposal_set_from_json_line(std::string_view line) {
  ProposalSet set;
  try {
    const json j = json::parse(line);
    set.frame_id = j.at("frame_id").get<std::int64_t>();
    for (const auto& b : j.at("boxes")) {
      if (!b.is_array() || b.size() != 4) throw ParseError("box must be [x1, y1, x2, y2]");
      BoundingBox box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                      b[3].get<double>()};
      if (!box.valid()) throw ValidationError("proposal box is empty or non-finite");
      set.boxes.push_back(box);
    }
    set.source_ids = j.at("source_ids").get<std::vector<std::int64_t>>();
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  if (set.source_ids.size() != set.boxes.size()) {
    throw ValidationError("boxes and source_ids differ in length");
  }
  return set;
}

void write_proposals(std::ostream& out, std::span<const ProposalSet> sets) {
  for (const auto& s : sets) out << proposal_set_to_json_line(s) << '\n';
}

void save_proposals(const std::string& path, std::span<const ProposalSet> sets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_proposals(out, sets);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ProposalSet> load_proposals(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<ProposalSet> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(proposal_set_from_json_line(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    } catch (const ValidationError& e) {
      throw ValidationError(e.what(), lineno);
    }
  }
  return out;
}

}  // namespace radarprop
