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

#include "radarprop/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace radarprop {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

double best_iou(const BoundingBox& gt, std::span<const BoundingBox> candidates) {
  double best = 0.0;
  for (const auto& c : candidates) best = std::max(best, iou(gt, c));
  return best;
}

void EvalConfig::validate() const {
  if (iou_thresholds.empty()) throw std::invalid_argument("need at least one IOU threshold");
  for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
    const double t = iou_thresholds[i];
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("IOU thresholds must lie in (0, 1]");
    if (i > 0 && !(t > iou_thresholds[i - 1])) {
      throw std::invalid_argument("IOU thresholds must be strictly increasing");
    }
  }
  if (area_ranges.empty()) throw std::invalid_argument("need at least one area range");
  if (area_ranges.front().lo != 0.0) throw std::invalid_argument("area ranges must start at 0");
  for (std::size_t i = 0; i < area_ranges.size(); ++i) {
    const auto& r = area_ranges[i];
    if (!(r.lo < r.hi)) throw std::invalid_argument("area range \"" + r.name + "\" is empty");
    if (i > 0 && r.lo != area_ranges[i - 1].hi) {
      throw std::invalid_argument("area ranges must be contiguous and disjoint");
    }
  }
  if (!std::isinf(area_ranges.back().hi)) {
    throw std::invalid_argument("last area range must extend to infinity");
  }
}

double EvalReport::recall(double threshold) const {
  for (const auto& r : recall_at) {
    if (r.threshold == threshold) return r.recall;
  }
  throw std::out_of_range("threshold not evaluated");
}

EvalReport evaluate(std::span<const ProposalSet> proposals,
                    std::span<const Frame> frames, const EvalConfig& cfg) {
  cfg.validate();

  std::unordered_map<std::int64_t, const ProposalSet*> by_id;
  for (const auto& p : proposals) {
    if (!by_id.emplace(p.frame_id, &p).second) {
      throw std::invalid_argument("duplicate proposal frame_id " + std::to_string(p.frame_id));
    }
  }
  if (by_id.size() != frames.size()) {
    throw std::invalid_argument("proposal and ground truth frame counts differ");
  }

  const std::size_t nt = cfg.iou_thresholds.size();
  const std::size_t na = cfg.area_ranges.size();
  std::vector<std::size_t> recalled(nt, 0);
  std::vector<std::size_t> recalled_area(nt * na, 0);
  std::vector<std::size_t> counts(na, 0);
  double iou_sum = 0.0;
  std::size_t total = 0;

  for (const auto& frame : frames) {
    auto it = by_id.find(frame.frame_id);
    if (it == by_id.end()) {
      throw std::invalid_argument("no proposals for frame_id " + std::to_string(frame.frame_id));
    }
    const auto& boxes = it->second->boxes;
    for (const auto& gt : frame.gt_boxes) {
      const double best = best_iou(gt, boxes);
      const double area = gt.area();
      std::size_t a = 0;
      while (a + 1 < na && !cfg.area_ranges[a].contains(area)) ++a;
      ++counts[a];
      ++total;
      iou_sum += best;
      for (std::size_t t = 0; t < nt; ++t) {
        if (best >= cfg.iou_thresholds[t]) {
          ++recalled[t];
          ++recalled_area[t * na + a];
        }
      }
    }
  }

  EvalReport report;
  report.frames = frames.size();
  report.total_gt = total;
  report.mean_best_iou = total ? iou_sum / static_cast<double>(total) : 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    const double th = cfg.iou_thresholds[t];
    report.recall_at.push_back(
        {th, recalled[t], total ? static_cast<double>(recalled[t]) / total : 0.0});
    for (std::size_t a = 0; a < na; ++a) {
      const std::size_t hit = recalled_area[t * na + a];
      report.recall_by_area.push_back(
          {th, cfg.area_ranges[a].name, counts[a], hit,
           counts[a] ? static_cast<double>(hit) / counts[a] : 0.0});
    }
  }
  for (std::size_t a = 0; a < na; ++a) {
    report.counts.push_back({cfg.area_ranges[a].name, counts[a]});
  }
  return report;
}

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["frames"] = report.frames;
  j["total_gt"] = report.total_gt;
  j["mean_best_iou"] = report.mean_best_iou;
  auto& ra = j["recall_at"] = nlohmann::ordered_json::array();
  for (const auto& r : report.recall_at) {
    ra.push_back({{"threshold", r.threshold}, {"recalled", r.recalled}, {"recall", r.recall}});
  }
  auto& rb = j["recall_by_area"] = nlohmann::ordered_json::array();
  for (const auto& r : report.recall_by_area) {
    rb.push_back({{"threshold", r.threshold}, {"area", r.area}, {"count", r.count},
                  {"recalled", r.recalled}, {"recall", r.recall}});
  }
  auto& c = j["counts"] = nlohmann::ordered_json::object();
  for (const auto& a : report.counts) c[a.area] = a.count;
  return j.dump();
}

std::string eval_report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "threshold,area,count,recalled,recall\n";
  out.precision(17);
  for (const auto& r : report.recall_by_area) {
    out << r.threshold << ',' << r.area << ',' << r.count << ',' << r.recalled << ','
        << r.recall << '\n';
  }
  return out.str();
}

}  // namespace radarprop
