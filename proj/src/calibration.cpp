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

#include "radarprop/calibration.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "radarprop/evaluation.hpp"
#include "radarprop/parallel.hpp"

namespace radarprop {

namespace {

void validate_axis(const AxisRange& axis, const char* name) {
  const std::string n(name);
  if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi)) {
    throw std::invalid_argument(n + " range must be finite");
  }
  if (axis.steps == 1) {
    if (axis.lo != axis.hi) throw std::invalid_argument(n + " single-step axis needs lo == hi");
    return;
  }
  if (axis.steps < 2) throw std::invalid_argument(n + " axis needs at least one step");
  if (!(axis.lo < axis.hi)) throw std::invalid_argument(n + " range needs lo < hi");
}

GridResult evaluate_grid(std::span<const CalibrationFrame> frames,
                         const AxisRange& alpha, const AxisRange& beta,
                         std::span<const AnchorTemplate> templates,
                         const ProposalConfig& cfg, unsigned threads) {
  GridResult g;
  g.alpha_values = alpha.values();
  g.beta_values = beta.values();
  const std::size_t nb = g.beta_values.size();
  g.objectives.assign(g.alpha_values.size() * nb, 0.0);
  parallel_for(g.objectives.size(), threads, [&](std::size_t k) {
    const ScaleParams p{g.alpha_values[k / nb], g.beta_values[k % nb]};
    g.objectives[k] = objective(frames, p, templates, cfg);
  });

  // Row-major scan with strict improvement keeps the smallest (alpha, beta).
  std::size_t best = 0;
  for (std::size_t k = 1; k < g.objectives.size(); ++k) {
    if (g.objectives[k] > g.objectives[best]) best = k;
  }
  g.best = {g.alpha_values[best / nb], g.beta_values[best % nb]};
  g.objective = g.objectives[best];
  return g;
}

AxisRange zoom(const AxisRange& axis, double center) {
  if (axis.steps < 2) return axis;
  const double h = axis.step();
  return {std::max(axis.lo, center - h), std::min(axis.hi, center + h), axis.steps};
}

}  // namespace

double AxisRange::value(int i) const {
  if (steps <= 1) return lo;
  if (i == steps - 1) return hi;
  return lo + (hi - lo) * i / (steps - 1);
}

std::vector<double> AxisRange::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(steps, 0)));
  for (int i = 0; i < steps; ++i) out.push_back(value(i));
  return out;
}

void GridSpec::validate(const ProposalConfig& cfg) const {
  validate_axis(alpha, "alpha");
  validate_axis(beta, "beta");
  // S is linear in (alpha, beta) and monotone in d, so checking the four
  // grid corners at both distance bounds covers every grid point.
  for (double a : {alpha.lo, alpha.hi}) {
    for (double b : {beta.lo, beta.hi}) {
      if (a / cfg.d_min + b < 0.0 || a / cfg.d_max + b < 0.0) {
        throw std::invalid_argument("grid contains parameters with a negative scale factor");
      }
    }
  }
}

std::vector<CalibrationFrame> prepare_calibration_frames(
    const Dataset& dataset, const ProjectionOptions& projection, bool exclude_empty) {
  std::vector<CalibrationFrame> out;
  out.reserve(dataset.frames.size());
  for (const auto& f : dataset.frames) {
    const auto& calib = dataset.calibration_for(f);
    CalibrationFrame cf;
    cf.pois = project_frame(f.detections, calib, projection);
    if (exclude_empty && cf.pois.empty()) continue;
    cf.gt = f.gt_boxes;
    cf.image = calib.image_rect();
    out.push_back(std::move(cf));
  }
  return out;
}

double objective(std::span<const CalibrationFrame> frames, const ScaleParams& params,
                 std::span<const AnchorTemplate> templates, const ProposalConfig& cfg) {
  double total = 0.0;
  for (const auto& f : frames) {
    if (f.gt.empty() || f.pois.empty()) continue;
    const ProposalSet props = propose(f.pois, templates, params, f.image, cfg);
    for (const auto& gt : f.gt) total += best_iou(gt, props.boxes);
  }
  return total;
}

CalibrationReport grid_search(std::span<const CalibrationFrame> frames,
                              const GridSpec& grid,
                              std::span<const AnchorTemplate> templates,
                              const ProposalConfig& cfg, const SearchOptions& opts) {
  if (frames.empty()) throw std::invalid_argument("calibration needs at least one frame");
  grid.validate(cfg);

  CalibrationReport report;
  report.frames_used = frames.size();
  for (const auto& f : frames) report.total_gt += f.gt.size();
  report.grid = evaluate_grid(frames, grid.alpha, grid.beta, templates, cfg, opts.threads);
  report.best = report.grid.best;
  report.objective = report.grid.objective;

  if (grid.refine) {
    auto fine = evaluate_grid(frames, zoom(grid.alpha, report.best.alpha),
                              zoom(grid.beta, report.best.beta), templates, cfg,
                              opts.threads);
    if (fine.objective > report.objective) {
      report.best = fine.best;
      report.objective = fine.objective;
    }
    report.refined = std::move(fine);
  }
  return report;
}

CalibrationReport grid_search(const Dataset& dataset, const GridSpec& grid,
                              const AnchorConfig& anchors, const ProposalConfig& cfg,
                              const SearchOptions& opts, bool exclude_empty) {
  const auto frames = prepare_calibration_frames(dataset, {}, exclude_empty);
  const auto templates = anchor_templates(anchors);
  return grid_search(frames, grid, templates, cfg, opts);
}

namespace {

nlohmann::ordered_json grid_to_json(const GridResult& g) {
  nlohmann::ordered_json j;
  j["alpha_values"] = g.alpha_values;
  j["beta_values"] = g.beta_values;
  j["objectives"] = g.objectives;
  j["best"] = {{"alpha", g.best.alpha}, {"beta", g.best.beta}};
  j["objective"] = g.objective;
  return j;
}

}  // namespace

std::string calibration_report_to_json(const CalibrationReport& report) {
  nlohmann::ordered_json j;
  j["best"] = {{"alpha", report.best.alpha}, {"beta", report.best.beta}};
  j["objective"] = report.objective;
  j["frames_used"] = report.frames_used;
  j["total_gt"] = report.total_gt;
  j["grid"] = grid_to_json(report.grid);
  if (report.refined) j["refined"] = grid_to_json(*report.refined);
  return j.dump();
}

}  // namespace radarprop
