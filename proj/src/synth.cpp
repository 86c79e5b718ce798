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

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "radarprop/dataset.hpp"

namespace radarprop {

namespace {

// Placement attempts per object before the generator gives up on it.
constexpr int kMaxAttempts = 1000;

}  // namespace

void SynthConfig::validate() const {
  if (n_frames < 0) throw std::invalid_argument("n_frames must be non-negative");
  if (pois_min < 0 || pois_min > pois_max) {
    throw std::invalid_argument("pois_per_frame must satisfy 0 <= min <= max");
  }
  if (!(d_min > 0.0 && d_min < d_max && std::isfinite(d_max))) {
    throw std::invalid_argument("distance_range must satisfy 0 < d_min < d_max");
  }
  if (!(poi_jitter_px >= 0.0) || !(size_jitter >= 0.0)) {
    throw std::invalid_argument("noise standard deviations must be non-negative");
  }
  if (image_width <= 0 || image_height <= 0 || !(focal_px > 0.0)) {
    throw std::invalid_argument("camera model needs positive image size and focal length");
  }
  if (!std::isfinite(camera_height) || !std::isfinite(radar_height)) {
    throw std::invalid_argument("mounting heights must be finite");
  }
  anchors.validate();
  proposal.validate();
  ProposalConfig range = proposal;
  range.d_min = d_min;
  range.d_max = d_max;
  validate_scale(true_params, range);
}

CameraCalibration synth_calibration(const SynthConfig& cfg) {
  // Camera looks along vehicle +x: camera x = -vehicle y, camera y = -vehicle z.
  Eigen::Matrix3d r;
  r << 0.0, -1.0, 0.0,
       0.0, 0.0, -1.0,
       1.0, 0.0, 0.0;
  return CameraCalibration::pinhole(cfg.focal_px, 0.5 * cfg.image_width,
                                    0.5 * cfg.image_height, r,
                                    Eigen::Vector3d(0.0, 0.0, cfg.camera_height),
                                    cfg.image_width, cfg.image_height);
}

Dataset synthesize(const SynthConfig& cfg) {
  cfg.validate();
  const CameraCalibration calib = synth_calibration(cfg);
  const ImageRect image = calib.image_rect();
  const auto templates = anchor_templates(cfg.anchors);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> count_dist(cfg.pois_min, cfg.pois_max);
  std::uniform_real_distribution<double> dist_dist(cfg.d_min, cfg.d_max);
  std::uniform_real_distribution<double> azimuth_dist(-0.5 * std::numbers::pi,
                                                      0.5 * std::numbers::pi);
  std::uniform_int_distribution<std::size_t> tmpl_dist(0, templates.size() - 1);
  std::uniform_int_distribution<int> class_dist(0, kNumObjectClasses - 1);
  std::normal_distribution<double> normal(0.0, 1.0);

  Dataset ds;
  ds.calibrations.emplace(cfg.calib_ref, calib);
  ds.frames.reserve(static_cast<std::size_t>(cfg.n_frames));

  for (int f = 0; f < cfg.n_frames; ++f) {
    Frame frame;
    frame.frame_id = f;
    frame.calib_ref = cfg.calib_ref;
    const int n = count_dist(rng);
    for (int k = 0; k < n; ++k) {
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const double d = dist_dist(rng);
        const double az = azimuth_dist(rng);
        RadarDetection det;
        det.position = {d * std::cos(az), d * std::sin(az), cfg.radar_height};
        det.range = d;
        det.range_rate = 0.0;
        det.id = k;
        const auto poi = project(det, calib);
        if (!poi) continue;

        AnchorTemplate tmpl = templates[tmpl_dist(rng)];
        if (cfg.size_jitter > 0.0) {
          tmpl.width *= std::max(0.1, 1.0 + cfg.size_jitter * normal(rng));
          tmpl.height *= std::max(0.1, 1.0 + cfg.size_jitter * normal(rng));
        }
        const double s = scale_factor(d, cfg.true_params, cfg.proposal.d_min);
        const auto gt = clip_proposal(place_anchor(tmpl, *poi, s), image, cfg.proposal);
        if (!gt) continue;

        if (cfg.poi_jitter_px > 0.0) {
          const ImagePoint noisy{poi->u + cfg.poi_jitter_px * normal(rng),
                                 poi->v + cfg.poi_jitter_px * normal(rng)};
          const auto p = backproject(noisy, d, calib);
          if (!p) continue;
          det.position = *p;
          if (!project(det, calib)) continue;
        }

        frame.detections.push_back(det);
        frame.gt_boxes.push_back(*gt);
        frame.gt_classes.push_back(static_cast<ObjectClass>(class_dist(rng)));
        break;
      }
    }
    ds.frames.push_back(std::move(frame));
  }
  return ds;
}

}  // namespace radarprop
