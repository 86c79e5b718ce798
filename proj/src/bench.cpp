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

#include "radarprop/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "radarprop/parallel.hpp"

namespace radarprop {

std::string cpu_model_name() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      auto pos = line.find(':');
      if (pos != std::string::npos) {
        auto name = line.substr(pos + 1);
        name.erase(0, name.find_first_not_of(' '));
        return name;
      }
    }
  }
  return "unknown";
}

BenchReport run_bench(const Dataset& dataset, const AnchorConfig& anchors,
                      const ScaleParams& params, const BenchOptions& opts) {
  if (opts.repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
  const auto templates = anchor_templates(anchors);

  // Resolve calibrations up front so the timed loop does no lookups.
  const std::size_t n = dataset.frames.size();
  std::vector<const CameraCalibration*> calibs(n);
  for (std::size_t i = 0; i < n; ++i) {
    calibs[i] = &dataset.calibration_for(dataset.frames[i]);
  }

  std::vector<std::size_t> poi_counts(n, 0);
  std::vector<std::size_t> box_counts(n, 0);
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(opts.repetitions));

  for (int rep = 0; rep < opts.repetitions; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    parallel_for(n, opts.threads, [&](std::size_t i) {
      const auto& frame = dataset.frames[i];
      const auto pois = project_frame(frame.detections, *calibs[i], opts.projection);
      const auto set = propose(pois, templates, params, calibs[i]->image_rect(),
                               opts.proposal, frame.frame_id);
      poi_counts[i] = pois.size();
      box_counts[i] = set.size();
    });
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());
  }

  std::sort(times.begin(), times.end());
  BenchReport r;
  r.frames_processed = n;
  // Clock granularity floor keeps frames_per_second finite on empty input.
  r.wall_seconds = std::max(times.front(), 1e-9);
  const std::size_t m = times.size();
  r.median_seconds = m % 2 ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
  r.frames_per_second = static_cast<double>(n) / r.wall_seconds;
  std::size_t pois = 0, boxes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    pois += poi_counts[i];
    boxes += box_counts[i];
  }
  r.pois_per_frame_mean = n ? static_cast<double>(pois) / n : 0.0;
  r.proposals_per_frame_mean = n ? static_cast<double>(boxes) / n : 0.0;
  r.repetitions = opts.repetitions;
  r.threads = std::max(1u, opts.threads);
  r.mode = r.threads > 1 ? "parallel" : "single";
  r.cpu_model = cpu_model_name();
  r.hardware_threads = std::thread::hardware_concurrency();
  return r;
}

std::string bench_report_to_json(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["frames_processed"] = r.frames_processed;
  j["wall_seconds"] = r.wall_seconds;
  j["median_seconds"] = r.median_seconds;
  j["frames_per_second"] = r.frames_per_second;
  j["pois_per_frame_mean"] = r.pois_per_frame_mean;
  j["proposals_per_frame_mean"] = r.proposals_per_frame_mean;
  j["repetitions"] = r.repetitions;
  j["threads"] = r.threads;
  j["mode"] = r.mode;
  j["cpu_model"] = r.cpu_model;
  j["hardware_threads"] = r.hardware_threads;
  return j.dump();
}

}  // namespace radarprop
