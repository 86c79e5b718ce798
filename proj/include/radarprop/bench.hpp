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

#ifndef RADARPROP_BENCH_HPP_
#define RADARPROP_BENCH_HPP_

#include <cstddef>
#include <string>

#include "radarprop/dataset.hpp"
#include "radarprop/proposals.hpp"

namespace radarprop {

struct BenchOptions {
  int repetitions = 5;
  unsigned threads = 1;
  ProjectionOptions projection;
  ProposalConfig proposal;
};

struct BenchReport {
  std::size_t frames_processed = 0;
  double wall_seconds = 0.0;  // best of the repetitions
  double median_seconds = 0.0;
  double frames_per_second = 0.0;
  double pois_per_frame_mean = 0.0;
  double proposals_per_frame_mean = 0.0;
  int repetitions = 0;
  unsigned threads = 1;
  std::string mode;  // "single" or "parallel"
  std::string cpu_model;
  unsigned hardware_threads = 0;
};

/// Times projection plus proposal generation over every frame of an
/// already-loaded dataset.
BenchReport run_bench(const Dataset& dataset, const AnchorConfig& anchors,
                      const ScaleParams& params, const BenchOptions& opts = {});

std::string bench_report_to_json(const BenchReport& report);

/// First "model name" entry of /proc/cpuinfo, or "unknown".
std::string cpu_model_name();

}  // namespace radarprop

#endif  // RADARPROP_BENCH_HPP_
