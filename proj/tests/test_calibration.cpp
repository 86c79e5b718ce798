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

#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "oracles.hpp"
#include "radarprop/calibration.hpp"

using namespace radarprop;

namespace {

const ImageRect kImage{1600, 900};

// Toy forward model: GT boxes are true-parameter anchors at each POI.
std::vector<CalibrationFrame> forward_frames(const ScaleParams& truth, int n_frames,
                                             std::uint64_t seed) {
  const auto templates = anchor_templates(AnchorConfig{});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pu(300, 1300), pv(250, 650), pd(5, 60);
  std::uniform_int_distribution<std::size_t> pick(0, templates.size() - 1);
  std::vector<CalibrationFrame> frames;
  for (int f = 0; f < n_frames; ++f) {
    CalibrationFrame cf;
    cf.image = kImage;
    for (int i = 0; i < 3; ++i) {
      const PointOfInterest poi{pu(rng), pv(rng), pd(rng), i};
      const auto box = clip_proposal(
          place_anchor(templates[pick(rng)], poi, scale_factor(poi.distance, truth)), kImage, {});
      if (!box) continue;
      cf.pois.push_back(poi);
      cf.gt.push_back(*box);
    }
    frames.push_back(std::move(cf));
  }
  return frames;
}

std::vector<oracle::Anchor> oracle_anchors(const AnchorConfig& cfg) {
  std::vector<oracle::Anchor> out;
  for (double s : cfg.sizes) {
    for (double r : cfg.aspect_ratios) {
      for (Alignment a : cfg.alignments) out.push_back({s, r, static_cast<int>(a)});
    }
  }
  return out;
}

double brute_force_objective(const std::vector<CalibrationFrame>& frames, const ScaleParams& p,
                             const AnchorConfig& cfg) {
  const auto anchors = oracle_anchors(cfg);
  double total = 0.0;
  for (const auto& f : frames) {
    std::vector<oracle::Poi> pois;
    for (const auto& q : f.pois) pois.push_back({q.u, q.v, q.distance});
    oracle::ProposalRules rules{};
    rules.alpha = p.alpha;
    rules.beta = p.beta;
    rules.width = f.image.width;
    rules.height = f.image.height;
    std::vector<oracle::Box> gt;
    for (const auto& g : f.gt) gt.push_back({g.x1, g.y1, g.x2, g.y2});
    total += oracle::sum_best_iou(gt, oracle::proposals(pois, anchors, rules));
  }
  return total;
}

}  // namespace

TEST_CASE("AxisRange") {
  AxisRange a{0.0, 2000.0, 51};
  const auto v = a.values();
  REQUIRE(v.size() == 51);
  CHECK(v.front() == 0.0);
  CHECK(v[1] == 40.0);
  CHECK(v.back() == 2000.0);
  AxisRange b{0.0, 2.0, 41};
  CHECK(b.value(8) == 0.4);
  CHECK(b.value(20) == 1.0);
  CHECK(AxisRange{3.0, 3.0, 1}.values() == std::vector<double>{3.0});
}

TEST_CASE("GridSpec validation") {
  ProposalConfig cfg;
  CHECK_NOTHROW(GridSpec{}.validate(cfg));
  CHECK_THROWS_AS((GridSpec{{5, 1, 3}, {0, 1, 3}}.validate(cfg)), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{{0, 1, 0}, {0, 1, 3}}.validate(cfg)), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{{0, 1, 1}, {0, 1, 3}}.validate(cfg)), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{{0, 1, 3}, {-1, 1, 3}}.validate(cfg)), std::invalid_argument);
  CHECK_NOTHROW((GridSpec{{2, 2, 1}, {0.5, 0.5, 1}}.validate(cfg)));
}

TEST_CASE("objective") {
  const auto templates = anchor_templates(AnchorConfig{});
  const ScaleParams p{8.0, 0.4};

  SUBCASE("GT equal to an anchor contributes exactly 1") {
    CalibrationFrame f;
    f.image = kImage;
    f.pois = {{800, 450, 20, 0}};
    f.gt = {place_anchor(templates[5], f.pois[0], scale_factor(20, p))};
    std::vector<CalibrationFrame> frames{f};
    CHECK(objective(frames, p, templates) == 1.0);
  }

  SUBCASE("frames without GT or POIs contribute 0") {
    CalibrationFrame no_gt;
    no_gt.image = kImage;
    no_gt.pois = {{800, 450, 20, 0}};
    CalibrationFrame no_pois;
    no_pois.image = kImage;
    no_pois.gt = {{0, 0, 50, 50}};
    std::vector<CalibrationFrame> frames{no_gt, no_pois};
    CHECK(objective(frames, p, templates) == 0.0);
  }

  SUBCASE("three hand-placed frames match the brute-force scan") {
    std::vector<CalibrationFrame> frames(3);
    for (auto& f : frames) f.image = kImage;
    frames[0].pois = {{400, 300, 12, 0}, {900, 500, 35, 1}};
    frames[0].gt = {{380, 250, 470, 330}, {860, 450, 940, 520}};
    frames[1].pois = {{50, 880, 7, 0}};
    frames[1].gt = {{0, 700, 120, 900}};
    frames[2].pois = {{1500, 100, 55, 0}, {1200, 400, 20, 1}, {1210, 420, 21, 2}};
    frames[2].gt = {{1450, 60, 1560, 140}, {1150, 330, 1290, 470}, {10, 10, 20, 20}};
    const double got = objective(frames, p, templates);
    const double want = brute_force_objective(frames, p, AnchorConfig{});
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
    CHECK(got > 0.5);
  }

  SUBCASE("permutation invariance and bounds") {
    auto frames = forward_frames({12.0, 0.3}, 6, 4);
    std::size_t m = 0;
    for (const auto& f : frames) m += f.gt.size();
    const double base = objective(frames, p, templates);
    CHECK(base >= 0.0);
    CHECK(base <= static_cast<double>(m));
    std::reverse(frames.begin(), frames.end());
    for (auto& f : frames) std::reverse(f.gt.begin(), f.gt.end());
    CHECK(objective(frames, p, templates) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("grid_search") {
  const ScaleParams truth{8.0, 0.4};
  const auto frames = forward_frames(truth, 20, 123);
  const auto templates = anchor_templates(AnchorConfig{});
  std::size_t m = 0;
  for (const auto& f : frames) m += f.gt.size();
  REQUIRE(m > 30);

  SUBCASE("truth on the grid is recovered exactly") {
    GridSpec grid{{0.0, 16.0, 9}, {0.0, 0.8, 9}};
    const auto r = grid_search(frames, grid, templates);
    CHECK(r.best == truth);
    CHECK(r.objective == doctest::Approx(static_cast<double>(m)).epsilon(1e-9));
    CHECK(r.frames_used == frames.size());
    CHECK(r.total_gt == m);
    CHECK(r.objective == *std::max_element(r.grid.objectives.begin(), r.grid.objectives.end()));

    // every grid cell reproduces independently
    for (std::size_t ia = 0; ia < r.grid.alpha_values.size(); ++ia) {
      for (std::size_t ib = 0; ib < r.grid.beta_values.size(); ++ib) {
        const double again =
            objective(frames, {r.grid.alpha_values[ia], r.grid.beta_values[ib]}, templates);
        CHECK(std::abs(again - r.grid.at(ia, ib)) <= 1e-9);
      }
    }
  }

  SUBCASE("truth between grid points is bracketed within one step") {
    GridSpec grid{{1.0, 15.0, 8}, {0.05, 0.75, 8}};
    const auto r = grid_search(frames, grid, templates);
    CHECK(std::abs(r.best.alpha - truth.alpha) <= grid.alpha.step() + 1e-12);
    CHECK(std::abs(r.best.beta - truth.beta) <= grid.beta.step() + 1e-12);
  }

  SUBCASE("single-point grid") {
    GridSpec grid{{100.0, 100.0, 1}, {1.5, 1.5, 1}};
    const auto r = grid_search(frames, grid, templates);
    CHECK(r.best == ScaleParams{100.0, 1.5});
    CHECK(r.grid.objectives.size() == 1);
  }

  SUBCASE("ties go to the smallest alpha, then beta") {
    // No POIs anywhere: every grid point scores 0.
    std::vector<CalibrationFrame> empty(2);
    for (auto& f : empty) {
      f.image = kImage;
      f.gt = {{0, 0, 10, 10}};
    }
    const auto r = grid_search(empty, GridSpec{{1.0, 5.0, 5}, {0.2, 1.0, 5}}, templates);
    CHECK(r.best == ScaleParams{1.0, 0.2});
    CHECK(r.objective == 0.0);
  }

  SUBCASE("threads do not change the result") {
    GridSpec grid{{0.0, 16.0, 9}, {0.0, 0.8, 9}};
    const auto one = grid_search(frames, grid, templates, {}, {1});
    const auto four = grid_search(frames, grid, templates, {}, {4});
    CHECK(one.grid.objectives == four.grid.objectives);
    CHECK(one.best == four.best);
  }

  SUBCASE("refinement never lowers the objective") {
    GridSpec grid{{1.0, 15.0, 8}, {0.05, 0.75, 8}};
    const auto plain = grid_search(frames, grid, templates);
    grid.refine = true;
    const auto fine = grid_search(frames, grid, templates);
    REQUIRE(fine.refined);
    CHECK(fine.objective >= plain.objective);
    CHECK(fine.grid.objectives == plain.grid.objectives);
  }

  SUBCASE("empty dataset is an error") {
    CHECK_THROWS_AS(grid_search(std::vector<CalibrationFrame>{}, GridSpec{}, templates),
                    std::invalid_argument);
  }
}

TEST_CASE("grid_search on a dataset; empty-POI frames") {
  SynthConfig cfg;
  cfg.n_frames = 30;
  cfg.seed = 8;
  cfg.true_params = {40.0, 0.4};
  Dataset ds = synthesize(cfg);
  ds.frames[0].detections.clear();  // radar miss: GT stays, nothing proposes
  const std::size_t missed = ds.frames[0].gt_boxes.size();
  REQUIRE(missed > 0);

  GridSpec grid{{0.0, 80.0, 3}, {0.0, 0.8, 3}};
  const auto kept = grid_search(ds, grid, cfg.anchors);
  const auto excluded = grid_search(ds, grid, cfg.anchors, {}, {}, true);
  CHECK(kept.best == cfg.true_params);
  CHECK(excluded.best == cfg.true_params);
  CHECK(kept.frames_used == 30);
  CHECK(excluded.frames_used == 29);
  CHECK(kept.total_gt == excluded.total_gt + missed);
  CHECK(kept.objective == doctest::Approx(excluded.objective));

  const auto j = nlohmann::json::parse(calibration_report_to_json(kept));
  CHECK(j["best"]["alpha"] == 40.0);
  CHECK(j["grid"]["alpha_values"].size() == 3);
  CHECK(j["grid"]["objectives"].size() == 9);
  CHECK(j["frames_used"] == 30);
}
