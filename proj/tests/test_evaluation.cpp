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

#include <random>
#include <stdexcept>

#include <json.hpp>

#include "oracles.hpp"
#include "radarprop/evaluation.hpp"

using namespace radarprop;

namespace {

Frame gt_frame(std::int64_t id, std::vector<BoundingBox> boxes) {
  Frame f;
  f.frame_id = id;
  f.gt_boxes = std::move(boxes);
  f.gt_classes.assign(f.gt_boxes.size(), ObjectClass::kCar);
  f.calib_ref = "front";
  return f;
}

oracle::Box ob(const BoundingBox& b) { return {b.x1, b.y1, b.x2, b.y2}; }

BoundingBox random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-100.0, 100.0), ext(0.01, 80.0);
  const double x = pos(rng), y = pos(rng);
  return {x, y, x + ext(rng), y + ext(rng)};
}

}  // namespace

TEST_CASE("iou") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, {20, 20, 30, 30}) == 0.0);
  CHECK(iou(a, {10, 0, 20, 10}) == 0.0);  // shared edge
  CHECK(iou(a, {5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(iou(a, {2, 2, 4, 4}) == doctest::Approx(0.04));
}

TEST_CASE("iou properties against the compression oracle") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_box(rng);
    const auto b = random_box(rng);
    const double v = iou(a, b);
    CHECK(v == iou(b, a));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(iou(a, a) == 1.0);
    CHECK(std::abs(v - oracle::iou(ob(a), ob(b))) <= 1e-12);
    const BoundingBox at{a.x1 + 13.5, a.y1 - 7.25, a.x2 + 13.5, a.y2 - 7.25};
    const BoundingBox bt{b.x1 + 13.5, b.y1 - 7.25, b.x2 + 13.5, b.y2 - 7.25};
    CHECK(iou(at, bt) == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("EvalConfig validation") {
  EvalConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.iou_thresholds = {0.75, 0.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.iou_thresholds = {0.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = EvalConfig{};
  cfg.area_ranges[1].lo = 2000.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = EvalConfig{};
  cfg.area_ranges.pop_back();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("evaluate") {
  SUBCASE("proposals equal to GT") {
    std::vector<Frame> frames{gt_frame(0, {{0, 0, 10, 10}, {50, 50, 200, 200}}),
                              gt_frame(1, {{5, 5, 60, 60}})};
    std::vector<ProposalSet> props;
    for (const auto& f : frames) {
      props.push_back({f.frame_id, f.gt_boxes, std::vector<std::int64_t>(f.gt_boxes.size(), 0)});
    }
    const auto r = evaluate(props, frames);
    CHECK(r.recall(0.5) == 1.0);
    CHECK(r.recall(0.75) == 1.0);
    CHECK(r.mean_best_iou == 1.0);
    CHECK(r.frames == 2);
    CHECK(r.total_gt == 3);
    CHECK(r.counts[0].count == 1);  // 100 px^2
    CHECK(r.counts[1].count == 1);  // 3025 px^2
    CHECK(r.counts[2].count == 1);  // 22500 px^2
  }

  SUBCASE("empty proposal sets") {
    std::vector<Frame> frames{gt_frame(3, {{0, 0, 10, 10}})};
    std::vector<ProposalSet> props{{3, {}, {}}};
    const auto r = evaluate(props, frames);
    CHECK(r.recall(0.5) == 0.0);
    CHECK(r.mean_best_iou == 0.0);
  }

  SUBCASE("hand-placed IOUs 1.0, 0.6, 0.4") {
    std::vector<Frame> frames{gt_frame(0, {{0, 0, 10, 10}}),
                              gt_frame(1, {{0, 0, 10, 10}, {20, 0, 30, 10}})};
    std::vector<ProposalSet> props{{0, {{0, 0, 10, 10}}, {0}},
                                   {1, {{0, 0, 6, 10}, {20, 0, 24, 10}}, {0, 1}}};
    // oracle scan
    double sum = 0.0;
    int hit = 0;
    for (int f = 0; f < 2; ++f) {
      for (const auto& g : frames[f].gt_boxes) {
        double best = 0.0;
        for (const auto& p : props[f].boxes) best = std::max(best, oracle::iou(ob(g), ob(p)));
        sum += best;
        hit += best >= 0.5;
      }
    }
    CHECK(sum == doctest::Approx(2.0));
    CHECK(hit == 2);

    const auto r = evaluate(props, frames);
    CHECK(r.recall(0.5) == doctest::Approx(2.0 / 3.0));
    CHECK(r.recall(0.75) == doctest::Approx(1.0 / 3.0));
    CHECK(r.mean_best_iou == doctest::Approx(sum / 3.0));
    // every GT box is 100 px^2, i.e. small
    CHECK(r.counts[0].count == 3);
    CHECK(r.recall_by_area[0].area == "small");
    CHECK(r.recall_by_area[0].recall == doctest::Approx(2.0 / 3.0));
    CHECK(r.recall_by_area[1].count == 0);
    CHECK(r.recall_by_area[1].recall == 0.0);
  }

  SUBCASE("frame_id mismatch") {
    std::vector<Frame> frames{gt_frame(0, {{0, 0, 10, 10}})};
    std::vector<ProposalSet> wrong{{1, {}, {}}};
    CHECK_THROWS_AS(evaluate(wrong, frames), std::invalid_argument);
    std::vector<ProposalSet> extra{{0, {}, {}}, {1, {}, {}}};
    CHECK_THROWS_AS(evaluate(extra, frames), std::invalid_argument);
    std::vector<ProposalSet> dup{{0, {}, {}}, {0, {}, {}}};
    CHECK_THROWS_AS(evaluate(dup, frames), std::invalid_argument);
  }

  SUBCASE("random sets agree with a brute-force scan; recall is monotone") {
    std::mt19937_64 rng(7);
    EvalConfig cfg;
    cfg.iou_thresholds = {0.1, 0.3, 0.5, 0.7, 0.9};
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Frame> frames;
      std::vector<ProposalSet> props;
      for (int f = 0; f < 4; ++f) {
        std::vector<BoundingBox> gt(1 + rng() % 6), pr(rng() % 40);
        for (auto& b : gt) b = random_box(rng);
        for (auto& b : pr) b = random_box(rng);
        frames.push_back(gt_frame(f, gt));
        props.push_back({f, pr, std::vector<std::int64_t>(pr.size(), 0)});
      }
      const auto r = evaluate(props, frames, cfg);
      double sum = 0.0;
      std::size_t n = 0;
      std::vector<std::size_t> hits(cfg.iou_thresholds.size(), 0);
      for (std::size_t f = 0; f < frames.size(); ++f) {
        for (const auto& g : frames[f].gt_boxes) {
          double best = 0.0;
          for (const auto& p : props[f].boxes) best = std::max(best, oracle::iou(ob(g), ob(p)));
          sum += best;
          ++n;
          for (std::size_t t = 0; t < hits.size(); ++t) hits[t] += best >= cfg.iou_thresholds[t];
        }
      }
      CHECK(r.mean_best_iou == doctest::Approx(sum / n).epsilon(1e-12));
      std::size_t total_counts = 0;
      for (const auto& c : r.counts) total_counts += c.count;
      CHECK(total_counts == n);
      for (std::size_t t = 0; t < hits.size(); ++t) {
        CHECK(r.recall_at[t].recalled == hits[t]);
        if (t > 0) CHECK(r.recall_at[t].recall <= r.recall_at[t - 1].recall);
      }
    }
  }
}

TEST_CASE("report serialization") {
  std::vector<Frame> frames{gt_frame(0, {{0, 0, 10, 10}})};
  std::vector<ProposalSet> props{{0, {{0, 0, 10, 10}}, {0}}};
  const auto r = evaluate(props, frames);
  const auto j = nlohmann::json::parse(eval_report_to_json(r));
  CHECK(j["recall_at"][0]["threshold"] == 0.5);
  CHECK(j["recall_at"][0]["recall"] == 1.0);
  CHECK(j["counts"]["small"] == 1);

  const auto csv = eval_report_to_csv(r);
  CHECK(csv.rfind("threshold,area,count,recalled,recall\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
  CHECK(csv.find("0.5,small,1,1,1\n") != std::string::npos);
}
