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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "radarprop/bench.hpp"
#include "radarprop/calibration.hpp"
#include "radarprop/dataset.hpp"
#include "radarprop/error.hpp"
#include "radarprop/evaluation.hpp"
#include "radarprop/proposals.hpp"
#include "radarprop/render.hpp"

namespace radarprop::cli {

namespace {

using json = nlohmann::json;

/// Bad user input: malformed config, flags or parameter files. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  SynthConfig synth;
  AnchorConfig anchors;
  ProposalConfig proposal;
  ProjectionOptions projection;
  std::optional<ScaleParams> scale;
  GridSpec grid;
  bool exclude_empty = false;
  EvalConfig eval;
};

void check_keys(const json& j, const char* section, std::set<std::string> allowed) {
  if (!j.is_object()) throw UsageError(std::string(section) + " must be a JSON object");
  for (const auto& [k, _] : j.items()) {
    if (!allowed.contains(k)) {
      throw UsageError(std::string("unknown key \"") + k + "\" in " + section);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& dst) {
  if (auto it = j.find(key); it != j.end()) dst = it->get<T>();
}

AxisRange axis_from_json(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 3) throw UsageError("grid axis must be [lo, hi, steps]");
  if (v[2] != static_cast<int>(v[2])) throw UsageError("grid steps must be an integer");
  return {v[0], v[1], static_cast<int>(v[2])};
}

ScaleParams scale_from_json(const json& j) {
  return {j.at("alpha").get<double>(), j.at("beta").get<double>()};
}

PipelineConfig parse_config(const json& root) {
  PipelineConfig cfg;
  check_keys(root, "config", {"synth", "anchors", "proposal", "scale", "grid", "eval"});

  if (auto it = root.find("anchors"); it != root.end()) {
    const auto& a = *it;
    check_keys(a, "anchors", {"sizes", "aspect_ratios", "alignments"});
    read(a, "sizes", cfg.anchors.sizes);
    read(a, "aspect_ratios", cfg.anchors.aspect_ratios);
    if (a.contains("alignments")) {
      cfg.anchors.alignments.clear();
      for (const auto& name : a["alignments"].get<std::vector<std::string>>()) {
        auto al = alignment_from_string(name);
        if (!al) throw UsageError("unknown alignment \"" + name + "\"");
        cfg.anchors.alignments.push_back(*al);
      }
    }
  }
  cfg.anchors.validate();

  if (auto it = root.find("proposal"); it != root.end()) {
    const auto& p = *it;
    check_keys(p, "proposal",
               {"max_proposals", "min_area", "min_visible_frac", "d_min", "d_max", "margin_px"});
    read(p, "max_proposals", cfg.proposal.max_proposals);
    read(p, "min_area", cfg.proposal.min_area);
    read(p, "min_visible_frac", cfg.proposal.min_visible_frac);
    read(p, "d_min", cfg.proposal.d_min);
    read(p, "d_max", cfg.proposal.d_max);
    read(p, "margin_px", cfg.projection.margin_px);
  }
  cfg.proposal.validate();

  if (auto it = root.find("scale"); it != root.end()) {
    check_keys(*it, "scale", {"alpha", "beta"});
    cfg.scale = scale_from_json(*it);
  }

  if (auto it = root.find("grid"); it != root.end()) {
    const auto& g = *it;
    check_keys(g, "grid", {"alpha", "beta", "refine", "exclude_empty"});
    if (g.contains("alpha")) cfg.grid.alpha = axis_from_json(g["alpha"]);
    if (g.contains("beta")) cfg.grid.beta = axis_from_json(g["beta"]);
    read(g, "refine", cfg.grid.refine);
    read(g, "exclude_empty", cfg.exclude_empty);
  }

  if (auto it = root.find("eval"); it != root.end()) {
    const auto& e = *it;
    check_keys(e, "eval", {"iou_thresholds", "area_ranges"});
    read(e, "iou_thresholds", cfg.eval.iou_thresholds);
    if (e.contains("area_ranges")) {
      cfg.eval.area_ranges.clear();
      for (const auto& r : e["area_ranges"]) {
        AreaRange ar;
        ar.name = r.at("name").get<std::string>();
        ar.lo = r.at("lo").get<double>();
        if (r.contains("hi") && !r["hi"].is_null()) ar.hi = r["hi"].get<double>();
        cfg.eval.area_ranges.push_back(ar);
      }
    }
  }
  cfg.eval.validate();

  auto& s = cfg.synth;
  s.anchors = cfg.anchors;
  s.proposal = cfg.proposal;
  if (auto it = root.find("synth"); it != root.end()) {
    const auto& j = *it;
    check_keys(j, "synth", {"n_frames", "pois_per_frame", "distance_range", "true_params",
                            "noise", "seed", "radar_height", "camera"});
    read(j, "n_frames", s.n_frames);
    if (j.contains("pois_per_frame")) {
      const auto v = j["pois_per_frame"].get<std::vector<int>>();
      if (v.size() != 2) throw UsageError("pois_per_frame must be [min, max]");
      s.pois_min = v[0];
      s.pois_max = v[1];
    }
    if (j.contains("distance_range")) {
      const auto v = j["distance_range"].get<std::vector<double>>();
      if (v.size() != 2) throw UsageError("distance_range must be [d_min, d_max]");
      s.d_min = v[0];
      s.d_max = v[1];
    }
    if (j.contains("true_params")) s.true_params = scale_from_json(j["true_params"]);
    if (j.contains("noise")) {
      check_keys(j["noise"], "synth.noise", {"poi_px", "size"});
      read(j["noise"], "poi_px", s.poi_jitter_px);
      read(j["noise"], "size", s.size_jitter);
    }
    read(j, "seed", s.seed);
    read(j, "radar_height", s.radar_height);
    if (j.contains("camera")) {
      const auto& c = j["camera"];
      check_keys(c, "synth.camera", {"width", "height", "focal_px", "mount_height", "calib_ref"});
      read(c, "width", s.image_width);
      read(c, "height", s.image_height);
      read(c, "focal_px", s.focal_px);
      read(c, "mount_height", s.camera_height);
      read(c, "calib_ref", s.calib_ref);
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return parse_config(json::object());
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  try {
    return parse_config(json::parse(in));
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

AxisRange parse_axis_flag(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("bad range \"" + text + "\"; expected lo,hi,steps");
    }
  }
  if (v.size() != 3 || v[2] != static_cast<int>(v[2])) {
    throw UsageError("bad range \"" + text + "\"; expected lo,hi,steps");
  }
  return {v[0], v[1], static_cast<int>(v[2])};
}

ScaleParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open params file " + path);
  try {
    const json j = json::parse(in);
    return scale_from_json(j.contains("best") ? j["best"] : j);
  } catch (const json::exception& e) {
    throw UsageError("params file " + path + ": " + e.what());
  }
}

struct ScaleFlags {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string params_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "Scale law alpha (pixel*m)");
    cmd->add_option("--beta", beta, "Scale law beta");
    cmd->add_option("--params", params_path,
                    "JSON file with alpha/beta or a calibration report");
  }

  ScaleParams resolve(const PipelineConfig& cfg) const {
    ScaleParams p;
    if (!params_path.empty()) {
      p = load_params_file(params_path);
    } else if (cfg.scale) {
      p = *cfg.scale;
    } else if (!alpha || !beta) {
      throw UsageError("scale parameters required: --alpha and --beta, --params, or config \"scale\"");
    }
    if (alpha) p.alpha = *alpha;
    if (beta) p.beta = *beta;
    try {
      validate_scale(p, cfg.proposal);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ProposalSet> propose_dataset(const Dataset& ds, const PipelineConfig& cfg,
                                         const ScaleParams& params) {
  const auto templates = anchor_templates(cfg.anchors);
  std::vector<ProposalSet> out;
  out.reserve(ds.frames.size());
  for (const auto& f : ds.frames) {
    const auto& calib = ds.calibration_for(f);
    const auto pois = project_frame(f.detections, calib, cfg.projection);
    out.push_back(propose(pois, templates, params, calib.image_rect(), cfg.proposal, f.frame_id));
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radar-driven region proposals: synthesis, proposals, calibration, evaluation", "radarprop"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  app.add_option("--config", config_path, "Pipeline config JSON");
  app.add_option("--seed", seed, "Override the synthesis seed");
  app.add_option("--threads", threads, "Worker threads (1 = single-threaded)")
      ->check(CLI::PositiveNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  std::string synth_out;
  std::optional<int> synth_frames;
  synth->add_option("--out", synth_out, "Frame JSONL path (calibration sidecar written alongside)")
      ->required();
  synth->add_option("--frames", synth_frames, "Override n_frames");

  // propose
  auto* prop = app.add_subcommand("propose", "Generate proposals for every frame");
  std::string prop_dataset, prop_out;
  ScaleFlags prop_scale;
  prop->add_option("--dataset", prop_dataset)->required();
  prop->add_option("--out", prop_out, "Proposal JSONL path")->required();
  prop_scale.attach(prop);

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Grid-search the scale law");
  std::string cal_dataset, cal_out, cal_alpha, cal_beta;
  bool cal_refine = false, cal_exclude = false;
  cal->add_option("--dataset", cal_dataset)->required();
  cal->add_option("--out", cal_out, "Calibration report JSON path");
  cal->add_option("--alpha-range", cal_alpha, "lo,hi,steps");
  cal->add_option("--beta-range", cal_beta, "lo,hi,steps");
  cal->add_flag("--refine", cal_refine, "One coarse-to-fine zoom level");
  cal->add_flag("--exclude-empty", cal_exclude, "Skip frames without POIs");

  // eval
  auto* ev = app.add_subcommand("eval", "Proposal recall against ground truth");
  std::string ev_props, ev_dataset, ev_json, ev_csv;
  ev->add_option("--proposals", ev_props)->required();
  ev->add_option("--dataset", ev_dataset)->required();
  ev->add_option("--out-json", ev_json);
  ev->add_option("--out-csv", ev_csv);

  // bench
  auto* bench = app.add_subcommand("bench", "Time projection plus proposal generation");
  std::string bench_dataset, bench_out;
  int bench_reps = 5;
  ScaleFlags bench_scale;
  bench->add_option("--dataset", bench_dataset)->required();
  bench->add_option("--repetitions", bench_reps, "Best-of-N repetitions")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_out, "Also write the report here");
  bench_scale.attach(bench);

  // render
  auto* rend = app.add_subcommand("render", "Draw ground truth and proposals for one frame");
  std::string rend_dataset, rend_props, rend_out, rend_bg;
  std::int64_t rend_frame = 0;
  rend->add_option("--dataset", rend_dataset)->required();
  rend->add_option("--proposals", rend_props)->required();
  rend->add_option("--frame-id", rend_frame)->required();
  rend->add_option("--out", rend_out, "Output PPM image")->required();
  rend->add_option("--background", rend_bg, "Background PPM image");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const PipelineConfig cfg = load_config(config_path);

    if (*synth) {
      SynthConfig sc = cfg.synth;
      if (seed) sc.seed = *seed;
      if (synth_frames) sc.n_frames = *synth_frames;
      try {
        sc.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const Dataset ds = synthesize(sc);
      save_dataset(ds, synth_out);
      std::size_t gt = 0, dets = 0;
      for (const auto& f : ds.frames) {
        gt += f.gt_boxes.size();
        dets += f.detections.size();
      }
      out << json{{"command", "synth"}, {"frames", ds.frames.size()}, {"detections", dets},
                  {"gt_boxes", gt}, {"out", synth_out},
                  {"calibration", calibration_sidecar_path(synth_out)}}
                 .dump()
          << "\n";
    } else if (*prop) {
      const ScaleParams params = prop_scale.resolve(cfg);
      const Dataset ds = load_dataset(prop_dataset);
      const auto sets = propose_dataset(ds, cfg, params);
      save_proposals(prop_out, sets);
      std::size_t boxes = 0;
      for (const auto& s : sets) boxes += s.size();
      out << json{{"command", "propose"}, {"frames", sets.size()}, {"proposals", boxes},
                  {"alpha", params.alpha}, {"beta", params.beta}, {"out", prop_out}}
                 .dump()
          << "\n";
    } else if (*cal) {
      GridSpec grid = cfg.grid;
      if (!cal_alpha.empty()) grid.alpha = parse_axis_flag(cal_alpha);
      if (!cal_beta.empty()) grid.beta = parse_axis_flag(cal_beta);
      grid.refine = grid.refine || cal_refine;
      const bool exclude = cfg.exclude_empty || cal_exclude;
      const Dataset ds = load_dataset(cal_dataset);
      const auto frames = prepare_calibration_frames(ds, cfg.projection, exclude);
      if (frames.empty()) throw UsageError("calibration dataset has no usable frames");
      CalibrationReport report;
      try {
        report = grid_search(frames, grid, anchor_templates(cfg.anchors), cfg.proposal,
                             {threads});
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!cal_out.empty()) write_text(cal_out, calibration_report_to_json(report) + "\n");
      out << json{{"command", "calibrate"}, {"alpha", report.best.alpha},
                  {"beta", report.best.beta}, {"objective", report.objective},
                  {"frames_used", report.frames_used}, {"total_gt", report.total_gt}}
                 .dump()
          << "\n";
    } else if (*ev) {
      const Dataset ds = load_dataset(ev_dataset);
      const auto sets = load_proposals(ev_props);
      EvalReport report;
      try {
        report = evaluate(sets, ds.frames, cfg.eval);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const std::string js = eval_report_to_json(report);
      if (!ev_json.empty()) write_text(ev_json, js + "\n");
      if (!ev_csv.empty()) write_text(ev_csv, eval_report_to_csv(report));
      out << js << "\n";
    } else if (*bench) {
      const ScaleParams params = bench_scale.resolve(cfg);
      const Dataset ds = load_dataset(bench_dataset);
      BenchOptions opts;
      opts.repetitions = bench_reps;
      opts.threads = threads;
      opts.projection = cfg.projection;
      opts.proposal = cfg.proposal;
      const BenchReport report = run_bench(ds, cfg.anchors, params, opts);
      const std::string js = bench_report_to_json(report);
      if (!bench_out.empty()) write_text(bench_out, js + "\n");
      out << js << "\n";
    } else if (*rend) {
      const Dataset ds = load_dataset(rend_dataset);
      const auto sets = load_proposals(rend_props);
      auto fit = std::find_if(ds.frames.begin(), ds.frames.end(),
                              [&](const Frame& f) { return f.frame_id == rend_frame; });
      if (fit == ds.frames.end()) {
        throw UsageError("frame " + std::to_string(rend_frame) + " not in dataset");
      }
      auto pit = std::find_if(sets.begin(), sets.end(),
                              [&](const ProposalSet& s) { return s.frame_id == rend_frame; });
      if (pit == sets.end()) {
        throw UsageError("frame " + std::to_string(rend_frame) + " not in proposals");
      }
      const auto& calib = ds.calibration_for(*fit);
      std::optional<Raster> bg;
      if (!rend_bg.empty()) bg = Raster::load_ppm(rend_bg);
      const Raster img = [&] {
        try {
          return render_overlay(calib.image_width(), calib.image_height(), fit->gt_boxes,
                                pit->boxes, std::move(bg));
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      img.save_ppm(rend_out);
      out << json{{"command", "render"}, {"frame_id", rend_frame},
                  {"gt_boxes", fit->gt_boxes.size()}, {"proposals", pit->boxes.size()},
                  {"width", img.width()}, {"height", img.height()}, {"out", rend_out}}
                 .dump()
          << "\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace radarprop::cli
