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

#include "radarprop/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "radarprop/error.hpp"

namespace radarprop {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kClassNames[kNumObjectClasses] = {
    "car", "truck", "person", "motorcycle", "bicycle", "bus"};

bool finite(const VehiclePoint& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

template <typename T>
T field(const ojson& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return it->get<T>();
  } catch (const ojson::exception&) {
    throw ParseError(std::string("field \"") + key + "\" has the wrong type");
  }
}

CameraCalibration calibration_from_json(const ojson& j) {
  if (!j.is_object()) throw ParseError("calibration entry must be an object");
  const auto h = field<std::vector<double>>(j, "h");
  if (h.size() != 12) throw ValidationError("\"h\" must hold 12 numbers");
  std::array<double, 12> coeffs{};
  std::copy(h.begin(), h.end(), coeffs.begin());
  try {
    return CameraCalibration(coeffs, field<int>(j, "width"), field<int>(j, "height"));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(ObjectClass c) {
  return kClassNames[static_cast<int>(c)];
}

std::optional<ObjectClass> object_class_from_string(std::string_view s) {
  for (int i = 0; i < kNumObjectClasses; ++i) {
    if (kClassNames[i] == s) return static_cast<ObjectClass>(i);
  }
  return std::nullopt;
}

const CameraCalibration& Dataset::calibration_for(const Frame& frame) const {
  auto it = calibrations.find(frame.calib_ref);
  if (it == calibrations.end()) {
    throw MissingCalibrationError("unknown calib_ref \"" + frame.calib_ref + "\"");
  }
  return it->second;
}

std::string calibration_sidecar_path(const std::string& dataset_path) {
  std::filesystem::path p(dataset_path);
  p.replace_extension(".calib.json");
  return p.string();
}

void validate_frame(const Frame& frame) {
  if (frame.gt_boxes.size() != frame.gt_classes.size()) {
    throw ValidationError("gt_boxes and gt_classes differ in length");
  }
  for (const auto& b : frame.gt_boxes) {
    if (!b.valid()) throw ValidationError("ground truth box is empty or non-finite");
  }
  for (const auto& det : frame.detections) {
    if (!finite(det.position) || !std::isfinite(det.range_rate)) {
      throw ValidationError("detection " + std::to_string(det.id) + " has non-finite values");
    }
    if (det.range) {
      const double r = *det.range;
      const double norm = std::hypot(det.position.x, det.position.y);
      if (!std::isfinite(r) || r < 0.0) {
        throw ValidationError("detection " + std::to_string(det.id) + " has a negative range");
      }
      if (std::abs(r - norm) > kRangeTolerance * std::max(r, norm)) {
        throw ValidationError("detection " + std::to_string(det.id) +
                              " range disagrees with its position");
      }
    }
  }
}

std::string frame_to_json_line(const Frame& frame) {
  ojson dets = ojson::array();
  for (const auto& d : frame.detections) {
    ojson jd;
    jd["x"] = d.position.x;
    jd["y"] = d.position.y;
    jd["z"] = d.position.z;
    if (d.range) jd["range"] = *d.range;
    jd["range_rate"] = d.range_rate;
    jd["id"] = d.id;
    dets.push_back(std::move(jd));
  }
  ojson gt = ojson::array();
  for (std::size_t i = 0; i < frame.gt_boxes.size(); ++i) {
    const auto& b = frame.gt_boxes[i];
    ojson jg;
    jg["box"] = {b.x1, b.y1, b.x2, b.y2};
    jg["class"] = to_string(frame.gt_classes[i]);
    gt.push_back(std::move(jg));
  }
  ojson j;
  j["frame_id"] = frame.frame_id;
  j["detections"] = std::move(dets);
  j["gt"] = std::move(gt);
  j["calib_ref"] = frame.calib_ref;
  return j.dump();
}

Frame frame_from_json_line(std::string_view line) {
  ojson j;
  try {
    j = ojson::parse(line);
  } catch (const ojson::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("frame must be a JSON object");

  Frame frame;
  frame.frame_id = field<std::int64_t>(j, "frame_id");
  frame.calib_ref = field<std::string>(j, "calib_ref");

  const auto dets = field<ojson>(j, "detections");
  if (!dets.is_array()) throw ParseError("\"detections\" must be an array");
  for (const auto& jd : dets) {
    RadarDetection d;
    d.position = {field<double>(jd, "x"), field<double>(jd, "y"), field<double>(jd, "z")};
    if (auto it = jd.find("range"); it != jd.end() && !it->is_null()) {
      d.range = field<double>(jd, "range");
    }
    d.range_rate = jd.contains("range_rate") ? field<double>(jd, "range_rate") : 0.0;
    d.id = field<std::int64_t>(jd, "id");
    frame.detections.push_back(d);
  }

  const auto gt = field<ojson>(j, "gt");
  if (!gt.is_array()) throw ParseError("\"gt\" must be an array");
  for (const auto& jg : gt) {
    const auto b = field<std::vector<double>>(jg, "box");
    if (b.size() != 4) throw ParseError("\"box\" must be [x1, y1, x2, y2]");
    const auto name = field<std::string>(jg, "class");
    const auto cls = object_class_from_string(name);
    if (!cls) throw ValidationError("unknown class \"" + name + "\"");
    frame.gt_boxes.push_back({b[0], b[1], b[2], b[3]});
    frame.gt_classes.push_back(*cls);
  }
  validate_frame(frame);
  return frame;
}

std::string calibrations_to_json(const CalibrationMap& calibs) {
  ojson j = ojson::object();
  for (const auto& [ref, c] : calibs) {
    ojson jc;
    jc["h"] = c.coefficients();
    jc["width"] = c.image_width();
    jc["height"] = c.image_height();
    j[ref] = std::move(jc);
  }
  return j.dump(2);
}

CalibrationMap calibrations_from_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw ParseError(std::string("calibration file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("calibration file must hold a JSON object");
  CalibrationMap out;
  for (const auto& [ref, jc] : j.items()) {
    try {
      out.emplace(ref, calibration_from_json(jc));
    } catch (const ParseError& e) {
      throw ParseError("calibration \"" + ref + "\": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("calibration \"" + ref + "\": " + e.what());
    }
  }
  return out;
}

Dataset load_dataset(const std::string& path, std::optional<std::string> calib_path) {
  Dataset ds;
  const std::string sidecar = calib_path.value_or(calibration_sidecar_path(path));
  if (std::filesystem::exists(sidecar)) {
    ds.calibrations = calibrations_from_json(read_file(sidecar));
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::unordered_set<std::int64_t> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Frame frame;
    try {
      frame = frame_from_json_line(line);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    } catch (const ValidationError& e) {
      throw ValidationError(e.what(), lineno);
    }
    if (!ids.insert(frame.frame_id).second) {
      throw ValidationError("duplicate frame_id " + std::to_string(frame.frame_id), lineno);
    }
    if (!ds.calibrations.contains(frame.calib_ref)) {
      throw MissingCalibrationError("unknown calib_ref \"" + frame.calib_ref + "\"", lineno);
    }
    ds.frames.push_back(std::move(frame));
  }
  return ds;
}

void save_dataset(const Dataset& dataset, const std::string& path,
                  std::optional<std::string> calib_path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (const auto& f : dataset.frames) out << frame_to_json_line(f) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
  }
  const std::string sidecar = calib_path.value_or(calibration_sidecar_path(path));
  std::ofstream out(sidecar, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + sidecar + " for writing");
  out << calibrations_to_json(dataset.calibrations) << '\n';
  if (!out) throw std::runtime_error("write failed: " + sidecar);
}

}  // namespace radarprop
