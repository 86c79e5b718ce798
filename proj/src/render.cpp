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

#include "radarprop/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include "radarprop/error.hpp"

namespace radarprop {

Raster::Raster(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("raster size must be positive");
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

void Raster::draw_outline(const BoundingBox& box, Rgb color) {
  auto px = [](double v, int limit) {
    return std::clamp(static_cast<int>(std::lround(v)), 0, limit - 1);
  };
  const int x1 = px(box.x1, width_), x2 = px(box.x2, width_);
  const int y1 = px(box.y1, height_), y2 = px(box.y2, height_);
  for (int x = x1; x <= x2; ++x) {
    set(x, y1, color);
    set(x, y2, color);
  }
  for (int y = y1; y <= y2; ++y) {
    set(x1, y, color);
    set(x2, y, color);
  }
}

std::size_t Raster::count(Rgb color) const {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), color));
}

std::vector<std::uint8_t> Raster::encode_ppm() const {
  const std::string header =
      "P6\n" + std::to_string(width_) + " " + std::to_string(height_) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + pixels_.size() * 3);
  for (const auto& p : pixels_) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

Raster Raster::decode_ppm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    long v = 0;
    std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) && v < 1'000'000) {
      v = v * 10 + (bytes[pos++] - '0');
    }
    if (pos == start) throw ParseError("malformed PPM header");
    return static_cast<int>(v);
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw ParseError("not a binary PPM (P6) image");
  }
  pos = 2;
  const int w = read_int();
  const int h = read_int();
  const int maxval = read_int();
  if (w <= 0 || h <= 0 || maxval != 255) throw ParseError("unsupported PPM dimensions or depth");
  ++pos;  // single whitespace before the raster
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3;
  if (bytes.size() < pos + need) throw ParseError("truncated PPM raster");

  Raster r(w, h);
  for (std::size_t i = 0; i < r.pixels_.size(); ++i) {
    r.pixels_[i] = {bytes[pos + 3 * i], bytes[pos + 3 * i + 1], bytes[pos + 3 * i + 2]};
  }
  return r;
}

void Raster::save_ppm(const std::string& path) const {
  const auto bytes = encode_ppm();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Raster Raster::load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_ppm(bytes);
}

Raster render_overlay(int width, int height, std::span<const BoundingBox> gt,
                      std::span<const BoundingBox> proposals,
                      std::optional<Raster> background) {
  Raster r = background ? std::move(*background) : Raster(width, height);
  if (r.width() != width || r.height() != height) {
    throw std::invalid_argument("background size does not match the camera image");
  }
  for (const auto& b : proposals) r.draw_outline(b, kProposalColor);
  for (const auto& b : gt) r.draw_outline(b, kGroundTruthColor);
  return r;
}

}  // namespace radarprop
