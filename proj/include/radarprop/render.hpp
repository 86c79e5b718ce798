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

#ifndef RADARPROP_RENDER_HPP_
#define RADARPROP_RENDER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radarprop/box.hpp"

namespace radarprop {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kGroundTruthColor{0, 255, 0};
inline constexpr Rgb kProposalColor{255, 0, 0};
inline constexpr Rgb kBackgroundColor{32, 32, 32};

/// 8-bit RGB raster, row-major.
class Raster {
 public:
  Raster(int width, int height, Rgb fill = kBackgroundColor);

  int width() const { return width_; }
  int height() const { return height_; }
  Rgb at(int x, int y) const { return pixels_[index(x, y)]; }
  void set(int x, int y, Rgb c) { pixels_[index(x, y)] = c; }

  /// One-pixel outline; coordinates round to the nearest pixel and clamp
  /// to the raster.
  void draw_outline(const BoundingBox& box, Rgb color);

  std::size_t count(Rgb color) const;

  /// Binary PPM (P6, maxval 255).
  std::vector<std::uint8_t> encode_ppm() const;
  static Raster decode_ppm(std::span<const std::uint8_t> bytes);

  void save_ppm(const std::string& path) const;
  static Raster load_ppm(const std::string& path);

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

/// Proposals first, ground truth drawn over them.
Raster render_overlay(int width, int height, std::span<const BoundingBox> gt,
                      std::span<const BoundingBox> proposals,
                      std::optional<Raster> background = std::nullopt);

}  // namespace radarprop

#endif  // RADARPROP_RENDER_HPP_
