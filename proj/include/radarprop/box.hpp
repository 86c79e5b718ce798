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

#ifndef RADARPROP_BOX_HPP_
#define RADARPROP_BOX_HPP_

#include <algorithm>
#include <cmath>
#include <optional>

namespace radarprop {

/// Axis-aligned box in continuous pixel coordinates. A valid box has
/// x1 < x2 and y1 < y2; code that could produce an empty box returns
/// std::nullopt instead.
struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }

  bool valid() const {
    return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
           std::isfinite(y2) && x1 < x2 && y1 < y2;
  }

  bool operator==(const BoundingBox&) const = default;
};

/// Pixel rectangle [0, width] x [0, height] of an image.
struct ImageRect {
  int width = 0;
  int height = 0;

  BoundingBox as_box() const {
    return {0.0, 0.0, static_cast<double>(width), static_cast<double>(height)};
  }
};

inline std::optional<BoundingBox> intersect(const BoundingBox& a,
                                            const BoundingBox& b) {
  BoundingBox r{std::max(a.x1, b.x1), std::max(a.y1, b.y1),
                std::min(a.x2, b.x2), std::min(a.y2, b.y2)};
  if (r.x1 < r.x2 && r.y1 < r.y2) return r;
  return std::nullopt;
}

inline std::optional<BoundingBox> clip_to(const BoundingBox& box,
                                          const ImageRect& image) {
  return intersect(box, image.as_box());
}

}  // namespace radarprop

#endif  // RADARPROP_BOX_HPP_
