#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gigazoom {

// Runtime failures (I/O, file formats, subprocess protocol). Violated
// preconditions throw std::invalid_argument instead.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

struct Resolution {
  int w = 0;
  int h = 0;

  std::int64_t area() const { return std::int64_t(w) * h; }
  bool valid() const { return w >= 1 && h >= 1; }
  bool operator==(const Resolution&) const = default;
};

// Axis-aligned rectangle in level-0 pixel coordinates, origin top-left.
struct PixelRect {
  int x = 0;
  int y = 0;
  Resolution size;

  int x2() const { return x + size.w; }
  int y2() const { return y + size.h; }
  std::int64_t area() const { return size.area(); }
  bool contains(int px, int py) const {
    return px >= x && px < x2() && py >= y && py < y2();
  }
  bool contains(const PixelRect& o) const {
    return o.x >= x && o.y >= y && o.x2() <= x2() && o.y2() <= y2();
  }
  bool within(Resolution canvas) const {
    return x >= 0 && y >= 0 && size.valid() && x2() <= canvas.w && y2() <= canvas.h;
  }
  bool operator==(const PixelRect&) const = default;
};

inline PixelRect full_rect(Resolution canvas) { return PixelRect{0, 0, canvas}; }

// Rectangle in density-map cell coordinates.
struct GridRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int x2() const { return x + w; }
  int y2() const { return y + h; }
  bool within(Resolution grid) const {
    return x >= 0 && y >= 0 && w >= 1 && h >= 1 && x2() <= grid.w && y2() <= grid.h;
  }
  bool operator==(const GridRect&) const = default;
};

// Real-valued point, used for cluster centers and planted hot-spots.
struct PointF {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const PointF&) const = default;
};

inline std::string to_string(Resolution r) {
  return std::to_string(r.w) + "x" + std::to_string(r.h);
}

inline std::string to_string(const PixelRect& r) {
  return "[" + std::to_string(r.x) + "," + std::to_string(r.y) + " " +
         to_string(r.size) + "]";
}

}  // namespace gigazoom
