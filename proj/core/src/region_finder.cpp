#include "gigazoom/region_finder.hpp"

#include <algorithm>
#include <cmath>

namespace gigazoom {

KernelSize kernel_size(Resolution cur, Resolution next, Resolution dres) {
  require(cur.valid() && next.valid() && dres.valid(), "kernel_size: empty input");
  require(next.w <= cur.w && next.h <= cur.h, "kernel_size: next window larger than current");
  const auto clamp_dim = [](double v, int dim) {
    return std::clamp(int(std::lround(v)), 1, dim);
  };
  return {clamp_dim(double(next.w) / cur.w * dres.w, dres.w),
          clamp_dim(double(next.h) / cur.h * dres.h, dres.h)};
}

WindowSumGrid window_sums(const DensityMap& d, KernelSize k) {
  require(k.w >= 1 && k.h >= 1 && k.w <= d.w() && k.h <= d.h(),
          "window_sums: kernel larger than map");
  const int w = d.w(), h = d.h();
  // Summed-area table with a zero top row / left column.
  std::vector<double> sat(std::size_t(w + 1) * (h + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    const float* src = d.values().data() + std::size_t(y) * w;
    const double* up = sat.data() + std::size_t(y) * (w + 1);
    double* cur = sat.data() + std::size_t(y + 1) * (w + 1);
    for (int x = 0; x < w; ++x) {
      row += src[x];
      cur[x + 1] = up[x + 1] + row;
    }
  }
  WindowSumGrid s;
  s.res = {w - k.w + 1, h - k.h + 1};
  s.v.resize(std::size_t(s.res.area()));
  for (int y = 0; y < s.res.h; ++y) {
    const double* top = sat.data() + std::size_t(y) * (w + 1);
    const double* bot = sat.data() + std::size_t(y + k.h) * (w + 1);
    double* dst = s.v.data() + std::size_t(y) * s.res.w;
    for (int x = 0; x < s.res.w; ++x)
      dst[x] = bot[x + k.w] - bot[x] - top[x + k.w] + top[x];
  }
  return s;
}

CellPoint argmax_window(const WindowSumGrid& s) {
  require(!s.v.empty(), "argmax_window: empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.v.size(); ++i)
    if (s.v[i] > s.v[best]) best = i;
  return {int(best % std::size_t(s.res.w)), int(best / std::size_t(s.res.w))};
}

PixelRect map_to_global(const PixelRect& parent, CellPoint peak, Resolution dres,
                        Resolution child_size) {
  require(dres.valid() && child_size.valid(), "map_to_global: empty resolution");
  require(child_size.w <= parent.size.w && child_size.h <= parent.size.h,
          "map_to_global: child larger than parent");
  int cx = parent.x + int(std::lround(double(parent.size.w) * peak.x / dres.w));
  int cy = parent.y + int(std::lround(double(parent.size.h) * peak.y / dres.h));
  cx = std::clamp(cx, parent.x, parent.x2() - child_size.w);
  cy = std::clamp(cy, parent.y, parent.y2() - child_size.h);
  return {cx, cy, child_size};
}

}  // namespace gigazoom
