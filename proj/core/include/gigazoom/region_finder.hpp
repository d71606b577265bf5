#pragma once

#include <utility>
#include <vector>

#include "gigazoom/density_map.hpp"
#include "gigazoom/geometry.hpp"

namespace gigazoom {

struct KernelSize {
  int w = 1;
  int h = 1;
  bool operator==(const KernelSize&) const = default;
};

// Valid-convolution window sums over a density map: one entry per placement
// of a k_w x k_h window.
struct WindowSumGrid {
  Resolution res;
  std::vector<double> v;

  double at(int x, int y) const { return v[std::size_t(y) * res.w + x]; }
};

struct CellPoint {
  int x = 0;
  int y = 0;
  bool operator==(const CellPoint&) const = default;
};

// Window footprint in density cells for zooming from a (w_t, h_t) window to
// a (w_t1, h_t1) one: the pixel ratio scaled to the map resolution, rounded,
// clamped to [1, dim].
KernelSize kernel_size(Resolution cur, Resolution next, Resolution dres);

// All window sums via a summed-area table; cost independent of kernel size.
WindowSumGrid window_sums(const DensityMap& d, KernelSize k);

// Maximum entry; ties break to the row-major first occurrence.
CellPoint argmax_window(const WindowSumGrid& s);

// Maps a window origin in parent's density cells to a child rect in level-0
// pixels. The child is shifted (never shrunk) to stay inside the parent.
PixelRect map_to_global(const PixelRect& parent, CellPoint peak, Resolution dres,
                        Resolution child_size);

}  // namespace gigazoom
