#pragma once

#include <cstdint>
#include <vector>

#include "gigazoom/geometry.hpp"

namespace gigazoom {

// Per-source-index scatter weights for one axis of a separable resample,
// stored CSR-style. taps[first[i] .. first[i]+count[i]) lists the output
// indices source index i contributes to.
struct AxisTaps {
  struct Tap {
    std::int32_t out;
    double weight;
  };
  std::vector<std::int32_t> first;
  std::vector<std::int32_t> count;
  std::vector<Tap> taps;

  int in_n = 0;
  int out_n = 0;
};

// Area-overlap taps: source cell i spans [i*out, (i+1)*out) in units where
// output cell o spans [o*in, (o+1)*in). Weights are the overlap fraction of
// the source cell, so they sum to exactly 1 per source index. Computed with
// integer boundaries; exact for in == out.
AxisTaps mass_taps(int in_n, int out_n);

// Bilinear scatter taps for enlarging an image axis (out_n >= in_n). Built
// per output sample and inverted into scatter form; weights per output sum
// to 1, edge samples clamp.
AxisTaps bilinear_taps(int in_n, int out_n);

}  // namespace gigazoom
