#include "gigazoom/resample.hpp"

#include <algorithm>
#include <cmath>

namespace gigazoom {

AxisTaps mass_taps(int in_n, int out_n) {
  require(in_n >= 1 && out_n >= 1, "mass_taps: axis sizes must be >= 1");
  AxisTaps t;
  t.in_n = in_n;
  t.out_n = out_n;
  t.first.resize(in_n);
  t.count.resize(in_n);
  t.taps.reserve(std::size_t(std::max(in_n, 2 * out_n)));
  const std::int64_t in = in_n, out = out_n;
  for (std::int64_t i = 0; i < in; ++i) {
    t.first[std::size_t(i)] = std::int32_t(t.taps.size());
    const std::int64_t lo = i * out;        // source cell spans [lo, hi)
    const std::int64_t hi = (i + 1) * out;  // in 1/in units of the output axis
    std::int64_t o = lo / in;
    for (; o * in < hi && o < out; ++o) {
      std::int64_t ov = std::min(hi, (o + 1) * in) - std::max(lo, o * in);
      if (ov <= 0) continue;
      t.taps.push_back({std::int32_t(o), double(ov) / double(out)});
    }
    t.count[std::size_t(i)] = std::int32_t(t.taps.size()) - t.first[std::size_t(i)];
  }
  return t;
}

AxisTaps bilinear_taps(int in_n, int out_n) {
  require(in_n >= 1 && out_n >= in_n, "bilinear_taps: requires out_n >= in_n");
  AxisTaps t;
  t.in_n = in_n;
  t.out_n = out_n;
  std::vector<std::vector<AxisTaps::Tap>> per_src;
  per_src.resize(std::size_t(in_n));
  for (int o = 0; o < out_n; ++o) {
    double s = (o + 0.5) * double(in_n) / double(out_n) - 0.5;
    int s0 = int(std::floor(s));
    double f = s - s0;
    int a = std::clamp(s0, 0, in_n - 1);
    int b = std::clamp(s0 + 1, 0, in_n - 1);
    if (a == b) {
      per_src[std::size_t(a)].push_back({o, 1.0});
    } else {
      per_src[std::size_t(a)].push_back({o, 1.0 - f});
      per_src[std::size_t(b)].push_back({o, f});
    }
  }
  t.first.resize(std::size_t(in_n));
  t.count.resize(std::size_t(in_n));
  for (int i = 0; i < in_n; ++i) {
    t.first[std::size_t(i)] = std::int32_t(t.taps.size());
    for (auto& tap : per_src[std::size_t(i)]) t.taps.push_back(tap);
    t.count[std::size_t(i)] = std::int32_t(t.taps.size()) - t.first[std::size_t(i)];
  }
  return t;
}

}  // namespace gigazoom
