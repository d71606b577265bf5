#include "doctest.h"

#include <cmath>

#include "gigazoom/region_finder.hpp"
#include "gigazoom/zoom_schedule.hpp"
#include "helpers.hpp"

using namespace gigazoom;

namespace {

// Brute-force window sums, the oracle the summed-area table is checked
// against.
WindowSumGrid window_sums_oracle(const DensityMap& d, KernelSize k) {
  WindowSumGrid s;
  s.res = {d.w() - k.w + 1, d.h() - k.h + 1};
  s.v.resize(std::size_t(s.res.area()));
  for (int y = 0; y < s.res.h; ++y)
    for (int x = 0; x < s.res.w; ++x) {
      double sum = 0.0;
      for (int j = 0; j < k.h; ++j)
        for (int i = 0; i < k.w; ++i) sum += d.at(x + i, y + j);
      s.v[std::size_t(y) * s.res.w + x] = sum;
    }
  return s;
}

CellPoint argmax_oracle(const WindowSumGrid& s) {
  CellPoint best{0, 0};
  double bv = s.v[0];
  for (int y = 0; y < s.res.h; ++y)
    for (int x = 0; x < s.res.w; ++x)
      if (s.at(x, y) > bv) {
        bv = s.at(x, y);
        best = {x, y};
      }
  return best;
}

}  // namespace

TEST_CASE("kernel_size ratios") {
  // Ratio 1/2 on a 320-cell map.
  CHECK(kernel_size({1000, 1000}, {500, 500}, {320, 320}) == KernelSize{160, 160});

  // Identity ratio forces the full map (single window).
  CHECK(kernel_size({800, 600}, {800, 600}, {320, 180}) == KernelSize{320, 180});

  // Consecutive-level ratio of the exponential PANDA schedule, map width 320:
  // oracle = round(dims[1].w / dims[0].w * 320).
  const ZoomSchedule s = exponential_schedule({26908, 15024}, {2560, 1440}, 10);
  const int kw = int(std::lround(double(s.dims[1].w) / s.dims[0].w * 320.0));
  CHECK(kw == 253);
  CHECK(kernel_size(s.dims[0], s.dims[1], {320, 180}).w == kw);
}

TEST_CASE("window_sums identity kernel and full window") {
  DensityMap d({2, 2}, {1.0f, 2.0f, 3.0f, 4.0f});

  const WindowSumGrid id = window_sums(d, {1, 1});
  CHECK(id.res == Resolution{2, 2});
  CHECK(id.at(0, 0) == doctest::Approx(1.0));
  CHECK(id.at(1, 1) == doctest::Approx(4.0));

  const WindowSumGrid full = window_sums(d, {2, 2});
  CHECK(full.res == Resolution{1, 1});
  CHECK(full.at(0, 0) == doctest::Approx(10.0));
}

TEST_CASE("window_sums equals brute force on random instances") {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const Resolution res{int(rng.uniform_int(1, 128)), int(rng.uniform_int(1, 128))};
    const DensityMap d = test::random_density(rng, res);
    const KernelSize k{int(rng.uniform_int(1, res.w)), int(rng.uniform_int(1, res.h))};
    const WindowSumGrid got = window_sums(d, k);
    const WindowSumGrid want = window_sums_oracle(d, k);
    REQUIRE(got.res == want.res);
    double max_diff = 0.0;
    for (std::size_t j = 0; j < got.v.size(); ++j)
      max_diff = std::max(max_diff, std::abs(got.v[j] - want.v[j]));
    CHECK(max_diff <= 1e-4);
  }
}

TEST_CASE("window_sums rejects oversized kernels") {
  DensityMap d({4, 4}, 1.0f);
  CHECK_THROWS_AS(window_sums(d, {5, 1}), std::invalid_argument);
}

TEST_CASE("argmax tie-breaking is row-major first occurrence") {
  WindowSumGrid single;
  single.res = {1, 1};
  single.v = {3.0};
  CHECK(argmax_window(single) == CellPoint{0, 0});

  WindowSumGrid flat;
  flat.res = {5, 4};
  flat.v.assign(20, 1.0);
  CHECK(argmax_window(flat) == CellPoint{0, 0});

  Rng rng(123);
  for (int i = 0; i < 200; ++i) {
    WindowSumGrid g;
    g.res = {int(rng.uniform_int(1, 40)), int(rng.uniform_int(1, 40))};
    g.v.resize(std::size_t(g.res.area()));
    for (auto& v : g.v) v = rng.uniform_int(0, 8);  // many ties
    CHECK(argmax_window(g) == argmax_oracle(g));
  }
}

TEST_CASE("argmax is invariant under positive scaling") {
  Rng rng(17);
  const DensityMap d = test::random_density(rng, {48, 32});
  const KernelSize k{9, 7};
  const CellPoint base = argmax_window(window_sums(d, k));

  std::vector<float> scaled = d.values();
  for (auto& v : scaled) v *= 7.25f;
  const CellPoint same = argmax_window(window_sums(DensityMap(d.res(), scaled), k));
  CHECK(base == same);
}

TEST_CASE("map_to_global placement") {
  const PixelRect parent{1000, 500, {8000, 6000}};

  // Peak (0,0) keeps the parent origin.
  CHECK(map_to_global(parent, {0, 0}, {320, 240}, {100, 100}) ==
        PixelRect{1000, 500, {100, 100}});

  // Direct substitution: 1000 + 8000 * 80 / 320 = 3000.
  const PixelRect child = map_to_global(parent, {80, 0}, {320, 240}, {100, 100});
  CHECK(child.x == 3000);
  CHECK(child.y == 500);
}

TEST_CASE("map_to_global round trip and containment") {
  Rng rng(31);
  const Resolution canvas{20000, 12000};
  for (int i = 0; i < 300; ++i) {
    const Resolution dres{int(rng.uniform_int(8, 320)), int(rng.uniform_int(8, 320))};
    PixelRect parent;
    parent.size = {int(rng.uniform_int(100, canvas.w)), int(rng.uniform_int(100, canvas.h))};
    parent.x = int(rng.uniform_int(0, canvas.w - parent.size.w));
    parent.y = int(rng.uniform_int(0, canvas.h - parent.size.h));
    const Resolution child{int(rng.uniform_int(1, parent.size.w)),
                           int(rng.uniform_int(1, parent.size.h))};
    const CellPoint peak{int(rng.uniform_int(0, dres.w - 1)),
                         int(rng.uniform_int(0, dres.h - 1))};

    const PixelRect got = map_to_global(parent, peak, dres, child);
    CHECK(parent.contains(got));
    CHECK(got.within(canvas));

    // Inverting the mapping recovers the peak within one cell, unless the
    // child was clamped at the parent edge.
    if (got.x > parent.x && got.x2() < parent.x2()) {
      const int back = int(std::lround(double(got.x - parent.x) * dres.w / parent.size.w));
      CHECK(std::abs(back - peak.x) <= 1);
    }
    if (got.y > parent.y && got.y2() < parent.y2()) {
      const int back = int(std::lround(double(got.y - parent.y) * dres.h / parent.size.h));
      CHECK(std::abs(back - peak.y) <= 1);
    }
  }
}

TEST_CASE("argmax window is at least as dense as every other window") {
  Rng rng(55);
  for (int i = 0; i < 30; ++i) {
    const Resolution res{int(rng.uniform_int(4, 64)), int(rng.uniform_int(4, 64))};
    const DensityMap d = test::random_density(rng, res);
    const KernelSize k{int(rng.uniform_int(1, res.w)), int(rng.uniform_int(1, res.h))};
    const CellPoint peak = argmax_window(window_sums(d, k));
    const WindowSumGrid oracle = window_sums_oracle(d, k);
    const double peak_sum = oracle.at(peak.x, peak.y);
    for (const double v : oracle.v) CHECK(peak_sum >= v - 1e-6);
  }
}
