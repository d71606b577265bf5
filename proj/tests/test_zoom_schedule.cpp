#include "doctest.h"

#include <cmath>

#include "gigazoom/rng.hpp"
#include "gigazoom/zoom_schedule.hpp"

using namespace gigazoom;

namespace {
const Resolution kPandaCanvas{26908, 15024};
const Resolution kPandaMax{2560, 1440};
}  // namespace

TEST_CASE("linear schedule endpoints and midpoint") {
  const ZoomSchedule s = linear_schedule(kPandaCanvas, kPandaMax, 10);
  REQUIRE(s.dims.size() == 11);
  CHECK(s.dims[0] == kPandaCanvas);
  CHECK(s.dims[10] == kPandaMax);
  // t=5 is the arithmetic midpoint (w0+wmax)/2, (h0+hmax)/2.
  CHECK(s.dims[5] == Resolution{14734, 8232});
  CHECK(s.dims[5].w == (26908 + 2560) / 2);
  CHECK(s.dims[5].h == (15024 + 1440) / 2);
}

TEST_CASE("exponential schedule endpoints and geometric midpoint") {
  const ZoomSchedule s = exponential_schedule(kPandaCanvas, kPandaMax, 10);
  REQUIRE(s.dims.size() == 11);
  CHECK(s.dims[0] == kPandaCanvas);
  CHECK(s.dims[10] == kPandaMax);
  // Geometric-mean oracle: dims[5] = round(sqrt(d0 * dmax)).
  const int w5 = int(std::lround(std::sqrt(26908.0 * 2560.0)));
  const int h5 = int(std::lround(std::sqrt(15024.0 * 1440.0)));
  CHECK(w5 == 8300);
  CHECK(h5 == 4651);
  CHECK(s.dims[5] == Resolution{w5, h5});
}

TEST_CASE("overzoom extension continues the formula") {
  const ZoomSchedule s = exponential_schedule(kPandaCanvas, kPandaMax, 10);

  const ZoomSchedule same = extend_overzoom(s, 0);
  CHECK(same.dims == s.dims);

  // Per-step-ratio oracle: dims[11] = round(dims[10] * (dmax/d0)^(1/L)).
  const double rw = std::pow(2560.0 / 26908.0, 0.1);
  const double rh = std::pow(1440.0 / 15024.0, 0.1);
  const int w11 = int(std::lround(2560.0 * rw));
  const int h11 = int(std::lround(1440.0 * rh));
  CHECK(w11 == 2023);
  CHECK(h11 == 1139);

  const ZoomSchedule oz = extend_overzoom(s, 1);
  REQUIRE(oz.dims.size() == 12);
  CHECK(oz.overzoom_levels == 1);
  CHECK(oz.dims[11] == Resolution{w11, h11});
  CHECK(oz.dims[11].w < kPandaMax.w);
  CHECK(oz.dims[11].h < kPandaMax.h);

  const ZoomSchedule oz2 = extend_overzoom(s, 2);
  REQUIRE(oz2.dims.size() == 13);
  for (std::size_t i = 1; i < oz2.dims.size(); ++i) {
    CHECK(oz2.dims[i].w <= oz2.dims[i - 1].w);
    CHECK(oz2.dims[i].h <= oz2.dims[i - 1].h);
  }
}

TEST_CASE("linear overzoom that reaches below one pixel is rejected") {
  const ZoomSchedule s = linear_schedule({100, 100}, {10, 10}, 9);  // step 10
  CHECK_THROWS_AS(extend_overzoom(s, 1), Error);  // 10 - 10 = 0 px
}

TEST_CASE("schedule preconditions") {
  CHECK_THROWS_AS(linear_schedule({100, 100}, {200, 100}, 5), std::invalid_argument);
  CHECK_THROWS_AS(exponential_schedule({100, 100}, {50, 50}, 0), std::invalid_argument);
}

TEST_CASE("endpoints, monotonicity, ratio constancy on random tuples") {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const int wmax = int(rng.uniform_int(1, 4000));
    const int hmax = int(rng.uniform_int(1, 4000));
    const int w0 = wmax + int(rng.uniform_int(0, 40000));
    const int h0 = hmax + int(rng.uniform_int(0, 40000));
    const int levels = int(rng.uniform_int(1, 30));
    const bool exp = rng.uniform() < 0.5;
    const ZoomSchedule s = exp ? exponential_schedule({w0, h0}, {wmax, hmax}, levels)
                               : linear_schedule({w0, h0}, {wmax, hmax}, levels);

    REQUIRE(int(s.dims.size()) == levels + 1);
    CHECK(s.dims.front() == Resolution{w0, h0});
    CHECK(std::abs(s.dims[std::size_t(levels)].w - wmax) <= 1);
    CHECK(std::abs(s.dims[std::size_t(levels)].h - hmax) <= 1);

    for (std::size_t t = 1; t < s.dims.size(); ++t) {
      CHECK(s.dims[t].w <= s.dims[t - 1].w);
      CHECK(s.dims[t].h <= s.dims[t - 1].h);
      CHECK(s.dims[t].w >= 1);
      CHECK(s.dims[t].h >= 1);
    }

    if (exp) {
      const double ratio = std::pow(double(wmax) / w0, 1.0 / levels);
      for (std::size_t t = 0; t + 1 < s.dims.size(); ++t) {
        const double step = double(s.dims[t + 1].w) / s.dims[t].w;
        CHECK(std::abs(step - ratio) <= 2.0 / s.dims[t].w);
      }
    }
  }
}
