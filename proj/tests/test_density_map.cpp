#include "doctest.h"

#include <cmath>

#include "gigazoom/density_map.hpp"
#include "helpers.hpp"

using namespace gigazoom;
using test::TempDir;

namespace {

// Independent summation oracle: Kahan-compensated, reverse order.
double kahan_total(const DensityMap& d) {
  double s = 0.0, c = 0.0;
  for (auto it = d.values().rbegin(); it != d.values().rend(); ++it) {
    const double y = double(*it) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

// Area-overlap resize oracle with exact integer cell boundaries: source cell
// i spans [i*out, (i+1)*out), output cell o spans [o*in, (o+1)*in).
DensityMap resize_oracle(const DensityMap& d, Resolution out) {
  std::vector<double> acc(std::size_t(out.area()), 0.0);
  for (int oy = 0; oy < out.h; ++oy) {
    for (int ox = 0; ox < out.w; ++ox) {
      double v = 0.0;
      for (int sy = 0; sy < d.h(); ++sy) {
        const std::int64_t ovy =
            std::max<std::int64_t>(0, std::min<std::int64_t>((sy + 1LL) * out.h, (oy + 1LL) * d.h()) -
                                          std::max<std::int64_t>(sy * 1LL * out.h, oy * 1LL * d.h()));
        if (ovy == 0) continue;
        for (int sx = 0; sx < d.w(); ++sx) {
          const std::int64_t ovx =
              std::max<std::int64_t>(0, std::min<std::int64_t>((sx + 1LL) * out.w, (ox + 1LL) * d.w()) -
                                            std::max<std::int64_t>(sx * 1LL * out.w, ox * 1LL * d.w()));
          if (ovx == 0) continue;
          v += double(d.at(sx, sy)) * (double(ovx) / out.w) * (double(ovy) / out.h);
        }
      }
      acc[std::size_t(oy) * out.w + ox] = v;
    }
  }
  std::vector<float> vals(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) vals[i] = float(acc[i]);
  return DensityMap(out, std::move(vals));
}

}  // namespace

TEST_CASE("total_count basics") {
  CHECK(total_count(DensityMap({4, 4}, 0.0f)) == 0.0);

  DensityMap d({2, 2}, {1.0f, 2.0f, 3.0f, 4.0f});
  CHECK(total_count(d) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("total_count matches an independent oracle") {
  Rng rng(42);
  const DensityMap d = test::random_density(rng, {64, 64});
  const double oracle = kahan_total(d);
  CHECK(std::abs(total_count(d) - oracle) <= 1e-6 * std::max(1.0, std::abs(oracle)));
}

TEST_CASE("resize_mass_preserving aggregation and split") {
  DensityMap ones({2, 2}, 1.0f);

  const DensityMap down = resize_mass_preserving(ones, {1, 1});
  CHECK(down.at(0, 0) == doctest::Approx(4.0));

  const DensityMap up = resize_mass_preserving(ones, {4, 4});
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) CHECK(up.at(x, y) == doctest::Approx(0.25));
  CHECK(total_count(up) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("resize_mass_preserving matches the area-overlap oracle") {
  Rng rng(7);
  const DensityMap d = test::random_density(rng, {30, 20});
  const Resolution out{17, 11};
  const DensityMap got = resize_mass_preserving(d, out);
  const DensityMap want = resize_oracle(d, out);
  REQUIRE(got.res() == want.res());
  for (int y = 0; y < out.h; ++y)
    for (int x = 0; x < out.w; ++x)
      CHECK(got.at(x, y) == doctest::Approx(want.at(x, y)).epsilon(1e-5));
  const double in_total = total_count(d);
  CHECK(std::abs(total_count(got) - in_total) <= 1e-6 * in_total);
}

TEST_CASE("resize round trip preserves totals, values stay non-negative") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const Resolution in{int(rng.uniform_int(1, 40)), int(rng.uniform_int(1, 40))};
    const Resolution mid{int(rng.uniform_int(1, 40)), int(rng.uniform_int(1, 40))};
    const DensityMap d = test::random_density(rng, in);
    const DensityMap back = resize_mass_preserving(resize_mass_preserving(d, mid), in);
    const double t = total_count(d);
    CHECK(std::abs(total_count(back) - t) <= 1e-6 * std::max(1.0, t));
    for (float v : back.values()) {
      CHECK(v >= 0.0f);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("replace_region full replacement and no-op") {
  DensityMap host({4, 4}, 1.0f);

  const DensityMap sub({2, 2}, 5.0f);  // sum 20
  const DensityMap replaced = replace_region(host, {0, 0, 4, 4}, sub);
  CHECK(total_count(replaced) == doctest::Approx(20.0).epsilon(1e-9));
  for (float v : replaced.values()) CHECK(v == doctest::Approx(1.25));

  DensityMap corner_host = host;
  corner_host.at(0, 0) = 0.0f;
  const DensityMap zero_sub({1, 1}, 0.0f);
  const DensityMap same = replace_region(corner_host, {0, 0, 1, 1}, zero_sub);
  CHECK(test::bit_identical(same, corner_host));
}

TEST_CASE("replace_region mass identity on random instances") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Resolution hres{int(rng.uniform_int(2, 32)), int(rng.uniform_int(2, 32))};
    const DensityMap host = test::random_density(rng, hres);
    GridRect rect;
    rect.w = int(rng.uniform_int(1, hres.w));
    rect.h = int(rng.uniform_int(1, hres.h));
    rect.x = int(rng.uniform_int(0, hres.w - rect.w));
    rect.y = int(rng.uniform_int(0, hres.h - rect.h));
    const DensityMap sub = test::random_density(
        rng, {int(rng.uniform_int(1, 16)), int(rng.uniform_int(1, 16))});

    const DensityMap out = replace_region(host, rect, sub);
    const double expected =
        total_count(host) - region_mass(host, rect) + total_count(sub);
    CHECK(std::abs(total_count(out) - expected) <=
          1e-6 * std::max(1.0, std::abs(expected)));

    // Idempotent for identical arguments.
    const DensityMap again = replace_region(out, rect, sub);
    CHECK(test::bit_identical(again, out));
  }
}

TEST_CASE("replace_region rejects out-of-bounds rects") {
  DensityMap host({4, 4}, 1.0f);
  CHECK_THROWS_AS(replace_region(host, {3, 3, 2, 2}, DensityMap({1, 1}, 0.0f)),
                  std::invalid_argument);
}

TEST_CASE("DMAP round trip is bit exact") {
  TempDir tmp("dmap");
  Rng rng(3);
  const DensityMap d = test::random_density(rng, {33, 21});
  const auto path = tmp.path / "x.dmap";
  write_dmap(path, d);
  const DensityMap back = read_dmap(path);
  CHECK(test::bit_identical(back, d));

  // 12-byte header + float payload.
  CHECK(std::filesystem::file_size(path) == 12 + 33 * 21 * 4);
}

TEST_CASE("DMAP reader rejects malformed files") {
  TempDir tmp("dmapbad");

  const auto bad_magic = tmp.path / "bad_magic.dmap";
  {
    std::ofstream f(bad_magic, std::ios::binary);
    f << "DMAQ";
    const std::uint32_t wh[2] = {1, 1};
    f.write(reinterpret_cast<const char*>(wh), 8);
    const float v = 0.0f;
    f.write(reinterpret_cast<const char*>(&v), 4);
  }
  CHECK_THROWS_AS(read_dmap(bad_magic), Error);

  const auto truncated = tmp.path / "short.dmap";
  {
    std::ofstream f(truncated, std::ios::binary);
    f << "DMAP";
    const std::uint32_t wh[2] = {4, 4};
    f.write(reinterpret_cast<const char*>(wh), 8);
    const float v = 1.0f;
    f.write(reinterpret_cast<const char*>(&v), 4);  // 1 of 16 values
  }
  CHECK_THROWS_AS(read_dmap(truncated), Error);

  const auto negative = tmp.path / "neg.dmap";
  {
    std::ofstream f(negative, std::ios::binary);
    f << "DMAP";
    const std::uint32_t wh[2] = {1, 1};
    f.write(reinterpret_cast<const char*>(wh), 8);
    const float v = -1.0f;
    f.write(reinterpret_cast<const char*>(&v), 4);
  }
  CHECK_THROWS_AS(read_dmap(negative), Error);
}

TEST_CASE("heat map render writes a valid PGM") {
  TempDir tmp("heat");
  DensityMap d({8, 4}, 0.0f);
  d.at(3, 2) = 2.5f;
  write_heatmap_pgm(tmp.path / "h.pgm", d);
  const Patch p = read_pgm(tmp.path / "h.pgm");
  CHECK(p.res == Resolution{8, 4});
  CHECK(p.at(3, 2) == 255);
  CHECK(p.at(0, 0) == 0);
}
