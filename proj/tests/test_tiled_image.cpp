#include "doctest.h"

#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "gigazoom/tiled_image.hpp"
#include "helpers.hpp"

using namespace gigazoom;
using test::TempDir;

namespace {

Patch random_patch(Rng& rng, Resolution res) {
  Patch p(res);
  for (auto& v : p.px) v = std::uint8_t(rng.uniform_int(0, 255));
  return p;
}

}  // namespace

TEST_CASE("build_tiled exact tiling round trip") {
  TempDir tmp("tiles_exact");
  Rng rng(1);
  const Patch src = random_patch(rng, {64, 64});
  const GigaImage img = build_tiled(MemoryRaster(src), 32, tmp.path);

  CHECK(img.tile_rows() == 2);
  CHECK(img.tile_cols() == 2);
  CHECK(img.canvas() == Resolution{64, 64});

  const Patch back = img.read_region(full_rect(img.canvas()), img.canvas());
  CHECK(back == src);
}

TEST_CASE("build_tiled remainder tiles keep true size") {
  TempDir tmp("tiles_rem");
  Rng rng(2);
  const Patch src = random_patch(rng, {65, 64});
  const GigaImage img = build_tiled(MemoryRaster(src), 32, tmp.path);

  CHECK(img.tile_rows() == 2);
  CHECK(img.tile_cols() == 3);
  const Patch edge = read_pgm(tmp.path / "tile_0_2.pgm");
  CHECK(edge.res == Resolution{1, 32});

  const Patch back = img.read_region(full_rect(img.canvas()), img.canvas());
  CHECK(back == src);
}

TEST_CASE("tile grid for a PANDA-sized canvas") {
  // Ceil-division oracle.
  const auto ceil_div = [](int a, int b) { return (a + b - 1) / b; };
  CHECK(ceil_div(26908, 1024) == 27);
  CHECK(ceil_div(15024, 1024) == 15);
  const TileGrid g = tile_grid({26908, 15024}, 1024);
  CHECK(g.cols == 27);
  CHECK(g.rows == 15);
}

TEST_CASE("round trip across raster sizes and tile sizes") {
  Rng rng(3);
  for (const int tile : {16, 32, 100}) {
    const Resolution res{int(rng.uniform_int(1, 512)), int(rng.uniform_int(1, 512))};
    TempDir tmp("tiles_rt");
    const Patch src = random_patch(rng, res);
    const GigaImage img = build_tiled(MemoryRaster(src), tile, tmp.path);
    const Patch back = img.read_region(full_rect(res), res);
    CHECK(back == src);
  }
}

TEST_CASE("read_region resampling basics") {
  TempDir tmp("tiles_resample");
  Patch src({2, 2});
  src.px = {10, 30, 50, 70};
  const GigaImage img = build_tiled(MemoryRaster(src), 16, tmp.path);

  // Box average of the whole region.
  const Patch avg = img.read_region({0, 0, {2, 2}}, {1, 1});
  CHECK(avg.px[0] == 40);

  // Bilinear enlargement of a constant is constant.
  TempDir tmp2("tiles_const");
  Patch one({1, 1});
  one.px = {100};
  const GigaImage cimg = build_tiled(MemoryRaster(one), 16, tmp2.path);
  const Patch up = cimg.read_region({0, 0, {1, 1}}, {2, 2});
  for (const auto v : up.px) CHECK(v == 100);
}

TEST_CASE("box filter conserves the mean within one gray level") {
  Rng rng(4);
  TempDir tmp("tiles_mean");
  const Patch src = random_patch(rng, {200, 150});
  const GigaImage img = build_tiled(MemoryRaster(src), 64, tmp.path);

  const PixelRect rect{13, 26, {150, 100}};
  const Resolution out{37, 23};
  const Patch shrunk = img.read_region(rect, out);

  double in_mean = 0.0;
  for (int y = rect.y; y < rect.y2(); ++y)
    for (int x = rect.x; x < rect.x2(); ++x) in_mean += src.at(x, y);
  in_mean /= double(rect.area());
  double out_mean = 0.0;
  for (const auto v : shrunk.px) out_mean += v;
  out_mean /= double(out.area());
  CHECK(std::abs(in_mean - out_mean) <= 1.0);
}

TEST_CASE("reads load only the tiles intersecting the rect") {
  Rng rng(5);
  TempDir tmp("tiles_locality");
  const Patch src = random_patch(rng, {300, 300});
  const GigaImage img = build_tiled(MemoryRaster(src), 50, tmp.path);

  for (int i = 0; i < 20; ++i) {
    PixelRect rect;
    rect.size = {int(rng.uniform_int(1, 300)), int(rng.uniform_int(1, 300))};
    rect.x = int(rng.uniform_int(0, 300 - rect.size.w));
    rect.y = int(rng.uniform_int(0, 300 - rect.size.h));
    const auto before = img.tile_loads();
    img.read_region(rect, {10, 10});
    const auto loaded = img.tile_loads() - before;
    const auto bound = std::uint64_t(std::ceil(rect.size.w / 50.0 + 1)) *
                       std::uint64_t(std::ceil(rect.size.h / 50.0 + 1));
    CHECK(loaded <= bound);
  }
}

TEST_CASE("error paths: bounds, missing tile, dimension mismatch") {
  Rng rng(6);
  TempDir tmp("tiles_err");
  const Patch src = random_patch(rng, {64, 64});
  const GigaImage img = build_tiled(MemoryRaster(src), 32, tmp.path);

  CHECK_THROWS_AS(img.read_region({40, 40, {32, 32}}, {8, 8}), std::invalid_argument);
  CHECK_THROWS_AS(build_tiled(MemoryRaster(src), 8, tmp.path), std::invalid_argument);

  std::filesystem::remove(tmp.path / "tile_1_1.pgm");
  CHECK_THROWS_AS(img.read_region({33, 33, {8, 8}}, {8, 8}), Error);

  // Wrong-sized tile is caught on load.
  write_pgm(tmp.path / "tile_0_0.pgm", Patch({8, 8}, 7));
  CHECK_THROWS_AS(img.read_region({0, 0, {8, 8}}, {8, 8}), Error);

  CHECK_THROWS_AS(GigaImage::open(tmp.path / "nope"), Error);
}

TEST_CASE("concurrent reads return consistent patches") {
  Rng rng(7);
  TempDir tmp("tiles_mt");
  const Patch src = random_patch(rng, {128, 128});
  const GigaImage img = build_tiled(MemoryRaster(src), 32, tmp.path);

  const PixelRect rect{5, 9, {100, 100}};
  const Patch expect = img.read_region(rect, {25, 25});
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int i = 0; i < 4; ++i)
    threads.emplace_back([&] {
      for (int j = 0; j < 5; ++j)
        if (!(img.read_region(rect, {25, 25}) == expect)) mismatches.fetch_add(1);
    });
  for (auto& t : threads) t.join();
  CHECK(mismatches.load() == 0);
}
