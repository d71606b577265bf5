#include "gigazoom/tiled_image.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gigazoom/resample.hpp"

namespace gigazoom {

using nlohmann::json;

TileGrid tile_grid(Resolution canvas, int tile_size) {
  require(canvas.valid() && tile_size >= 1, "tile_grid: bad arguments");
  return {int((canvas.h + tile_size - 1) / tile_size),
          int((canvas.w + tile_size - 1) / tile_size)};
}

GigaImage::GigaImage(std::filesystem::path dir, Resolution canvas, int tile_size)
    : dir_(std::move(dir)), canvas_(canvas), tile_size_(tile_size) {
  const TileGrid g = tile_grid(canvas, tile_size);
  rows_ = g.rows;
  cols_ = g.cols;
}

GigaImage GigaImage::open(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream f(manifest_path);
  if (!f) throw Error("GigaImage: cannot open " + manifest_path.string());
  json m = json::parse(f, nullptr, false);
  if (m.is_discarded()) throw Error("GigaImage: invalid JSON in " + manifest_path.string());
  if (!m.contains("width") || !m.contains("height") || !m.contains("tile_size"))
    throw Error("GigaImage: manifest missing fields in " + manifest_path.string());
  if (m.value("format", "pgm") != "pgm")
    throw Error("GigaImage: unsupported tile format in " + manifest_path.string());
  Resolution canvas{m["width"].get<int>(), m["height"].get<int>()};
  int tile_size = m["tile_size"].get<int>();
  if (!canvas.valid() || tile_size < 1)
    throw Error("GigaImage: bad manifest values in " + manifest_path.string());
  return GigaImage(dir, canvas, tile_size);
}

PixelRect GigaImage::tile_rect(int row, int col) const {
  const int x = col * tile_size_;
  const int y = row * tile_size_;
  return {x, y,
          {std::min(tile_size_, canvas_.w - x), std::min(tile_size_, canvas_.h - y)}};
}

Patch GigaImage::load_tile(int row, int col) const {
  const auto path =
      dir_ / ("tile_" + std::to_string(row) + "_" + std::to_string(col) + ".pgm");
  Patch t = read_pgm(path);
  const PixelRect expect = tile_rect(row, col);
  if (t.res != expect.size)
    throw Error("GigaImage: tile dimension mismatch at " + path.string() + ": got " +
                to_string(t.res) + ", expected " + to_string(expect.size));
  tile_loads_.fetch_add(1, std::memory_order_relaxed);
  return t;
}

Patch GigaImage::read(const PixelRect& rect, Resolution out) const {
  require(rect.within(canvas_), "read_region: rect outside canvas");
  require(out.valid(), "read_region: output must be >= 1x1");

  struct Axis {
    AxisTaps taps;
    double divisor;
  };
  const auto make_axis = [](int in_n, int out_n) -> Axis {
    if (out_n <= in_n) return {mass_taps(in_n, out_n), double(in_n) / out_n};
    return {bilinear_taps(in_n, out_n), 1.0};
  };
  const Axis ax = make_axis(rect.size.w, out.w);
  const Axis ay = make_axis(rect.size.h, out.h);
  const double norm = 1.0 / (ax.divisor * ay.divisor);

  std::vector<double> acc(std::size_t(out.area()), 0.0);

  const int r0 = rect.y / tile_size_, r1 = (rect.y2() - 1) / tile_size_;
  const int c0 = rect.x / tile_size_, c1 = (rect.x2() - 1) / tile_size_;
  for (int tr = r0; tr <= r1; ++tr) {
    for (int tc = c0; tc <= c1; ++tc) {
      const Patch tile = load_tile(tr, tc);
      const PixelRect trect = tile_rect(tr, tc);
      const int gx0 = std::max(rect.x, trect.x), gx1 = std::min(rect.x2(), trect.x2());
      const int gy0 = std::max(rect.y, trect.y), gy1 = std::min(rect.y2(), trect.y2());
      for (int gy = gy0; gy < gy1; ++gy) {
        const int sy = gy - rect.y;
        const auto fy = ay.taps.first[std::size_t(sy)];
        const auto ny = ay.taps.count[std::size_t(sy)];
        const std::uint8_t* trow =
            tile.px.data() + std::size_t(gy - trect.y) * trect.size.w;
        for (int gx = gx0; gx < gx1; ++gx) {
          const double v = trow[gx - trect.x];
          const int sx = gx - rect.x;
          const auto fx = ax.taps.first[std::size_t(sx)];
          const auto nx = ax.taps.count[std::size_t(sx)];
          for (int ky = 0; ky < ny; ++ky) {
            const auto& ty = ay.taps.taps[std::size_t(fy + ky)];
            double* dst = acc.data() + std::size_t(ty.out) * out.w;
            const double vy = v * ty.weight;
            for (int kx = 0; kx < nx; ++kx) {
              const auto& tx = ax.taps.taps[std::size_t(fx + kx)];
              dst[tx.out] += vy * tx.weight;
            }
          }
        }
      }
    }
  }

  Patch p(out);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    double v = std::round(acc[i] * norm);
    p.px[i] = std::uint8_t(std::clamp(v, 0.0, 255.0));
  }
  return p;
}

GigaImage build_tiled(const RasterSource& src, int tile_size,
                      const std::filesystem::path& out_dir) {
  require(tile_size >= 16, "build_tiled: tile_size must be >= 16");
  const Resolution canvas = src.canvas();
  require(canvas.valid(), "build_tiled: source must be >= 1x1");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("build_tiled: cannot create " + out_dir.string());

  const TileGrid g = tile_grid(canvas, tile_size);
  for (int row = 0; row < g.rows; ++row) {
    for (int col = 0; col < g.cols; ++col) {
      const int x = col * tile_size, y = row * tile_size;
      const PixelRect r{x, y,
                        {std::min(tile_size, canvas.w - x), std::min(tile_size, canvas.h - y)}};
      Patch t(r.size);
      src.fill(r, t.px.data());
      write_pgm(out_dir / ("tile_" + std::to_string(row) + "_" +
                           std::to_string(col) + ".pgm"),
                t);
    }
  }

  nlohmann::ordered_json m;
  m["width"] = canvas.w;
  m["height"] = canvas.h;
  m["tile_size"] = tile_size;
  m["format"] = "pgm";
  std::ofstream f(out_dir / "manifest.json", std::ios::trunc);
  if (!f) throw Error("build_tiled: cannot write manifest in " + out_dir.string());
  f << m.dump(2) << "\n";
  if (!f) throw Error("build_tiled: manifest write failed in " + out_dir.string());

  return GigaImage::open(out_dir);
}

}  // namespace gigazoom
