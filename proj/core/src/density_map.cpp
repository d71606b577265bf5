#include "gigazoom/density_map.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "gigazoom/raster.hpp"
#include "gigazoom/resample.hpp"

namespace gigazoom {

static_assert(std::endian::native == std::endian::little,
              "DMAP I/O assumes a little-endian host");

DensityMap::DensityMap(Resolution res, float value)
    : res_(res), v_(std::size_t(res.area()), value) {
  require(res.valid(), "DensityMap: resolution must be >= 1x1");
  require(value >= 0.0f && std::isfinite(value), "DensityMap: negative fill");
}

DensityMap::DensityMap(Resolution res, std::vector<float> values)
    : res_(res), v_(std::move(values)) {
  require(res.valid(), "DensityMap: resolution must be >= 1x1");
  require(v_.size() == std::size_t(res.area()),
          "DensityMap: value count does not match resolution");
}

void DensityMap::check_valid() const {
  for (float x : v_)
    if (!(x >= 0.0f) || !std::isfinite(x))
      throw Error("DensityMap: negative or non-finite cell");
}

double total_count(const DensityMap& d) {
  double s = 0.0;
  for (float x : d.values()) s += x;
  return s;
}

DensityMap resize_mass_preserving(const DensityMap& d, Resolution out) {
  require(out.valid(), "resize_mass_preserving: output must be >= 1x1");
  if (out == d.res()) return d;
  const AxisTaps tx = mass_taps(d.w(), out.w);
  const AxisTaps ty = mass_taps(d.h(), out.h);
  std::vector<double> acc(std::size_t(out.area()), 0.0);
  for (int sy = 0; sy < d.h(); ++sy) {
    const auto fy = ty.first[std::size_t(sy)];
    const auto ny = ty.count[std::size_t(sy)];
    for (int sx = 0; sx < d.w(); ++sx) {
      const double v = d.at(sx, sy);
      if (v == 0.0) continue;
      const auto fx = tx.first[std::size_t(sx)];
      const auto nx = tx.count[std::size_t(sx)];
      for (int ky = 0; ky < ny; ++ky) {
        const auto& tapy = ty.taps[std::size_t(fy + ky)];
        double* dst = acc.data() + std::size_t(tapy.out) * out.w;
        const double vy = v * tapy.weight;
        for (int kx = 0; kx < nx; ++kx) {
          const auto& tapx = tx.taps[std::size_t(fx + kx)];
          dst[tapx.out] += vy * tapx.weight;
        }
      }
    }
  }
  std::vector<float> vals(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) vals[i] = float(acc[i]);
  return DensityMap(out, std::move(vals));
}

DensityMap replace_region(const DensityMap& host, const GridRect& rect,
                          const DensityMap& sub) {
  require(rect.within(host.res()), "replace_region: rect outside host");
  const DensityMap resized =
      (sub.res() == Resolution{rect.w, rect.h})
          ? sub
          : resize_mass_preserving(sub, Resolution{rect.w, rect.h});
  DensityMap out = host;
  for (int y = 0; y < rect.h; ++y)
    for (int x = 0; x < rect.w; ++x)
      out.at(rect.x + x, rect.y + y) = resized.at(x, y);
  return out;
}

double region_mass(const DensityMap& d, const GridRect& rect) {
  require(rect.within(d.res()), "region_mass: rect outside map");
  double s = 0.0;
  for (int y = rect.y; y < rect.y2(); ++y)
    for (int x = rect.x; x < rect.x2(); ++x) s += d.at(x, y);
  return s;
}

void write_dmap(const std::filesystem::path& path, const DensityMap& d) {
  require(d.res().valid(), "write_dmap: empty map");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("write_dmap: cannot open " + path.string());
  const char magic[4] = {'D', 'M', 'A', 'P'};
  const std::uint32_t w = std::uint32_t(d.w()), h = std::uint32_t(d.h());
  f.write(magic, 4);
  f.write(reinterpret_cast<const char*>(&w), 4);
  f.write(reinterpret_cast<const char*>(&h), 4);
  f.write(reinterpret_cast<const char*>(d.values().data()),
          std::streamsize(d.values().size() * sizeof(float)));
  if (!f) throw Error("write_dmap: write failed for " + path.string());
}

DensityMap read_dmap(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("read_dmap: cannot open " + path.string());
  char magic[4] = {};
  f.read(magic, 4);
  if (f.gcount() != 4 || std::memcmp(magic, "DMAP", 4) != 0)
    throw Error("read_dmap: bad magic in " + path.string());
  std::uint32_t w = 0, h = 0;
  f.read(reinterpret_cast<char*>(&w), 4);
  f.read(reinterpret_cast<char*>(&h), 4);
  if (!f || w < 1 || h < 1 || std::uint64_t(w) * h > (std::uint64_t(1) << 31))
    throw Error("read_dmap: bad dimensions in " + path.string());
  std::vector<float> vals(std::size_t(w) * h);
  f.read(reinterpret_cast<char*>(vals.data()),
         std::streamsize(vals.size() * sizeof(float)));
  if (f.gcount() != std::streamsize(vals.size() * sizeof(float)))
    throw Error("read_dmap: truncated values in " + path.string());
  DensityMap d(Resolution{int(w), int(h)}, std::move(vals));
  d.check_valid();
  return d;
}

void write_heatmap_pgm(const std::filesystem::path& path, const DensityMap& d) {
  float peak = 0.0f;
  for (float v : d.values()) peak = std::max(peak, v);
  Patch p(d.res());
  if (peak > 0.0f)
    for (std::size_t i = 0; i < p.px.size(); ++i)
      p.px[i] = std::uint8_t(std::lround(255.0 * d.values()[i] / peak));
  write_pgm(path, p);
}

}  // namespace gigazoom
