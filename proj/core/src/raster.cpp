#include "gigazoom/raster.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "gigazoom/resample.hpp"

namespace gigazoom {

namespace {

struct ImageAxis {
  AxisTaps taps;
  double divisor = 1.0;  // in/out when box-averaging, 1 for bilinear
};

ImageAxis image_axis(int in_n, int out_n) {
  ImageAxis a;
  if (out_n <= in_n) {
    a.taps = mass_taps(in_n, out_n);
    a.divisor = double(in_n) / double(out_n);
  } else {
    a.taps = bilinear_taps(in_n, out_n);
    a.divisor = 1.0;
  }
  return a;
}

}  // namespace

Patch resample_scanlines(
    const PixelRect& rect, Resolution out,
    const std::function<void(int y, std::uint8_t* row)>& row_fill) {
  require(rect.size.valid() && out.valid(), "resample_scanlines: empty rect or output");
  const ImageAxis ax = image_axis(rect.size.w, out.w);
  const ImageAxis ay = image_axis(rect.size.h, out.h);
  const double norm = 1.0 / (ax.divisor * ay.divisor);

  std::vector<double> acc(std::size_t(out.area()), 0.0);
  std::vector<double> row_acc(std::size_t(out.w));
  std::vector<std::uint8_t> row(std::size_t(rect.size.w));

  for (int sy = 0; sy < rect.size.h; ++sy) {
    row_fill(rect.y + sy, row.data());
    std::fill(row_acc.begin(), row_acc.end(), 0.0);
    for (int sx = 0; sx < rect.size.w; ++sx) {
      const double v = row[std::size_t(sx)];
      const auto f = ax.taps.first[std::size_t(sx)];
      const auto n = ax.taps.count[std::size_t(sx)];
      for (int k = 0; k < n; ++k) {
        const auto& tap = ax.taps.taps[std::size_t(f + k)];
        row_acc[std::size_t(tap.out)] += v * tap.weight;
      }
    }
    const auto f = ay.taps.first[std::size_t(sy)];
    const auto n = ay.taps.count[std::size_t(sy)];
    for (int k = 0; k < n; ++k) {
      const auto& tap = ay.taps.taps[std::size_t(f + k)];
      double* dst = acc.data() + std::size_t(tap.out) * out.w;
      for (int ox = 0; ox < out.w; ++ox) dst[ox] += row_acc[std::size_t(ox)] * tap.weight;
    }
  }

  Patch p(out);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    double v = std::round(acc[i] * norm);
    p.px[i] = std::uint8_t(std::clamp(v, 0.0, 255.0));
  }
  return p;
}

void MemoryRaster::fill(const PixelRect& rect, std::uint8_t* out) const {
  require(rect.within(data_.res), "MemoryRaster::fill: rect outside canvas");
  for (int y = 0; y < rect.size.h; ++y) {
    std::memcpy(out + std::size_t(y) * rect.size.w,
                data_.px.data() + std::size_t(rect.y + y) * data_.res.w + rect.x,
                std::size_t(rect.size.w));
  }
}

Patch MemoryRaster::read(const PixelRect& rect, Resolution out) const {
  require(rect.within(data_.res), "MemoryRaster::read: rect outside canvas");
  return resample_scanlines(rect, out, [&](int y, std::uint8_t* row) {
    std::memcpy(row, data_.px.data() + std::size_t(y) * data_.res.w + rect.x,
                std::size_t(rect.size.w));
  });
}

void write_pgm(const std::filesystem::path& path, const Patch& p) {
  require(p.res.valid() && p.px.size() == std::size_t(p.res.area()),
          "write_pgm: malformed patch");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("write_pgm: cannot open " + path.string());
  f << "P5\n" << p.res.w << " " << p.res.h << "\n255\n";
  f.write(reinterpret_cast<const char*>(p.px.data()), std::streamsize(p.px.size()));
  if (!f) throw Error("write_pgm: write failed for " + path.string());
}

namespace {

int pgm_token(std::istream& in, const std::filesystem::path& path) {
  // Skips whitespace and '#' comments, then parses one non-negative integer.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) throw Error("read_pgm: bad header in " + path.string());
  long v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    if (v > 1 << 30) throw Error("read_pgm: header value overflow in " + path.string());
    c = in.get();
  }
  if (c != EOF) in.unget();
  return int(v);
}

}  // namespace

Patch read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("read_pgm: cannot open " + path.string());
  char m0 = 0, m1 = 0;
  f.get(m0);
  f.get(m1);
  if (m0 != 'P' || m1 != '5') throw Error("read_pgm: not a binary PGM: " + path.string());
  int w = pgm_token(f, path);
  int h = pgm_token(f, path);
  int maxval = pgm_token(f, path);
  if (w < 1 || h < 1 || maxval != 255)
    throw Error("read_pgm: unsupported dimensions/maxval in " + path.string());
  f.get();  // single whitespace separating header and raster
  Patch p(Resolution{w, h});
  f.read(reinterpret_cast<char*>(p.px.data()), std::streamsize(p.px.size()));
  if (f.gcount() != std::streamsize(p.px.size()))
    throw Error("read_pgm: truncated raster in " + path.string());
  return p;
}

}  // namespace gigazoom
