#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "gigazoom/geometry.hpp"

namespace gigazoom {

// 8-bit grayscale raster, row-major.
struct Patch {
  Resolution res;
  std::vector<std::uint8_t> px;

  Patch() = default;
  Patch(Resolution r, std::uint8_t value = 0)
      : res(r), px(std::size_t(r.area()), value) {}

  std::uint8_t at(int x, int y) const { return px[std::size_t(y) * res.w + x]; }
  std::uint8_t& at(int x, int y) { return px[std::size_t(y) * res.w + x]; }
  bool operator==(const Patch&) const = default;
};

// Native-resolution pixel provider; build_tiled pulls tiles through this.
class RasterSource {
 public:
  virtual ~RasterSource() = default;
  virtual Resolution canvas() const = 0;
  // Fills rect (must lie within the canvas) at native resolution, row-major.
  virtual void fill(const PixelRect& rect, std::uint8_t* out) const = 0;
};

// Region reader with resampling: box average when shrinking, bilinear when
// enlarging. GigaImage and SceneView both implement this.
class PatchSource {
 public:
  virtual ~PatchSource() = default;
  virtual Resolution canvas() const = 0;
  virtual Patch read(const PixelRect& rect, Resolution out) const = 0;
};

class MemoryRaster : public RasterSource, public PatchSource {
 public:
  explicit MemoryRaster(Patch data) : data_(std::move(data)) {}

  Resolution canvas() const override { return data_.res; }
  void fill(const PixelRect& rect, std::uint8_t* out) const override;
  Patch read(const PixelRect& rect, Resolution out) const override;

  const Patch& patch() const { return data_; }

 private:
  Patch data_;
};

// Resamples a rect streamed one native scanline at a time. row_fill must
// write rect.size.w pixels for the requested global row y. Memory use is one
// scanline plus the output accumulator.
Patch resample_scanlines(
    const PixelRect& rect, Resolution out,
    const std::function<void(int y, std::uint8_t* row)>& row_fill);

// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const Patch& p);
Patch read_pgm(const std::filesystem::path& path);

}  // namespace gigazoom
