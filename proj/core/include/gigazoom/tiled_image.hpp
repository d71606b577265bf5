#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>

#include "gigazoom/raster.hpp"

namespace gigazoom {

// Virtual gigapixel image backed by a manifest + PGM tile directory. Region
// reads touch only the tiles intersecting the request and hold one tile at a
// time, so memory is bounded by the requested output, never the canvas.
// Immutable after open; concurrent reads are safe.
class GigaImage : public PatchSource {
 public:
  // Opens an existing tile directory (manifest.json + tile_{row}_{col}.pgm).
  static GigaImage open(const std::filesystem::path& dir);

  Resolution canvas() const override { return canvas_; }
  int tile_size() const { return tile_size_; }
  int tile_rows() const { return rows_; }
  int tile_cols() const { return cols_; }

  // Box average when shrinking, bilinear when enlarging (overzoom).
  Patch read(const PixelRect& rect, Resolution out) const override;
  Patch read_region(const PixelRect& rect, Resolution out) const { return read(rect, out); }

  // Cumulative tile-file loads, for locality assertions.
  std::uint64_t tile_loads() const { return tile_loads_.load(); }

 private:
  GigaImage(std::filesystem::path dir, Resolution canvas, int tile_size);

  PixelRect tile_rect(int row, int col) const;
  Patch load_tile(int row, int col) const;

  std::filesystem::path dir_;
  Resolution canvas_;
  int tile_size_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  mutable std::atomic<std::uint64_t> tile_loads_{0};
};

struct TileGrid {
  int rows = 0;
  int cols = 0;
};

TileGrid tile_grid(Resolution canvas, int tile_size);

// Writes manifest.json plus one PGM per tile (edge tiles keep their true
// size) and verifies the written grid by reopening it.
GigaImage build_tiled(const RasterSource& src, int tile_size,
                      const std::filesystem::path& out_dir);

}  // namespace gigazoom
