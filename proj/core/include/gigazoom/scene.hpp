#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gigazoom/density_map.hpp"
#include "gigazoom/raster.hpp"

namespace gigazoom {

struct Head {
  int cx = 0;  // center, level-0 pixels
  int cy = 0;
  int bw = 1;  // bounding box
  int bh = 1;
  bool operator==(const Head&) const = default;
};

struct Scene {
  Resolution canvas;
  std::uint64_t seed = 0;
  std::vector<Head> heads;
  // Planted hot-spot centers; kept in memory for recovery checks, not part
  // of the scene.json schema.
  std::vector<PointF> hotspots;
};

struct SceneParams {
  Resolution canvas;
  int count_min = 0;
  int count_max = 0;
  int hotspot_count = 3;
  double hotspot_spread = 0.0;  // Gaussian sigma in px; <= 0 picks 4% of min dim
  double hotspot_weight = 0.8;  // fraction of heads drawn from hot-spots
  double box_min = 12.0;        // box height at y = 0
  double box_max = 80.0;        // box height at y = canvas.h (perspective)
  std::uint64_t seed = 1;
};

// Uniform background + Gaussian hot-spot mixture; box size grows linearly
// with cy. Deterministic given the seed.
Scene generate_scene(const SceneParams& params);

// Ground-truth density of rect resampled to `out`. Each head contributes a
// 2D Gaussian (sigma = 4 px) truncated to its box and normalized to unit
// mass; a head straddling the rect boundary splits its mass.
DensityMap ground_truth_density(const Scene& scene, const PixelRect& rect,
                                Resolution out);

// Heads whose center lies inside rect (whole persons).
double region_head_count(const Scene& scene, const PixelRect& rect);

// Filled ellipse per head box over a textured background.
Patch render_region(const Scene& scene, const PixelRect& rect, Resolution out);

// scene.json, canonical field order, integer values.
void write_scene(const std::filesystem::path& path, const Scene& scene);
Scene read_scene(const std::filesystem::path& path);

// Pixel access to a scene for the tiler and the pipeline.
class SceneView : public RasterSource, public PatchSource {
 public:
  explicit SceneView(const Scene& scene);

  Resolution canvas() const override { return scene_->canvas; }
  void fill(const PixelRect& rect, std::uint8_t* out) const override;
  Patch read(const PixelRect& rect, Resolution out) const override;

 private:
  void fill_row(int y, int x0, int x1, std::uint8_t* row) const;

  const Scene* scene_;
  std::vector<std::uint32_t> by_top_;  // head indices sorted by box top edge
  int max_bh_ = 0;
};

}  // namespace gigazoom
