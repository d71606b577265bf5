#pragma once

#include <cstdint>
#include <vector>

#include "gigazoom/density_map.hpp"
#include "gigazoom/region_finder.hpp"
#include "gigazoom/zoom_schedule.hpp"

namespace gigazoom {

struct MultiRegionConfig {
  bool enabled = true;
  double smooth_sigma = 4.0;
  int smooth_radius = 7;
  double peak_threshold = 0.1;  // lambda, persons per cell on the smoothed map
  int clusters = 2;             // k
  int kmeans_iters = 50;
  std::uint64_t kmeans_seed = 1;
};

// Separable truncated-Gaussian convolution, kernel normalized to sum 1,
// symmetric reflection at borders (edge repeated), so total mass is
// preserved.
DensityMap gaussian_smooth(const DensityMap& d, double sigma, int radius);

// Cells that equal the maximum of their (2r+1)x(2r+1) neighborhood
// (border-clipped) and exceed the threshold, in row-major order.
std::vector<CellPoint> find_peaks(const DensityMap& smoothed, double threshold,
                                  int radius);

// Lloyd's iterations from a k-means++-style seeded start; fewer points than
// k degenerates to one center per point. Centers come back sorted row-major.
std::vector<PointF> kmeans_cluster(const std::vector<CellPoint>& points, int k,
                                   int iters, std::uint64_t seed);

// Where a zoom chain starts: a level-1 rect plus its cell footprint in the
// coarse map (the region the chain's output replaces).
struct RegionPlan {
  PixelRect rect;
  GridRect coarse_cells;
};

// Smooth -> peaks -> threshold -> k-means -> rects of schedule dims[1]
// centered on the cluster centers, shifted (not shrunk) into the canvas.
// Disabled multi-region, or no surviving peaks, falls back to the plain
// argmax window.
std::vector<RegionPlan> plan_regions(const DensityMap& coarse, Resolution canvas,
                                     const ZoomSchedule& schedule,
                                     const MultiRegionConfig& mrc);

}  // namespace gigazoom
