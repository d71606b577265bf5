#include "gigazoom/multiregion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gigazoom/rng.hpp"

namespace gigazoom {

namespace {

// Symmetric reflection with edge repeat: ..., v[1], v[0] | v[0], v[1], ...
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

std::vector<double> gaussian_kernel(double sigma, int radius) {
  std::vector<double> k(std::size_t(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i)
    sum += k[std::size_t(i + radius)] = std::exp(-double(i) * i / (2.0 * sigma * sigma));
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

DensityMap gaussian_smooth(const DensityMap& d, double sigma, int radius) {
  require(sigma > 0.0, "gaussian_smooth: sigma must be > 0");
  require(radius >= 1, "gaussian_smooth: radius must be >= 1");
  const std::vector<double> k = gaussian_kernel(sigma, radius);
  const int w = d.w(), h = d.h();

  std::vector<double> tmp(std::size_t(d.cells()));
  for (int y = 0; y < h; ++y) {
    const float* src = d.values().data() + std::size_t(y) * w;
    double* dst = tmp.data() + std::size_t(y) * w;
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i)
        s += k[std::size_t(i + radius)] * src[reflect_index(x + i, w)];
      dst[x] = s;
    }
  }
  std::vector<float> out(std::size_t(d.cells()));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i)
        s += k[std::size_t(i + radius)] * tmp[std::size_t(reflect_index(y + i, h)) * w + x];
      out[std::size_t(y) * w + x] = float(s);
    }
  }
  return DensityMap(d.res(), std::move(out));
}

std::vector<CellPoint> find_peaks(const DensityMap& smoothed, double threshold,
                                  int radius) {
  require(radius >= 1, "find_peaks: radius must be >= 1");
  const int w = smoothed.w(), h = smoothed.h();
  std::vector<CellPoint> peaks;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float v = smoothed.at(x, y);
      if (!(v > threshold)) continue;
      bool is_max = true;
      const int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
      const int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
      for (int ny = y0; ny <= y1 && is_max; ++ny)
        for (int nx = x0; nx <= x1; ++nx)
          if (smoothed.at(nx, ny) > v) {
            is_max = false;
            break;
          }
      if (is_max) peaks.push_back({x, y});
    }
  }
  return peaks;
}

std::vector<PointF> kmeans_cluster(const std::vector<CellPoint>& points, int k,
                                   int iters, std::uint64_t seed) {
  require(k >= 1, "kmeans_cluster: k must be >= 1");
  require(iters >= 1, "kmeans_cluster: iters must be >= 1");
  std::vector<PointF> centers;
  if (points.empty()) return centers;
  const int n = int(points.size());

  const auto sort_centers = [](std::vector<PointF>& cs) {
    std::sort(cs.begin(), cs.end(), [](const PointF& a, const PointF& b) {
      return a.y < b.y || (a.y == b.y && a.x < b.x);
    });
  };

  if (n <= k) {
    for (const auto& pt : points) centers.push_back({double(pt.x), double(pt.y)});
    sort_centers(centers);
    return centers;
  }

  // k-means++ style seeding: squared-distance-weighted picks.
  Rng rng(seed);
  const auto& p0 = points[std::size_t(rng.uniform_int(0, n - 1))];
  centers.push_back({double(p0.x), double(p0.y)});
  std::vector<double> d2(std::size_t(n), 0.0);
  while (int(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centers) {
        const double dx = points[std::size_t(i)].x - c.x;
        const double dy = points[std::size_t(i)].y - c.y;
        best = std::min(best, dx * dx + dy * dy);
      }
      d2[std::size_t(i)] = best;
      total += best;
    }
    int pick = 0;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      for (int i = 0; i < n; ++i) {
        r -= d2[std::size_t(i)];
        if (r <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = int(rng.uniform_int(0, n - 1));
    }
    centers.push_back({double(points[std::size_t(pick)].x),
                       double(points[std::size_t(pick)].y)});
  }

  std::vector<int> assign(std::size_t(n), 0);
  for (int it = 0; it < iters; ++it) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double dx = points[std::size_t(i)].x - centers[std::size_t(c)].x;
        const double dy = points[std::size_t(i)].y - centers[std::size_t(c)].y;
        const double dd = dx * dx + dy * dy;
        if (dd < best) {
          best = dd;
          arg = c;
        }
      }
      if (assign[std::size_t(i)] != arg) {
        assign[std::size_t(i)] = arg;
        changed = true;
      }
    }
    std::vector<double> sx(std::size_t(k), 0.0), sy(std::size_t(k), 0.0);
    std::vector<int> cnt(std::size_t(k), 0);
    for (int i = 0; i < n; ++i) {
      const int c = assign[std::size_t(i)];
      sx[std::size_t(c)] += points[std::size_t(i)].x;
      sy[std::size_t(c)] += points[std::size_t(i)].y;
      cnt[std::size_t(c)]++;
    }
    for (int c = 0; c < k; ++c) {
      if (cnt[std::size_t(c)] > 0) {
        centers[std::size_t(c)] = {sx[std::size_t(c)] / cnt[std::size_t(c)],
                                   sy[std::size_t(c)] / cnt[std::size_t(c)]};
      } else {
        // Re-seed an empty cluster at the point farthest from its center.
        double far_d = -1.0;
        int far_i = 0;
        for (int i = 0; i < n; ++i) {
          const auto& cc = centers[std::size_t(assign[std::size_t(i)])];
          const double dx = points[std::size_t(i)].x - cc.x;
          const double dy = points[std::size_t(i)].y - cc.y;
          if (dx * dx + dy * dy > far_d) {
            far_d = dx * dx + dy * dy;
            far_i = i;
          }
        }
        centers[std::size_t(c)] = {double(points[std::size_t(far_i)].x),
                                   double(points[std::size_t(far_i)].y)};
        changed = true;
      }
    }
    if (!changed && it > 0) break;
  }
  sort_centers(centers);
  return centers;
}

namespace {

// Footprint of a level-0 pixel rect in coarse-map cells, clamped so the
// kernel-sized window fits.
GridRect cells_for_rect(const PixelRect& rect, Resolution canvas, Resolution dres,
                        KernelSize k) {
  int cx = int(std::lround(double(rect.x) * dres.w / canvas.w));
  int cy = int(std::lround(double(rect.y) * dres.h / canvas.h));
  cx = std::clamp(cx, 0, dres.w - k.w);
  cy = std::clamp(cy, 0, dres.h - k.h);
  return {cx, cy, k.w, k.h};
}

}  // namespace

std::vector<RegionPlan> plan_regions(const DensityMap& coarse, Resolution canvas,
                                     const ZoomSchedule& schedule,
                                     const MultiRegionConfig& mrc) {
  require(schedule.dims.size() >= 2, "plan_regions: schedule needs at least 2 levels");
  const Resolution dres = coarse.res();
  const Resolution child = schedule.dims[1];
  const KernelSize k = kernel_size(schedule.dims[0], child, dres);

  const auto argmax_plan = [&]() -> RegionPlan {
    const WindowSumGrid sums = window_sums(coarse, k);
    const CellPoint peak = argmax_window(sums);
    const PixelRect rect =
        map_to_global(full_rect(canvas), peak, dres, child);
    return {rect, GridRect{peak.x, peak.y, k.w, k.h}};
  };

  if (!mrc.enabled) return {argmax_plan()};

  const DensityMap smoothed = gaussian_smooth(coarse, mrc.smooth_sigma, mrc.smooth_radius);
  const std::vector<CellPoint> peaks =
      find_peaks(smoothed, mrc.peak_threshold, mrc.smooth_radius);
  if (peaks.empty()) return {argmax_plan()};

  const std::vector<PointF> centers =
      kmeans_cluster(peaks, mrc.clusters, mrc.kmeans_iters, mrc.kmeans_seed);

  std::vector<RegionPlan> plans;
  plans.reserve(centers.size());
  for (const PointF& c : centers) {
    // Cell center -> level-0 pixels, then center the child rect there and
    // shift it inside the canvas.
    const double px = (c.x + 0.5) * double(canvas.w) / dres.w;
    const double py = (c.y + 0.5) * double(canvas.h) / dres.h;
    int x = int(std::lround(px - child.w / 2.0));
    int y = int(std::lround(py - child.h / 2.0));
    x = std::clamp(x, 0, canvas.w - child.w);
    y = std::clamp(y, 0, canvas.h - child.h);
    const PixelRect rect{x, y, child};
    plans.push_back({rect, cells_for_rect(rect, canvas, dres, k)});
  }
  return plans;
}

}  // namespace gigazoom
