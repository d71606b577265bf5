#include "gigazoom/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gigazoom/resample.hpp"
#include "gigazoom/rng.hpp"

namespace gigazoom {

namespace {

constexpr double kHeadSigma = 4.0;  // ground-truth Gaussian, level-0 pixels

struct BoxRange {
  int x0, x1, y0, y1;  // head box clipped to the canvas
};

BoxRange box_range(const Head& hd, Resolution canvas) {
  const int bx0 = hd.cx - hd.bw / 2;
  const int by0 = hd.cy - hd.bh / 2;
  return {std::max(0, bx0), std::min(canvas.w, bx0 + hd.bw),
          std::max(0, by0), std::min(canvas.h, by0 + hd.bh)};
}

double hotspot_spread_or_default(const SceneParams& p) {
  if (p.hotspot_spread > 0.0) return p.hotspot_spread;
  return 0.04 * std::min(p.canvas.w, p.canvas.h);
}

}  // namespace

Scene generate_scene(const SceneParams& p) {
  require(p.canvas.valid() || p.count_max == 0, "generate_scene: zero-area canvas");
  require(p.count_min >= 0 && p.count_min <= p.count_max, "generate_scene: bad count range");
  require(p.hotspot_count >= 0, "generate_scene: bad hot-spot count");
  require(p.hotspot_weight >= 0.0 && p.hotspot_weight <= 1.0,
          "generate_scene: hotspot_weight outside [0,1]");
  require(p.box_min >= 1.0 && p.box_max >= p.box_min, "generate_scene: bad box range");

  Scene s;
  s.canvas = p.canvas;
  s.seed = p.seed;
  Rng rng(p.seed);

  const double spread = hotspot_spread_or_default(p);
  const double w = p.canvas.w, h = p.canvas.h;

  // Hot-spot centers: kept away from borders and from each other so peak
  // recovery is well defined.
  double margin = 2.0 * spread + 0.05 * std::min(w, h);
  margin = std::min(margin, 0.4 * std::min(w, h));
  const double min_sep = std::max(4.0 * spread, 0.1 * std::min(w, h));
  for (int i = 0; i < p.hotspot_count; ++i) {
    PointF c;
    for (int attempt = 0; attempt < 200; ++attempt) {
      c = {rng.uniform(margin, w - margin), rng.uniform(margin, h - margin)};
      bool ok = true;
      for (const auto& other : s.hotspots)
        ok = ok && std::hypot(c.x - other.x, c.y - other.y) >= min_sep;
      if (ok) break;
    }
    s.hotspots.push_back(c);
  }

  const int count = int(rng.uniform_int(p.count_min, p.count_max));
  s.heads.reserve(std::size_t(count));
  for (int i = 0; i < count; ++i) {
    double x = 0.0, y = 0.0;
    if (!s.hotspots.empty() && rng.uniform() < p.hotspot_weight) {
      const auto& c = s.hotspots[std::size_t(rng.uniform_int(0, int(s.hotspots.size()) - 1))];
      x = c.x + rng.normal() * spread;
      y = c.y + rng.normal() * spread;
      for (int attempt = 0; attempt < 100 && !(x >= 0 && x < w && y >= 0 && y < h);
           ++attempt) {
        x = c.x + rng.normal() * spread;
        y = c.y + rng.normal() * spread;
      }
      x = std::clamp(x, 0.0, w - 1.0);
      y = std::clamp(y, 0.0, h - 1.0);
    } else {
      x = rng.uniform(0.0, w);
      y = rng.uniform(0.0, h);
    }
    Head hd;
    hd.cx = std::clamp(int(x), 0, p.canvas.w - 1);
    hd.cy = std::clamp(int(y), 0, p.canvas.h - 1);
    const double frac = p.canvas.h > 1 ? double(hd.cy) / (p.canvas.h - 1) : 0.0;
    const double bh = (p.box_min + (p.box_max - p.box_min) * frac) * rng.uniform(0.85, 1.15);
    const double bw = bh * rng.uniform(0.9, 1.25);
    hd.bh = std::max(1, int(std::lround(bh)));
    hd.bw = std::max(1, int(std::lround(bw)));
    s.heads.push_back(hd);
  }
  return s;
}

DensityMap ground_truth_density(const Scene& scene, const PixelRect& rect,
                                Resolution out) {
  require(rect.within(scene.canvas), "ground_truth_density: rect outside canvas");
  require(out.valid(), "ground_truth_density: output must be >= 1x1");

  const AxisTaps tx = mass_taps(rect.size.w, out.w);
  const AxisTaps ty = mass_taps(rect.size.h, out.h);
  std::vector<double> acc(std::size_t(out.area()), 0.0);
  std::vector<double> ux(std::size_t(out.w)), uy(std::size_t(out.h));
  std::vector<double> gx, gy;

  const double inv2s2 = 1.0 / (2.0 * kHeadSigma * kHeadSigma);
  for (const Head& hd : scene.heads) {
    const BoxRange b = box_range(hd, scene.canvas);
    if (b.x0 >= b.x1 || b.y0 >= b.y1) continue;

    // Separable kernel over the canvas-clipped box; normalization uses the
    // whole clipped box so a fully-contained head sums to exactly 1.
    gx.resize(std::size_t(b.x1 - b.x0));
    gy.resize(std::size_t(b.y1 - b.y0));
    double sx = 0.0, sy = 0.0;
    for (int i = b.x0; i < b.x1; ++i) {
      const double d = double(i - hd.cx);
      sx += gx[std::size_t(i - b.x0)] = std::exp(-d * d * inv2s2);
    }
    for (int j = b.y0; j < b.y1; ++j) {
      const double d = double(j - hd.cy);
      sy += gy[std::size_t(j - b.y0)] = std::exp(-d * d * inv2s2);
    }
    const double norm = sx * sy;
    if (norm <= 0.0) continue;

    // Clip the contribution to the requested rect; the mass outside stays
    // outside (straddling heads split).
    const int cx0 = std::max(b.x0, rect.x), cx1 = std::min(b.x1, rect.x2());
    const int cy0 = std::max(b.y0, rect.y), cy1 = std::min(b.y1, rect.y2());
    if (cx0 >= cx1 || cy0 >= cy1) continue;

    int ox0 = out.w, ox1 = 0, oy0 = out.h, oy1 = 0;
    for (int i = cx0; i < cx1; ++i) {
      const double v = gx[std::size_t(i - b.x0)];
      const int src = i - rect.x;
      const auto f = tx.first[std::size_t(src)];
      const auto n = tx.count[std::size_t(src)];
      for (int k = 0; k < n; ++k) {
        const auto& tap = tx.taps[std::size_t(f + k)];
        ox0 = std::min(ox0, int(tap.out));
        ox1 = std::max(ox1, int(tap.out) + 1);
        ux[std::size_t(tap.out)] += v * tap.weight;
      }
    }
    for (int j = cy0; j < cy1; ++j) {
      const double v = gy[std::size_t(j - b.y0)];
      const int src = j - rect.y;
      const auto f = ty.first[std::size_t(src)];
      const auto n = ty.count[std::size_t(src)];
      for (int k = 0; k < n; ++k) {
        const auto& tap = ty.taps[std::size_t(f + k)];
        oy0 = std::min(oy0, int(tap.out));
        oy1 = std::max(oy1, int(tap.out) + 1);
        uy[std::size_t(tap.out)] += v * tap.weight;
      }
    }
    const double inv_norm = 1.0 / norm;
    for (int oy = oy0; oy < oy1; ++oy) {
      double* dst = acc.data() + std::size_t(oy) * out.w;
      const double vy = uy[std::size_t(oy)] * inv_norm;
      for (int ox = ox0; ox < ox1; ++ox) dst[ox] += ux[std::size_t(ox)] * vy;
    }
    for (int ox = ox0; ox < ox1; ++ox) ux[std::size_t(ox)] = 0.0;
    for (int oy = oy0; oy < oy1; ++oy) uy[std::size_t(oy)] = 0.0;
  }

  std::vector<float> vals(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) vals[i] = float(acc[i]);
  return DensityMap(out, std::move(vals));
}

double region_head_count(const Scene& scene, const PixelRect& rect) {
  require(rect.within(scene.canvas), "region_head_count: rect outside canvas");
  std::int64_t n = 0;
  for (const Head& hd : scene.heads)
    if (rect.contains(hd.cx, hd.cy)) ++n;
  return double(n);
}

SceneView::SceneView(const Scene& scene) : scene_(&scene) {
  by_top_.resize(scene.heads.size());
  for (std::uint32_t i = 0; i < by_top_.size(); ++i) by_top_[i] = i;
  std::sort(by_top_.begin(), by_top_.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto ta = scene.heads[a].cy - scene.heads[a].bh / 2;
    const auto tb = scene.heads[b].cy - scene.heads[b].bh / 2;
    return ta < tb || (ta == tb && a < b);
  });
  for (const Head& hd : scene.heads) max_bh_ = std::max(max_bh_, hd.bh);
}

void SceneView::fill_row(int y, int x0, int x1, std::uint8_t* row) const {
  // Hashed background texture in [40, 103], stable in global coordinates.
  for (int x = x0; x < x1; ++x) {
    const std::uint64_t hsh =
        hash_u64((std::uint64_t(std::uint32_t(x)) << 32) ^ std::uint32_t(y) ^
                 (scene_->seed * 0x9e3779b97f4a7c15ULL));
    row[x - x0] = std::uint8_t(40 + (hsh & 63));
  }

  // Heads whose box can intersect this row: box top in (y - max_bh, y].
  const auto& heads = scene_->heads;
  auto it = std::upper_bound(by_top_.begin(), by_top_.end(), y,
                             [&](int yy, std::uint32_t i) {
                               return yy < heads[i].cy - heads[i].bh / 2;
                             });
  for (auto rit = it; rit != by_top_.begin();) {
    --rit;
    const Head& hd = heads[*rit];
    const int top = hd.cy - hd.bh / 2;
    if (top <= y - max_bh_) break;
    if (y < top || y >= top + hd.bh) continue;
    const double ry = hd.bh / 2.0;
    const double rx = hd.bw / 2.0;
    const double ecy = top + ry;
    const double ecx = (hd.cx - hd.bw / 2) + rx;
    const double dy = (y + 0.5 - ecy) / ry;
    const double t = 1.0 - dy * dy;
    if (t <= 0.0) continue;
    const double half = rx * std::sqrt(t);
    int fx0 = std::max(x0, int(std::ceil(ecx - half - 0.5)));
    int fx1 = std::min(x1 - 1, int(std::floor(ecx + half - 0.5)));
    for (int x = fx0; x <= fx1; ++x) row[x - x0] = 220;
  }
}

void SceneView::fill(const PixelRect& rect, std::uint8_t* out) const {
  require(rect.within(scene_->canvas), "SceneView::fill: rect outside canvas");
  for (int y = 0; y < rect.size.h; ++y)
    fill_row(rect.y + y, rect.x, rect.x2(), out + std::size_t(y) * rect.size.w);
}

Patch SceneView::read(const PixelRect& rect, Resolution out) const {
  require(rect.within(scene_->canvas), "SceneView::read: rect outside canvas");
  return resample_scanlines(rect, out, [&](int y, std::uint8_t* row) {
    fill_row(y, rect.x, rect.x2(), row);
  });
}

Patch render_region(const Scene& scene, const PixelRect& rect, Resolution out) {
  return SceneView(scene).read(rect, out);
}

void write_scene(const std::filesystem::path& path, const Scene& scene) {
  nlohmann::ordered_json j;
  j["canvas"] = {{"w", scene.canvas.w}, {"h", scene.canvas.h}};
  j["seed"] = scene.seed;
  auto& heads = j["heads"] = nlohmann::ordered_json::array();
  for (const Head& hd : scene.heads) {
    nlohmann::ordered_json o;
    o["cx"] = hd.cx;
    o["cy"] = hd.cy;
    o["bw"] = hd.bw;
    o["bh"] = hd.bh;
    heads.push_back(std::move(o));
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("write_scene: cannot open " + path.string());
  f << j.dump(2) << "\n";
  if (!f) throw Error("write_scene: write failed for " + path.string());
}

Scene read_scene(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("read_scene: cannot open " + path.string());
  nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
  if (j.is_discarded()) throw Error("read_scene: invalid JSON in " + path.string());
  Scene s;
  try {
    s.canvas = {j.at("canvas").at("w").get<int>(), j.at("canvas").at("h").get<int>()};
    s.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& o : j.at("heads")) {
      Head hd{o.at("cx").get<int>(), o.at("cy").get<int>(), o.at("bw").get<int>(),
              o.at("bh").get<int>()};
      s.heads.push_back(hd);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("read_scene: bad scene file " + path.string() + ": " + e.what());
  }
  if (!s.canvas.valid()) throw Error("read_scene: bad canvas in " + path.string());
  for (const Head& hd : s.heads)
    if (!(hd.cx >= 0 && hd.cx < s.canvas.w && hd.cy >= 0 && hd.cy < s.canvas.h &&
          hd.bw >= 1 && hd.bh >= 1))
      throw Error("read_scene: head outside canvas in " + path.string());
  return s;
}

}  // namespace gigazoom
