#include "gigazoom/zoom_schedule.hpp"

#include <cmath>

namespace gigazoom {

namespace {

int round_dim(double v) { return std::max(1, int(std::lround(v))); }

// Real-valued dimension at level t; both formulas hit canvas at t=0 and
// max_res at t=L, and keep shrinking when evaluated past L.
double level_dim(ZoomKind kind, double d0, double dmax, int levels, int t) {
  if (kind == ZoomKind::linear) return d0 - (d0 - dmax) / levels * t;
  return d0 * std::pow(dmax / d0, double(t) / levels);
}

ZoomSchedule build(ZoomKind kind, Resolution canvas, Resolution max_res, int levels) {
  require(levels >= 1, "zoom schedule: levels must be >= 1");
  require(max_res.valid(), "zoom schedule: max_res must be >= 1x1");
  require(canvas.w >= max_res.w && canvas.h >= max_res.h,
          "zoom schedule: canvas must be >= max_res in both axes");
  ZoomSchedule s;
  s.kind = kind;
  s.levels = levels;
  s.canvas = canvas;
  s.max_res = max_res;
  s.dims.reserve(std::size_t(levels) + 1);
  for (int t = 0; t <= levels; ++t)
    s.dims.push_back({round_dim(level_dim(kind, canvas.w, max_res.w, levels, t)),
                      round_dim(level_dim(kind, canvas.h, max_res.h, levels, t))});
  return s;
}

}  // namespace

ZoomSchedule linear_schedule(Resolution canvas, Resolution max_res, int levels) {
  return build(ZoomKind::linear, canvas, max_res, levels);
}

ZoomSchedule exponential_schedule(Resolution canvas, Resolution max_res, int levels) {
  return build(ZoomKind::exponential, canvas, max_res, levels);
}

ZoomSchedule extend_overzoom(const ZoomSchedule& s, int extra) {
  require(extra >= 0, "extend_overzoom: extra must be >= 0");
  require(!s.dims.empty(), "extend_overzoom: empty schedule");
  if (extra == 0) return s;
  ZoomSchedule out = s;
  for (int e = 1; e <= extra; ++e) {
    const int t = s.levels + s.overzoom_levels + e;
    const double w = level_dim(s.kind, s.canvas.w, s.max_res.w, s.levels, t);
    const double h = level_dim(s.kind, s.canvas.h, s.max_res.h, s.levels, t);
    if (s.kind == ZoomKind::linear && (w < 1.0 || h < 1.0))
      throw Error("extend_overzoom: linear extension reaches below 1 px");
    out.dims.push_back({round_dim(w), round_dim(h)});
  }
  out.overzoom_levels = s.overzoom_levels + extra;
  return out;
}

ZoomSchedule make_schedule(ZoomKind kind, Resolution canvas, Resolution max_res,
                           int levels, int overzoom) {
  return extend_overzoom(build(kind, canvas, max_res, levels), overzoom);
}

const char* to_string(ZoomKind k) {
  return k == ZoomKind::linear ? "linear" : "exponential";
}

ZoomKind zoom_kind_from_string(const std::string& s) {
  if (s == "linear") return ZoomKind::linear;
  if (s == "exponential") return ZoomKind::exponential;
  throw Error("unknown zoom kind: " + s);
}

}  // namespace gigazoom
