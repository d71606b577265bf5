#pragma once

#include <vector>

#include "gigazoom/geometry.hpp"

namespace gigazoom {

enum class ZoomKind { linear, exponential };

// Window dimensions per zoom level, dims[0] = full canvas, dims[levels] ~=
// (w_max, h_max), optionally extended past a 1:1 pixel ratio (overzoom).
struct ZoomSchedule {
  ZoomKind kind = ZoomKind::exponential;
  int levels = 0;           // L
  int overzoom_levels = 0;  // appended entries past dims[L]
  Resolution canvas;        // formula endpoints, kept for overzoom extension
  Resolution max_res;
  std::vector<Resolution> dims;

  int last_level() const { return int(dims.size()) - 1; }
};

ZoomSchedule linear_schedule(Resolution canvas, Resolution max_res, int levels);
ZoomSchedule exponential_schedule(Resolution canvas, Resolution max_res, int levels);

// Appends `extra` levels by continuing the schedule's formula past t = L.
// Appended dims fall below max_res, which signals upsampled patches. Throws
// when a linear extension would reach below one pixel.
ZoomSchedule extend_overzoom(const ZoomSchedule& s, int extra);

ZoomSchedule make_schedule(ZoomKind kind, Resolution canvas, Resolution max_res,
                           int levels, int overzoom);

const char* to_string(ZoomKind k);
ZoomKind zoom_kind_from_string(const std::string& s);

}  // namespace gigazoom
