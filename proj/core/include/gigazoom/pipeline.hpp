#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gigazoom/estimator.hpp"
#include "gigazoom/multiregion.hpp"
#include "gigazoom/raster.hpp"
#include "gigazoom/zoom_schedule.hpp"

namespace gigazoom {

struct ZoomParams {
  ZoomKind kind = ZoomKind::exponential;
  int levels = 10;
  int overzoom = 0;
};

struct PatchParams {
  int w = 2560;
  int h = 1440;
  int stride = 8;
};

struct GigaZoomConfig {
  ZoomParams zoom;
  PatchParams patch;
  MultiRegionConfig multiregion;
  DegradationParams degradation;  // consumed when an oracle estimator is built
  bool parallel_chains = true;

  Resolution patch_res() const { return {patch.w, patch.h}; }
  Resolution output_res() const { return stride_output_res(patch_res(), patch.stride); }
};

// cfg.json with defaults for missing keys.
GigaZoomConfig load_config(const std::filesystem::path& path);
GigaZoomConfig config_from_json_text(const std::string& text);
std::string config_fingerprint(const GigaZoomConfig& cfg);

// One level of a forward pass: where the window sat, what the estimator
// returned, and which cell region the next level refines.
struct ZoomStep {
  int level = 0;
  PixelRect global_rect;
  DensityMap density;
  std::optional<GridRect> child_cell_rect;  // absent on the last step
  double estimate_ms = 0.0;
};

struct ZoomTrace {
  std::vector<ZoomStep> steps;
};

// Iteratively zooms into the densest window from start_level to the end of
// the schedule. start_rect must have the schedule's start_level dimensions.
// Estimator failures abort the chain with level/rect context attached.
ZoomTrace forward_pass(const PatchSource& src, const ZoomSchedule& schedule,
                       const PixelRect& start_rect, int start_level,
                       Estimator& estimator, Resolution patch_res);

// Deepest-to-shallowest region replacement; returns the refined map at the
// trace's first level.
DensityMap backward_pass(const ZoomTrace& trace);

struct ChainOutcome {
  int region = 0;
  bool ok = false;
  std::int64_t estimator_calls = 0;
  std::string error;
};

struct GigaZoomResult {
  DensityMap density;  // refined coarse map
  double count = 0.0;
  Resolution canvas;
  DensityMap coarse;  // D0 as estimated, before refinement
  ZoomSchedule schedule;
  std::vector<RegionPlan> regions;
  std::vector<ZoomTrace> traces;  // parallel to regions; empty on failure
  std::vector<ChainOutcome> chains;
  std::int64_t estimator_calls = 0;
};

// Full run: coarse estimate, region planning, one zoom chain per region
// (parallel across regions when the estimators allow), then deterministic
// merge in ascending region order. A failed chain leaves the coarse map
// untouched in its region and is flagged in the result.
GigaZoomResult gigazoom(const PatchSource& src, const GigaZoomConfig& cfg,
                        Estimator& coarse, Estimator& refine);

// Debug bundle: level_0.dmap, chain_{i}/level_{t}.dmap, trace.json.
void write_trace_bundle(const std::filesystem::path& dir, const GigaZoomResult& res);

}  // namespace gigazoom
