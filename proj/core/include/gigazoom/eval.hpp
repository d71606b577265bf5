#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gigazoom/pipeline.hpp"
#include "gigazoom/scene.hpp"

namespace gigazoom {

struct MaeMse {
  double mae = 0.0;
  double mse = 0.0;
};

MaeMse mae_mse(const std::vector<double>& preds, const std::vector<double>& gts);

struct EvalRecord {
  std::string scene_id;
  double pred = 0.0;
  double gt = 0.0;
  double abs_error = 0.0;
};

struct EvalReport {
  std::vector<EvalRecord> records;
  double mae = 0.0;
  double mse = 0.0;
  std::string config_fingerprint;
  std::uint64_t seed = 0;
};

EvalReport make_report(std::vector<EvalRecord> records, std::string fingerprint,
                       std::uint64_t seed);
void write_report_json(const std::filesystem::path& path, const EvalReport& report);

// Single estimate on the whole canvas downsampled to the patch resolution.
double baseline_downsample(const PatchSource& src, Estimator& est,
                           Resolution patch_res);

struct SlidingBaselineResult {
  DensityMap density;  // averaged multi-scale map at the finest assembled res
  double count = 0.0;
  std::vector<int> windows_per_scale;
};

// Non-overlapping patch-sized windows over the canvas at several downsample
// scales; edge windows zero-padded and the padded cells discarded. Per-scale
// maps are mass-preservingly brought to a common resolution and averaged.
SlidingBaselineResult baseline_sliding_window(
    const PatchSource& src, Estimator& est, Resolution patch_res,
    const std::vector<double>& scales = {1.0, 0.25, 0.125});

// Evaluation suite: scene generators plus a base pipeline config.
struct Suite {
  std::vector<SceneParams> scenes;
  GigaZoomConfig config;
};

Suite load_suite(const std::filesystem::path& path);

// One-at-a-time ablation axes; empty vectors skip that table.
struct AblationAxes {
  std::vector<ZoomKind> zoom_kinds;
  std::vector<int> levels;
  std::vector<std::string> clusters;  // "off" or k
  std::vector<int> overzoom;
};

AblationAxes load_axes(const std::filesystem::path& path);

struct AblationRow {
  std::string table;
  std::string axis;
  std::string value;
  double mae = 0.0;
  double mse = 0.0;
  int n = 0;
};

// Runs gigazoom with an oracle estimator over the suite for every axis
// value. The zoom-level and overzoom tables disable clustering, matching
// how those ablations isolate a single chain.
std::vector<AblationRow> run_ablation(const Suite& suite, const AblationAxes& axes);

std::string ablation_csv(const std::vector<AblationRow>& rows);
// CSV at `csv_path` plus the same rows as JSON next to it (.json).
void write_ablation_report(const std::filesystem::path& csv_path,
                           const std::vector<AblationRow>& rows);

}  // namespace gigazoom
