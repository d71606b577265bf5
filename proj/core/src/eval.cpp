#include "gigazoom/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace gigazoom {

using nlohmann::json;

MaeMse mae_mse(const std::vector<double>& preds, const std::vector<double>& gts) {
  require(!preds.empty(), "mae_mse: empty input");
  require(preds.size() == gts.size(), "mae_mse: length mismatch");
  double ae = 0.0, se = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double e = preds[i] - gts[i];
    ae += std::abs(e);
    se += e * e;
  }
  const double n = double(preds.size());
  return {ae / n, se / n};
}

EvalReport make_report(std::vector<EvalRecord> records, std::string fingerprint,
                       std::uint64_t seed) {
  require(!records.empty(), "make_report: no records");
  EvalReport r;
  r.records = std::move(records);
  std::vector<double> preds, gts;
  preds.reserve(r.records.size());
  gts.reserve(r.records.size());
  for (auto& rec : r.records) {
    rec.abs_error = std::abs(rec.pred - rec.gt);
    preds.push_back(rec.pred);
    gts.push_back(rec.gt);
  }
  const MaeMse m = mae_mse(preds, gts);
  r.mae = m.mae;
  r.mse = m.mse;
  r.config_fingerprint = std::move(fingerprint);
  r.seed = seed;
  return r;
}

void write_report_json(const std::filesystem::path& path, const EvalReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.records.size();
  j["mae"] = report.mae;
  j["mse"] = report.mse;
  j["config_fingerprint"] = report.config_fingerprint;
  j["seed"] = report.seed;
  auto& recs = j["records"] = nlohmann::ordered_json::array();
  for (const auto& rec : report.records) {
    nlohmann::ordered_json o;
    o["scene"] = rec.scene_id;
    o["pred"] = rec.pred;
    o["gt"] = rec.gt;
    o["abs_error"] = rec.abs_error;
    recs.push_back(std::move(o));
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw Error("write_report_json: cannot open " + path.string());
  f << j.dump(2) << "\n";
}

double baseline_downsample(const PatchSource& src, Estimator& est,
                           Resolution patch_res) {
  EstimatorRequest req;
  req.patch_res = patch_res;
  req.source_rect = full_rect(src.canvas());
  req.content_size = patch_res;
  if (est.needs_patch()) req.patch = src.read(req.source_rect, patch_res);
  return total_count(est.estimate(req));
}

SlidingBaselineResult baseline_sliding_window(const PatchSource& src, Estimator& est,
                                              Resolution patch_res,
                                              const std::vector<double>& scales) {
  require(!scales.empty(), "baseline_sliding_window: no scales");
  const Resolution canvas = src.canvas();
  const Resolution dres = est.output_res();

  SlidingBaselineResult res;
  std::vector<DensityMap> per_scale;

  for (const double s : scales) {
    require(s > 0.0 && s <= 1.0, "baseline_sliding_window: scale must be in (0, 1]");
    // Dimensions of the downsampled canvas this scale works on.
    const int sw = std::max(1, int(std::lround(canvas.w * s)));
    const int sh = std::max(1, int(std::lround(canvas.h * s)));
    const int cols = (sw + patch_res.w - 1) / patch_res.w;
    const int rows = (sh + patch_res.h - 1) / patch_res.h;
    res.windows_per_scale.push_back(cols * rows);

    // Valid (non-padded) cells per column/row of windows.
    std::vector<int> col_cells(std::size_t(cols), 0), row_cells(std::size_t(rows), 0);
    std::vector<int> col_px(std::size_t(cols), 0), row_px(std::size_t(rows), 0);
    for (int i = 0; i < cols; ++i) {
      col_px[std::size_t(i)] = std::min(patch_res.w, sw - i * patch_res.w);
      col_cells[std::size_t(i)] =
          content_cells({col_px[std::size_t(i)], patch_res.h}, patch_res, dres).w;
    }
    for (int j = 0; j < rows; ++j) {
      row_px[std::size_t(j)] = std::min(patch_res.h, sh - j * patch_res.h);
      row_cells[std::size_t(j)] =
          content_cells({patch_res.w, row_px[std::size_t(j)]}, patch_res, dres).h;
    }
    std::vector<int> col_off(std::size_t(cols) + 1, 0), row_off(std::size_t(rows) + 1, 0);
    for (int i = 0; i < cols; ++i) col_off[std::size_t(i) + 1] = col_off[std::size_t(i)] + col_cells[std::size_t(i)];
    for (int j = 0; j < rows; ++j) row_off[std::size_t(j) + 1] = row_off[std::size_t(j)] + row_cells[std::size_t(j)];

    DensityMap assembled(Resolution{col_off[std::size_t(cols)], row_off[std::size_t(rows)]}, 0.0f);
    for (int j = 0; j < rows; ++j) {
      for (int i = 0; i < cols; ++i) {
        // Window content in scaled pixels -> source rect in level-0 pixels.
        const int vx = i * patch_res.w, vy = j * patch_res.h;
        const int vw = col_px[std::size_t(i)], vh = row_px[std::size_t(j)];
        const auto to_src_x = [&](int v) {
          return std::clamp(int(std::lround(double(v) * canvas.w / sw)), 0, canvas.w);
        };
        const auto to_src_y = [&](int v) {
          return std::clamp(int(std::lround(double(v) * canvas.h / sh)), 0, canvas.h);
        };
        const int x0 = to_src_x(vx), x1 = std::max(to_src_x(vx + vw), to_src_x(vx) + 1);
        const int y0 = to_src_y(vy), y1 = std::max(to_src_y(vy + vh), to_src_y(vy) + 1);
        const PixelRect rect{x0, y0, {std::min(x1, canvas.w) - x0, std::min(y1, canvas.h) - y0}};

        EstimatorRequest req;
        req.patch_res = patch_res;
        req.source_rect = rect;
        req.content_size = {vw, vh};
        if (est.needs_patch()) {
          req.patch = Patch(patch_res, 0);  // zero padding outside the content
          const Patch content = src.read(rect, {vw, vh});
          for (int y = 0; y < vh; ++y)
            std::copy_n(content.px.data() + std::size_t(y) * vw, vw,
                        req.patch.px.data() + std::size_t(y) * patch_res.w);
        }
        const DensityMap win = est.estimate(req);

        // Keep the valid cells, drop the padded region.
        const int cw = col_cells[std::size_t(i)], ch = row_cells[std::size_t(j)];
        for (int y = 0; y < ch; ++y)
          for (int x = 0; x < cw; ++x)
            assembled.at(col_off[std::size_t(i)] + x, row_off[std::size_t(j)] + y) =
                win.at(x, y);
      }
    }
    per_scale.push_back(std::move(assembled));
  }

  // Average across scales at the finest assembled resolution.
  Resolution common = per_scale.front().res();
  for (const auto& m : per_scale)
    if (m.res().area() > common.area()) common = m.res();
  DensityMap avg(common, 0.0f);
  for (const auto& m : per_scale) {
    const DensityMap r = resize_mass_preserving(m, common);
    for (std::size_t i = 0; i < avg.values().size(); ++i)
      avg.values()[i] += r.values()[i] / float(per_scale.size());
  }
  res.density = std::move(avg);
  res.count = total_count(res.density);
  return res;
}

Suite load_suite(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("load_suite: cannot open " + path.string());
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw Error("load_suite: invalid JSON in " + path.string());

  Suite suite;
  if (j.contains("config")) suite.config = config_from_json_text(j["config"].dump());
  if (!j.contains("scenes") || !j["scenes"].is_array() || j["scenes"].empty())
    throw Error("load_suite: suite needs a non-empty scenes array");
  for (const auto& s : j["scenes"]) {
    SceneParams p;
    p.canvas = {s.value("width", 0), s.value("height", 0)};
    p.count_min = s.value("count_min", s.value("count", 0));
    p.count_max = s.value("count_max", s.value("count", 0));
    p.hotspot_count = s.value("hotspots", p.hotspot_count);
    p.hotspot_spread = s.value("spread", p.hotspot_spread);
    p.hotspot_weight = s.value("hotspot_weight", p.hotspot_weight);
    p.box_min = s.value("box_min", p.box_min);
    p.box_max = s.value("box_max", p.box_max);
    p.seed = s.value("seed", std::uint64_t(1));
    if (!p.canvas.valid()) throw Error("load_suite: scene needs width/height");
    suite.scenes.push_back(p);
  }
  return suite;
}

AblationAxes load_axes(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("load_axes: cannot open " + path.string());
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded()) throw Error("load_axes: invalid JSON in " + path.string());

  AblationAxes a;
  if (j.contains("zoom_kind"))
    for (const auto& v : j["zoom_kind"])
      a.zoom_kinds.push_back(zoom_kind_from_string(v.get<std::string>()));
  if (j.contains("levels"))
    for (const auto& v : j["levels"]) a.levels.push_back(v.get<int>());
  if (j.contains("clusters"))
    for (const auto& v : j["clusters"])
      a.clusters.push_back(v.is_string() ? v.get<std::string>()
                                         : std::to_string(v.get<int>()));
  if (j.contains("overzoom"))
    for (const auto& v : j["overzoom"]) a.overzoom.push_back(v.get<int>());
  return a;
}

namespace {

// MAE/MSE of gigazoom over the suite under one configuration.
AblationRow run_cell(const Suite& suite, const GigaZoomConfig& cfg,
                     const std::string& table, const std::string& axis,
                     const std::string& value) {
  std::vector<double> preds, gts;
  for (const SceneParams& params : suite.scenes) {
    const Scene scene = generate_scene(params);
    SceneView view(scene);
    OracleEstimator oracle(scene, cfg.degradation, cfg.output_res());
    const GigaZoomResult r = gigazoom(view, cfg, oracle, oracle);
    preds.push_back(r.count);
    gts.push_back(region_head_count(scene, full_rect(scene.canvas)));
  }
  const MaeMse m = mae_mse(preds, gts);
  return {table, axis, value, m.mae, m.mse, int(preds.size())};
}

}  // namespace

std::vector<AblationRow> run_ablation(const Suite& suite, const AblationAxes& axes) {
  require(!suite.scenes.empty(), "run_ablation: empty suite");
  require(!axes.zoom_kinds.empty() || !axes.levels.empty() || !axes.clusters.empty() ||
              !axes.overzoom.empty(),
          "run_ablation: empty axes");
  std::vector<AblationRow> rows;

  for (const ZoomKind kind : axes.zoom_kinds) {
    GigaZoomConfig cfg = suite.config;
    cfg.zoom.kind = kind;
    rows.push_back(run_cell(suite, cfg, "zoom_method", "zoom.kind", to_string(kind)));
  }
  for (const int levels : axes.levels) {
    GigaZoomConfig cfg = suite.config;
    cfg.zoom.levels = levels;
    cfg.multiregion.enabled = false;  // single chain, as in the level sweep
    rows.push_back(run_cell(suite, cfg, "zoom_levels", "zoom.levels",
                            std::to_string(levels)));
  }
  for (const std::string& c : axes.clusters) {
    GigaZoomConfig cfg = suite.config;
    if (c == "off") {
      cfg.multiregion.enabled = false;
    } else {
      cfg.multiregion.enabled = true;
      cfg.multiregion.clusters = std::stoi(c);
    }
    rows.push_back(run_cell(suite, cfg, "clusters", "multiregion.k", c));
  }
  for (const int oz : axes.overzoom) {
    GigaZoomConfig cfg = suite.config;
    cfg.zoom.overzoom = oz;
    cfg.multiregion.enabled = false;  // single chain, as in the overzoom sweep
    rows.push_back(run_cell(suite, cfg, "overzoom", "zoom.overzoom",
                            std::to_string(oz)));
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "table,axis,value,mae,mse,n\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.6f,%.6f,%d\n", r.table.c_str(),
                  r.axis.c_str(), r.value.c_str(), r.mae, r.mse, r.n);
    out += buf;
  }
  return out;
}

void write_ablation_report(const std::filesystem::path& csv_path,
                           const std::vector<AblationRow>& rows) {
  {
    std::ofstream f(csv_path, std::ios::trunc | std::ios::binary);
    if (!f) throw Error("write_ablation_report: cannot open " + csv_path.string());
    f << ablation_csv(rows);
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["table"] = r.table;
    o["axis"] = r.axis;
    o["value"] = r.value;
    o["mae"] = r.mae;
    o["mse"] = r.mse;
    o["n"] = r.n;
    j.push_back(std::move(o));
  }
  std::filesystem::path json_path = csv_path;
  json_path.replace_extension(".json");
  std::ofstream f(json_path, std::ios::trunc);
  if (!f) throw Error("write_ablation_report: cannot open " + json_path.string());
  f << j.dump(2) << "\n";
}

}  // namespace gigazoom
