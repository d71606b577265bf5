#include "gigazoom/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <future>

#include <nlohmann/json.hpp>

namespace gigazoom {

using nlohmann::json;

GigaZoomConfig config_from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("config: invalid JSON");
  GigaZoomConfig c;
  if (j.contains("zoom")) {
    const auto& z = j["zoom"];
    c.zoom.kind = zoom_kind_from_string(z.value("kind", std::string("exponential")));
    c.zoom.levels = z.value("levels", c.zoom.levels);
    c.zoom.overzoom = z.value("overzoom", c.zoom.overzoom);
  }
  if (j.contains("patch")) {
    const auto& p = j["patch"];
    c.patch.w = p.value("w", c.patch.w);
    c.patch.h = p.value("h", c.patch.h);
    c.patch.stride = p.value("stride", c.patch.stride);
  }
  if (j.contains("multiregion")) {
    const auto& m = j["multiregion"];
    c.multiregion.enabled = m.value("enabled", c.multiregion.enabled);
    c.multiregion.smooth_sigma = m.value("sigma", c.multiregion.smooth_sigma);
    c.multiregion.smooth_radius = m.value("radius", c.multiregion.smooth_radius);
    c.multiregion.peak_threshold = m.value("lambda", c.multiregion.peak_threshold);
    c.multiregion.clusters = m.value("k", c.multiregion.clusters);
    c.multiregion.kmeans_iters = m.value("iters", c.multiregion.kmeans_iters);
    c.multiregion.kmeans_seed = m.value("seed", c.multiregion.kmeans_seed);
  }
  if (j.contains("degradation")) {
    const auto& d = j["degradation"];
    c.degradation.blur_per_octave = d.value("blur_per_octave", c.degradation.blur_per_octave);
    c.degradation.bias_per_octave = d.value("bias_per_octave", c.degradation.bias_per_octave);
    c.degradation.noise_std = d.value("noise_std", c.degradation.noise_std);
    c.degradation.seed = d.value("seed", c.degradation.seed);
  }
  c.parallel_chains = j.value("parallel", c.parallel_chains);
  require(c.zoom.levels >= 1, "config: zoom.levels must be >= 1");
  require(c.zoom.overzoom >= 0, "config: zoom.overzoom must be >= 0");
  require(c.patch.w >= 1 && c.patch.h >= 1 && c.patch.stride >= 1, "config: bad patch");
  require(c.multiregion.clusters >= 1, "config: multiregion.k must be >= 1");
  require(c.multiregion.peak_threshold >= 0, "config: multiregion.lambda must be >= 0");
  return c;
}

GigaZoomConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("config: cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return config_from_json_text(text);
}

std::string config_fingerprint(const GigaZoomConfig& c) {
  json j;
  j["zoom"] = {{"kind", to_string(c.zoom.kind)},
               {"levels", c.zoom.levels},
               {"overzoom", c.zoom.overzoom}};
  j["patch"] = {{"w", c.patch.w}, {"h", c.patch.h}, {"stride", c.patch.stride}};
  j["multiregion"] = {{"enabled", c.multiregion.enabled},
                      {"sigma", c.multiregion.smooth_sigma},
                      {"radius", c.multiregion.smooth_radius},
                      {"lambda", c.multiregion.peak_threshold},
                      {"k", c.multiregion.clusters},
                      {"iters", c.multiregion.kmeans_iters},
                      {"seed", c.multiregion.kmeans_seed}};
  j["degradation"] = {{"blur_per_octave", c.degradation.blur_per_octave},
                      {"bias_per_octave", c.degradation.bias_per_octave},
                      {"noise_std", c.degradation.noise_std},
                      {"seed", c.degradation.seed}};
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ZoomTrace forward_pass(const PatchSource& src, const ZoomSchedule& schedule,
                       const PixelRect& start_rect, int start_level,
                       Estimator& estimator, Resolution patch_res) {
  const int last = schedule.last_level();
  require(start_level >= 0 && start_level <= last, "forward_pass: bad start level");
  require(start_rect.size == schedule.dims[std::size_t(start_level)],
          "forward_pass: start rect does not match schedule dims");
  require(start_rect.within(src.canvas()), "forward_pass: start rect outside canvas");

  const Resolution dres = estimator.output_res();
  ZoomTrace trace;
  trace.steps.reserve(std::size_t(last - start_level) + 1);

  PixelRect rect = start_rect;
  for (int t = start_level; t <= last; ++t) {
    ZoomStep step;
    step.level = t;
    step.global_rect = rect;
    try {
      EstimatorRequest req;
      req.patch_res = patch_res;
      req.source_rect = rect;
      req.content_size = patch_res;
      if (estimator.needs_patch()) req.patch = src.read(rect, patch_res);
      const auto t0 = std::chrono::steady_clock::now();
      step.density = estimator.estimate(req);
      step.estimate_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
    } catch (const std::exception& e) {
      throw EstimatorError("zoom chain aborted at level " + std::to_string(t) +
                           ", rect " + to_string(rect) + ": " + e.what());
    }
    if (step.density.res() != dres)
      throw EstimatorError("estimator returned " + to_string(step.density.res()) +
                           " at level " + std::to_string(t) + ", expected " +
                           to_string(dres));

    if (t < last) {
      const KernelSize k =
          kernel_size(schedule.dims[std::size_t(t)], schedule.dims[std::size_t(t) + 1], dres);
      const WindowSumGrid sums = window_sums(step.density, k);
      const CellPoint peak = argmax_window(sums);
      step.child_cell_rect = GridRect{peak.x, peak.y, k.w, k.h};
      rect = map_to_global(rect, peak, dres, schedule.dims[std::size_t(t) + 1]);
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

DensityMap backward_pass(const ZoomTrace& trace) {
  require(!trace.steps.empty(), "backward_pass: empty trace");
  DensityMap refined = trace.steps.back().density;
  for (std::size_t i = trace.steps.size() - 1; i-- > 0;) {
    const ZoomStep& step = trace.steps[i];
    require(step.child_cell_rect.has_value(), "backward_pass: interior step lacks child rect");
    refined = replace_region(step.density, *step.child_cell_rect, refined);
  }
  return refined;
}

GigaZoomResult gigazoom(const PatchSource& src, const GigaZoomConfig& cfg,
                        Estimator& coarse, Estimator& refine) {
  const Resolution canvas = src.canvas();
  const Resolution patch_res = cfg.patch_res();
  const Resolution dres = cfg.output_res();
  require(coarse.output_res() == dres && refine.output_res() == dres,
          "gigazoom: estimator output resolution does not match config");

  GigaZoomResult res;
  res.canvas = canvas;
  res.schedule = make_schedule(cfg.zoom.kind, canvas, patch_res, cfg.zoom.levels,
                               cfg.zoom.overzoom);

  // Coarse pass over the whole canvas.
  {
    EstimatorRequest req;
    req.patch_res = patch_res;
    req.source_rect = full_rect(canvas);
    req.content_size = patch_res;
    if (coarse.needs_patch()) req.patch = src.read(req.source_rect, patch_res);
    res.coarse = coarse.estimate(req);
    res.estimator_calls = 1;
    if (res.coarse.res() != dres)
      throw EstimatorError("coarse estimator returned " + to_string(res.coarse.res()) +
                           ", expected " + to_string(dres));
  }

  res.regions = plan_regions(res.coarse, canvas, res.schedule, cfg.multiregion);

  // One zoom chain per region, level 1 downward. Chains are independent;
  // the merge below is what has to stay ordered.
  const auto run_chain = [&](std::size_t i) -> std::pair<ZoomTrace, ChainOutcome> {
    ChainOutcome out;
    out.region = int(i);
    CountingEstimator counted(refine);
    try {
      ZoomTrace trace =
          forward_pass(src, res.schedule, res.regions[i].rect, 1, counted, patch_res);
      out.ok = true;
      out.estimator_calls = counted.calls();
      return {std::move(trace), std::move(out)};
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
      out.estimator_calls = counted.calls();
      return {ZoomTrace{}, std::move(out)};
    }
  };

  std::vector<std::pair<ZoomTrace, ChainOutcome>> outcomes(res.regions.size());
  const bool parallel = cfg.parallel_chains && res.regions.size() > 1 &&
                        refine.concurrent_safe();
  if (parallel) {
    std::vector<std::future<std::pair<ZoomTrace, ChainOutcome>>> futs;
    futs.reserve(res.regions.size());
    for (std::size_t i = 0; i < res.regions.size(); ++i)
      futs.push_back(std::async(std::launch::async, run_chain, i));
    for (std::size_t i = 0; i < futs.size(); ++i) outcomes[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < res.regions.size(); ++i) outcomes[i] = run_chain(i);
  }

  // Merge in ascending region order; on overlap the later chain wins.
  res.density = res.coarse;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& [trace, outcome] = outcomes[i];
    res.estimator_calls += outcome.estimator_calls;
    if (outcome.ok) {
      const DensityMap refined = backward_pass(trace);
      res.density = replace_region(res.density, res.regions[i].coarse_cells, refined);
    }
    res.traces.push_back(std::move(trace));
    res.chains.push_back(std::move(outcome));
  }

  res.count = total_count(res.density);
  return res;
}

namespace {

json rect_json(const PixelRect& r) {
  return {{"x", r.x}, {"y", r.y}, {"w", r.size.w}, {"h", r.size.h}};
}

json grid_rect_json(const GridRect& r) {
  return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
}

}  // namespace

void write_trace_bundle(const std::filesystem::path& dir, const GigaZoomResult& res) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("write_trace_bundle: cannot create " + dir.string());

  write_dmap(dir / "level_0.dmap", res.coarse);

  json j;
  j["canvas"] = {{"w", res.canvas.w}, {"h", res.canvas.h}};
  json dims = json::array();
  for (const auto& d : res.schedule.dims) dims.push_back({d.w, d.h});
  j["schedule"] = {{"kind", to_string(res.schedule.kind)},
                   {"levels", res.schedule.levels},
                   {"overzoom", res.schedule.overzoom_levels},
                   {"dims", std::move(dims)}};
  j["count"] = res.count;
  j["estimator_calls"] = res.estimator_calls;

  json chains = json::array();
  for (std::size_t i = 0; i < res.traces.size(); ++i) {
    const auto dirname = "chain_" + std::to_string(i);
    json cj;
    cj["region"] = rect_json(res.regions[i].rect);
    cj["coarse_cells"] = grid_rect_json(res.regions[i].coarse_cells);
    cj["ok"] = res.chains[i].ok;
    if (!res.chains[i].ok) cj["error"] = res.chains[i].error;
    json steps = json::array();
    if (res.chains[i].ok) {
      std::filesystem::create_directories(dir / dirname, ec);
      for (const ZoomStep& s : res.traces[i].steps) {
        write_dmap(dir / dirname / ("level_" + std::to_string(s.level) + ".dmap"),
                   s.density);
        json sj;
        sj["level"] = s.level;
        sj["rect"] = rect_json(s.global_rect);
        if (s.child_cell_rect) {
          sj["child_cells"] = grid_rect_json(*s.child_cell_rect);
          sj["argmax"] = {{"x", s.child_cell_rect->x}, {"y", s.child_cell_rect->y}};
        }
        sj["estimate_ms"] = s.estimate_ms;
        steps.push_back(std::move(sj));
      }
    }
    cj["steps"] = std::move(steps);
    chains.push_back(std::move(cj));
  }
  j["chains"] = std::move(chains);

  std::ofstream f(dir / "trace.json", std::ios::trunc);
  if (!f) throw Error("write_trace_bundle: cannot write trace.json in " + dir.string());
  f << j.dump(2) << "\n";
}

}  // namespace gigazoom
