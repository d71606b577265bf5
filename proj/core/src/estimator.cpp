#include "gigazoom/estimator.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <unistd.h>

#include "gigazoom/multiregion.hpp"
#include "gigazoom/rng.hpp"
#include "subprocess.hpp"

namespace gigazoom {

namespace {

double degradation_octaves(double native_scale) {
  return std::max(0.0, std::log2(native_scale));
}

}  // namespace

Resolution content_cells(Resolution content, Resolution patch, Resolution out) {
  if (content == patch) return out;
  const auto axis = [](int c, int p, int o) {
    return std::clamp(int(std::lround(double(c) * o / p)), 1, o);
  };
  return {axis(content.w, patch.w, out.w), axis(content.h, patch.h, out.h)};
}

OracleEstimator::OracleEstimator(const Scene& scene, DegradationParams deg,
                                 Resolution out_res)
    : scene_(&scene), deg_(deg), out_res_(out_res) {
  require(out_res.valid(), "OracleEstimator: output resolution must be >= 1x1");
  require(deg.blur_per_octave >= 0 && deg.bias_per_octave >= 0 && deg.noise_std >= 0,
          "OracleEstimator: degradation parameters must be >= 0");
}

DensityMap OracleEstimator::estimate(const EstimatorRequest& req) {
  require(req.source_rect.within(scene_->canvas),
          "OracleEstimator: source rect outside scene canvas");
  const Resolution cc = content_cells(req.content_size, req.patch_res, out_res_);

  DensityMap d(out_res_, 0.0f);
  {
    DensityMap content = ground_truth_density(*scene_, req.source_rect, cc);
    if (cc == out_res_) {
      d = std::move(content);
    } else {
      for (int y = 0; y < cc.h; ++y)
        for (int x = 0; x < cc.w; ++x) d.at(x, y) = content.at(x, y);
    }
  }

  const double octaves = degradation_octaves(req.native_scale());
  if (octaves > 0.0 && deg_.blur_per_octave > 0.0) {
    const double sigma = deg_.blur_per_octave * octaves;
    d = gaussian_smooth(d, sigma, std::max(1, int(std::ceil(3.0 * sigma))));
  }
  if (octaves > 0.0 && deg_.bias_per_octave > 0.0) {
    const float bias = float(deg_.bias_per_octave * octaves);
    for (float& v : d.values()) v += bias;
  }
  if (deg_.noise_std > 0.0) {
    std::uint64_t h = deg_.seed;
    h = hash_combine(h, std::uint64_t(std::uint32_t(req.source_rect.x)));
    h = hash_combine(h, std::uint64_t(std::uint32_t(req.source_rect.y)));
    h = hash_combine(h, std::uint64_t(std::uint32_t(req.source_rect.size.w)));
    h = hash_combine(h, std::uint64_t(std::uint32_t(req.source_rect.size.h)));
    h = hash_combine(h, std::uint64_t(std::uint32_t(out_res_.w)));
    Rng rng(h);
    for (float& v : d.values()) {
      v *= float(1.0 + deg_.noise_std * rng.normal());
      if (v < 0.0f) v = 0.0f;
    }
  }
  return d;
}

ExternalEstimator::ExternalEstimator(std::string cmd_template, Resolution out_res,
                                     double timeout_sec)
    : cmd_template_(std::move(cmd_template)), out_res_(out_res), timeout_sec_(timeout_sec) {
  require(out_res.valid(), "ExternalEstimator: output resolution must be >= 1x1");
  require(timeout_sec > 0.0, "ExternalEstimator: timeout must be > 0");
  require(cmd_template_.find("{input}") != std::string::npos &&
              cmd_template_.find("{output}") != std::string::npos,
          "ExternalEstimator: command template needs {input} and {output}");
}

namespace {

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos))
    s.replace(pos, key.size(), value), pos += value.size();
  return s;
}

struct TempFiles {
  std::filesystem::path in, out;
  ~TempFiles() {
    std::error_code ec;
    std::filesystem::remove(in, ec);
    std::filesystem::remove(out, ec);
  }
};

std::atomic<std::uint64_t> g_temp_counter{0};

}  // namespace

DensityMap ExternalEstimator::estimate(const EstimatorRequest& req) {
  require(req.patch.res == req.patch_res && !req.patch.px.empty(),
          "ExternalEstimator: request carries no patch");

  const auto stem = "gigazoom_" + std::to_string(::getpid()) + "_" +
                    std::to_string(g_temp_counter.fetch_add(1));
  TempFiles tmp{std::filesystem::temp_directory_path() / (stem + "_in.pgm"),
                std::filesystem::temp_directory_path() / (stem + "_out.dmap")};

  write_pgm(tmp.in, req.patch);
  const std::string cmd =
      substitute(substitute(cmd_template_, "{input}", tmp.in.string()), "{output}",
                 tmp.out.string());

  const CommandResult cr = run_command(cmd, timeout_sec_);
  if (cr.timed_out)
    throw EstimatorError("external estimator timed out after " +
                         std::to_string(timeout_sec_) + " s: " + cmd);
  if (cr.exit_code != 0)
    throw EstimatorError("external estimator exited with code " +
                         std::to_string(cr.exit_code) + ": " + cmd +
                         (cr.stderr_text.empty() ? "" : "\nstderr: " + cr.stderr_text));

  DensityMap d = [&] {
    try {
      return read_dmap(tmp.out);
    } catch (const Error& e) {
      throw EstimatorError(std::string("external estimator produced a bad DMAP: ") +
                           e.what());
    }
  }();
  if (d.res() != out_res_)
    throw EstimatorError("external estimator dimension mismatch: got " +
                         to_string(d.res()) + ", declared stride implies " +
                         to_string(out_res_));
  return d;
}

}  // namespace gigazoom
