#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "gigazoom/density_map.hpp"
#include "gigazoom/raster.hpp"
#include "gigazoom/scene.hpp"

namespace gigazoom {

struct EstimatorError : Error {
  using Error::Error;
};

struct EstimatorRequest {
  // Patch at the configured (w_max, h_max); may be left empty for
  // estimators that report needs_patch() == false.
  Patch patch;
  Resolution patch_res;
  // Level-0 footprint of the patch content.
  PixelRect source_rect;
  // Patch pixels actually covered by source_rect; equals patch_res except
  // for zero-padded edge windows in the sliding-window baseline.
  Resolution content_size;

  // Level-0 pixels per patch pixel: >= 1 normally, < 1 when overzooming.
  double native_scale() const {
    return double(source_rect.size.w) / double(content_size.w);
  }
};

// Pluggable crowd-density estimator. Implementations return a map at the
// resolution declared by output_res() (patch resolution over the output
// stride) and must fail loudly, never with silent zeros.
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual DensityMap estimate(const EstimatorRequest& req) = 0;
  virtual Resolution output_res() const = 0;
  // Safe to call from several threads of control at once?
  virtual bool concurrent_safe() const { return true; }
  // False lets the pipeline skip patch materialization.
  virtual bool needs_patch() const { return true; }
};

inline Resolution stride_output_res(Resolution patch_res, int stride) {
  require(stride >= 1, "output stride must be >= 1");
  return {std::max(1, patch_res.w / stride), std::max(1, patch_res.h / stride)};
}

// Output-map cells covered by actual patch content; the full map unless the
// patch was zero-padded.
Resolution content_cells(Resolution content, Resolution patch, Resolution out);

// Accuracy loss as a function of downsampling octaves (log2 of the pixel
// ratio): zero at a 1:1 ratio and below (overzoom), growing with scale.
struct DegradationParams {
  double blur_per_octave = 0.0;  // sigma, density cells per octave
  double bias_per_octave = 0.0;  // persons per cell per octave
  double noise_std = 0.0;        // relative multiplicative noise
  std::uint64_t seed = 1;
};

// Ground truth corrupted per DegradationParams; the test-and-evaluation
// stand-in for a real crowd counting model.
class OracleEstimator : public Estimator {
 public:
  OracleEstimator(const Scene& scene, DegradationParams deg, Resolution out_res);

  DensityMap estimate(const EstimatorRequest& req) override;
  Resolution output_res() const override { return out_res_; }
  bool needs_patch() const override { return false; }

 private:
  const Scene* scene_;
  DegradationParams deg_;
  Resolution out_res_;
};

// Bridges to a real model through the subprocess file protocol:
// the command template's {input} expands to a PGM patch path, {output} to
// the DMAP path the command must write. Non-zero exit, timeouts, malformed
// or wrong-sized DMAPs all raise EstimatorError.
class ExternalEstimator : public Estimator {
 public:
  ExternalEstimator(std::string cmd_template, Resolution out_res,
                    double timeout_sec = 300.0);

  DensityMap estimate(const EstimatorRequest& req) override;
  Resolution output_res() const override { return out_res_; }

 private:
  std::string cmd_template_;
  Resolution out_res_;
  double timeout_sec_;
};

// Forwarding wrapper that counts estimate() calls.
class CountingEstimator : public Estimator {
 public:
  explicit CountingEstimator(Estimator& inner) : inner_(&inner) {}

  DensityMap estimate(const EstimatorRequest& req) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_->estimate(req);
  }
  Resolution output_res() const override { return inner_->output_res(); }
  bool concurrent_safe() const override { return inner_->concurrent_safe(); }
  bool needs_patch() const override { return inner_->needs_patch(); }

  std::int64_t calls() const { return calls_.load(); }

 private:
  Estimator* inner_;
  std::atomic<std::int64_t> calls_{0};
};

}  // namespace gigazoom
