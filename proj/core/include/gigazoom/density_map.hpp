#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "gigazoom/geometry.hpp"

namespace gigazoom {

// Non-negative density grid; cell unit is persons, so the sum over all cells
// is the predicted count. Values are stored as float32 (the on-disk width);
// every reduction and resample accumulates in double.
class DensityMap {
 public:
  DensityMap() = default;
  DensityMap(Resolution res, float value = 0.0f);
  DensityMap(Resolution res, std::vector<float> values);

  Resolution res() const { return res_; }
  int w() const { return res_.w; }
  int h() const { return res_.h; }
  std::int64_t cells() const { return res_.area(); }

  float at(int x, int y) const { return v_[std::size_t(y) * res_.w + x]; }
  float& at(int x, int y) { return v_[std::size_t(y) * res_.w + x]; }
  const std::vector<float>& values() const { return v_; }
  std::vector<float>& values() { return v_; }

  // Throws Error if any cell is negative or non-finite.
  void check_valid() const;

 private:
  Resolution res_{0, 0};
  std::vector<float> v_;
};

double total_count(const DensityMap& d);

// Redistributes each source cell's mass over the destination cells it
// overlaps, proportional to area overlap. The total is invariant (up to
// float32 narrowing of the cells).
DensityMap resize_mass_preserving(const DensityMap& d, Resolution out);

// Returns host with the cells inside rect carrying sub's values; sub is
// resized to rect's dimensions first when they differ.
DensityMap replace_region(const DensityMap& host, const GridRect& rect,
                          const DensityMap& sub);

double region_mass(const DensityMap& d, const GridRect& rect);

// DMAP binary format: "DMAP", u32le width, u32le height, w*h float32le
// values row-major. Bit-exact round trip.
void write_dmap(const std::filesystem::path& path, const DensityMap& d);
DensityMap read_dmap(const std::filesystem::path& path);

// 8-bit max-normalized heat map for inspection; lossy, never read back.
void write_heatmap_pgm(const std::filesystem::path& path, const DensityMap& d);

}  // namespace gigazoom
