#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gigazoom/density_map.hpp"
#include "gigazoom/rng.hpp"

namespace gigazoom::test {

// Unique scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("gigazoom_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

inline DensityMap random_density(Rng& rng, Resolution res, double hi = 10.0) {
  std::vector<float> v(std::size_t(res.area()));
  for (auto& x : v) x = float(rng.uniform(0.0, hi));
  return DensityMap(res, std::move(v));
}

inline std::string read_file_bytes(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

inline bool bit_identical(const DensityMap& a, const DensityMap& b) {
  if (a.res() != b.res()) return false;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    if (a.values()[i] != b.values()[i]) return false;
  return true;
}

}  // namespace gigazoom::test
