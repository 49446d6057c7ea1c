#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "wellvoice/rng.hpp"
#include "wellvoice/signal_io.hpp"

namespace wellvoice::testing {

inline std::vector<double> Sine(double hz, double seconds, double amp = 0.5,
                                int rate = kCanonicalRateHz) {
  const auto n = static_cast<std::size_t>(seconds * rate);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  }
  return x;
}

inline std::vector<double> Sawtooth(double hz, double seconds, double amp = 0.5) {
  const auto n = static_cast<std::size_t>(seconds * kCanonicalRateHz);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = hz * i / kCanonicalRateHz;
    x[i] = amp * (2.0 * (phase - std::floor(phase)) - 1.0);
  }
  return x;
}

inline std::vector<double> WhiteNoise(std::size_t n, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = sd * StandardNormal(rng);
  return x;
}

inline Waveform Wave(std::vector<double> samples) {
  return Waveform{std::move(samples), kCanonicalRateHz};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("wellvoice_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace wellvoice::testing
