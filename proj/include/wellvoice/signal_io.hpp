#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wellvoice {

inline constexpr int kCanonicalRateHz = 16000;
inline constexpr std::size_t kFrameLength = 400;  // 25 ms at 16 kHz
inline constexpr std::size_t kFrameHop = 160;     // 10 ms at 16 kHz
inline constexpr double kDefaultPreEmphasis = 0.97;

/// Mono waveform with amplitudes in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kCanonicalRateHz;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// Fixed-geometry frame sequence. `frames` are pre-emphasized and Hamming
/// tapered (spectral analysis); `raw` holds the same spans of the original
/// waveform untouched (periodicity analysis: pitch, jitter, HNR).
class FrameStream {
 public:
  FrameStream() = default;
  FrameStream(std::vector<double> tapered, std::vector<double> raw,
              std::size_t count);

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::span<const double> frame(std::size_t i) const {
    return {tapered_.data() + i * kFrameLength, kFrameLength};
  }
  std::span<const double> raw(std::size_t i) const {
    return {raw_.data() + i * kFrameLength, kFrameLength};
  }

  std::size_t frame_length() const { return kFrameLength; }
  std::size_t hop_samples() const { return kFrameHop; }
  const std::string& window_fn() const { return window_fn_; }

  /// Contiguous stretch of the original waveform covering frames
  /// [first, last] inclusive.
  std::vector<double> raw_span(std::size_t first, std::size_t last) const;

 private:
  std::vector<double> tapered_;
  std::vector<double> raw_;
  std::size_t count_ = 0;
  std::string window_fn_ = "hamming";
};

/// Number of full frames that fit in `n` samples (0 when n < 400).
std::size_t FrameCount(std::size_t n);

/// Windowed-sinc resampling to `target_rate_hz`. Output length is
/// floor(n * target / source).
std::vector<double> Resample(std::span<const double> input, int source_rate_hz,
                             int target_rate_hz);

/// Parses a RIFF/WAVE byte buffer: PCM 8/16/24/32-bit or 32-bit float,
/// 1-2 channels, 8-48 kHz. Result is mono at 16 kHz.
Waveform DecodeWav(std::span<const unsigned char> bytes);
Waveform DecodeWav(const std::filesystem::path& path);

/// Writes 16-bit PCM mono.
void WriteWav16(const std::filesystem::path& path,
                std::span<const double> samples, int sample_rate_hz);
std::vector<unsigned char> EncodeWav16(std::span<const double> samples,
                                       int sample_rate_hz);

FrameStream Frame(const Waveform& w, double pre_emphasis = kDefaultPreEmphasis);

const std::vector<double>& HammingWindow();

}  // namespace wellvoice
