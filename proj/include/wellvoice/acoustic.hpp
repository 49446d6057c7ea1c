#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wellvoice/signal_io.hpp"

namespace wellvoice {

inline constexpr std::size_t kFftSize = 512;
inline constexpr std::size_t kSpectrumBins = kFftSize / 2 + 1;
inline constexpr std::size_t kMelFilters = 26;
inline constexpr std::size_t kBarkBands = 17;
inline constexpr std::size_t kLpcOrder = 12;

inline constexpr std::size_t kMfccDim = 13;
inline constexpr std::size_t kPlpDim = 13;
inline constexpr std::size_t kProsodyDim = 8;
inline constexpr std::size_t kVoiceQualityDim = 7;
inline constexpr std::size_t kSupervectorDim =
    kMfccDim + kPlpDim + kProsodyDim + kVoiceQualityDim;  // 41
inline constexpr std::size_t kFrameFeatureDim = 3 * kSupervectorDim;  // 123

inline constexpr double kLogFloor = 1e-10;
inline constexpr double kMinF0Hz = 60.0;
inline constexpr double kMaxF0Hz = 400.0;
inline constexpr double kVoicingThreshold = 0.45;
inline constexpr double kHnrMinDb = -20.0;
inline constexpr double kHnrMaxDb = 40.0;
inline constexpr int kDeltaWindow = 2;

// Column offsets inside the prosody block.
inline constexpr std::size_t kProsodyLogEnergy = 0;
inline constexpr std::size_t kProsodyF0 = 1;
inline constexpr std::size_t kProsodyVoicing = 2;

/// Row-major frames x named columns.
class FrameMatrix {
 public:
  FrameMatrix() = default;
  FrameMatrix(std::size_t rows, std::vector<std::string> names);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const {
    return data_[r * cols() + c];
  }
  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols(), cols()};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }
  std::vector<double> column(std::size_t c) const;

  /// Horizontal concatenation; row counts must agree.
  static FrameMatrix HStack(std::span<const FrameMatrix* const> parts);

 private:
  std::size_t rows_ = 0;
  std::vector<std::string> names_;
  std::vector<double> data_;
};

// ---- spectral building blocks -------------------------------------------

/// 512-point magnitude spectrum of one tapered frame (257 bins).
std::vector<double> FrameSpectrum(std::span<const double> frame);

/// Triangular mel filters spanning 0-8 kHz, evaluated on the 257 bins.
const std::vector<std::array<double, kSpectrumBins>>& MelFilterbank();
double MelFilterCenterHz(std::size_t filter);
std::array<double, kMelFilters> MelEnergies(std::span<const double> magnitude);

std::array<double, kMfccDim> MfccFromSpectrum(
    std::span<const double> magnitude);

// ---- linear prediction ---------------------------------------------------

struct LpcSolution {
  /// Inverse-filter polynomial A(z) = 1 + a[1] z^-1 + ... + a[p] z^-p.
  std::vector<double> a;
  std::vector<double> reflection;
  /// Final prediction-error power (model gain).
  double error = 0.0;
  bool degenerate = false;
};

/// Levinson-Durbin recursion on autocorrelation r[0..order].
LpcSolution LevinsonDurbin(std::span<const double> r, std::size_t order);

/// Cepstrum c[1..n_ceps] of the all-pole model 1/A(z).
std::vector<double> LpcToCepstrum(std::span<const double> a,
                                  std::size_t n_ceps);

double HzToBark(double hz);
std::array<double, kPlpDim> PlpFromSpectrum(std::span<const double> magnitude);

// ---- periodicity --------------------------------------------------------

struct PitchEstimate {
  double f0_hz = 0.0;         // 0 when unvoiced
  double voicing = 0.0;       // peak normalized autocorrelation in [0, 1]
  double period_samples = 0;  // fractional period, 0 when unvoiced
};

/// Normalized autocorrelation pitch estimate on one untapered frame.
PitchEstimate EstimatePitch(std::span<const double> raw_frame);

double HnrFromCorrelation(double r);

// ---- per-stream operations -----------------------------------------------

FrameMatrix Mfcc(const FrameStream& frames);
FrameMatrix Plp(const FrameStream& frames);
/// Columns: log_energy, f0_hz, voicing_prob, zcr, spectral_centroid,
/// spectral_flux, spectral_rolloff95, loudness.
FrameMatrix Prosody(const FrameStream& frames);
/// Columns: jitter_local, jitter_rap, shimmer_local, shimmer_apq3, hnr_db,
/// spectral_tilt, cpp. Unvoiced frames are all zero.
FrameMatrix VoiceQuality(const FrameStream& frames,
                         std::span<const double> f0_track);

/// 41-column static supervector per frame.
FrameMatrix Supervector(const FrameStream& frames);

/// Appends regression deltas (window +-2, replicated edges) and
/// delta-deltas: width triples.
FrameMatrix StackDeltas(const FrameMatrix& statics);

/// Supervector followed by StackDeltas: 123 named columns.
FrameMatrix ExtractFrameFeatures(const FrameStream& frames);

const std::vector<std::string>& SupervectorNames();
const std::vector<std::string>& FrameFeatureNames();

}  // namespace wellvoice
