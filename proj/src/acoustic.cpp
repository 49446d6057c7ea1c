#include "wellvoice/acoustic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spectral.hpp"
#include "wellvoice/error.hpp"

namespace wellvoice {
namespace {

constexpr double kNyquistHz = kCanonicalRateHz / 2.0;
constexpr double kBinHz = static_cast<double>(kCanonicalRateHz) / kFftSize;

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Mel points: kMelFilters + 2 edges equally spaced on the mel scale.
const std::vector<double>& MelPointsHz() {
  static const std::vector<double> points = [] {
    std::vector<double> p(kMelFilters + 2);
    const double top = HzToMel(kNyquistHz);
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = MelToHz(top * static_cast<double>(i) / (kMelFilters + 1));
    }
    return p;
  }();
  return points;
}

struct BarkBank {
  std::vector<std::array<double, kSpectrumBins>> weights;
  std::array<double, kBarkBands> equal_loudness{};
};

// Critical-band masking curve sampled on the power spectrum, with the
// equal-loudness curve evaluated at each band center.
const BarkBank& BarkFilterbank() {
  static const BarkBank bank = [] {
    BarkBank b;
    b.weights.resize(kBarkBands);
    const double step = HzToBark(kNyquistHz) / (kBarkBands + 1);
    for (std::size_t j = 0; j < kBarkBands; ++j) {
      const double center = step * static_cast<double>(j + 1);
      auto& w = b.weights[j];
      for (std::size_t k = 0; k < kSpectrumBins; ++k) {
        const double dz = HzToBark(k * kBinHz) - center;
        double v = 0.0;
        if (dz >= -1.3 && dz < -0.5) {
          v = std::pow(10.0, 2.5 * (dz + 0.5));
        } else if (dz >= -0.5 && dz <= 0.5) {
          v = 1.0;
        } else if (dz > 0.5 && dz <= 2.5) {
          v = std::pow(10.0, -(dz - 0.5));
        }
        w[k] = v;
      }
      const double hz = 600.0 * std::sinh(center / 6.0);
      const double w2 = std::pow(2.0 * std::numbers::pi * hz, 2);
      b.equal_loudness[j] = ((w2 + 56.8e6) * w2 * w2) /
                            (std::pow(w2 + 6.3e6, 2) * (w2 + 0.38e9));
    }
    return b;
  }();
  return bank;
}

double SafeLog(double x) { return std::log(std::max(x, kLogFloor)); }

double Energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

// Least-squares slope of y against x.
double Slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Vertex offset of the parabola through (-1, a), (0, b), (1, c).
double ParabolicOffset(double a, double b, double c) {
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
}

struct CycleStats {
  double jitter_local = 0.0;
  double jitter_rap = 0.0;
  double shimmer_local = 0.0;
  double shimmer_apq3 = 0.0;
};

CycleStats MeasureCycles(std::vector<double> segment, double period) {
  CycleStats stats;
  const auto len = static_cast<std::ptrdiff_t>(segment.size());
  if (period < 2.0 || len < 3) return stats;
  const double mean =
      std::accumulate(segment.begin(), segment.end(), 0.0) / segment.size();
  for (auto& v : segment) v -= mean;

  std::vector<double> positions, amplitudes;
  auto pick = [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    lo = std::max<std::ptrdiff_t>(lo, 0);
    hi = std::min<std::ptrdiff_t>(hi, len - 1);
    std::ptrdiff_t best = lo;
    for (std::ptrdiff_t i = lo; i <= hi; ++i) {
      if (segment[i] > segment[best]) best = i;
    }
    double pos = static_cast<double>(best);
    double amp = segment[best];
    if (best > 0 && best < len - 1) {
      const double a = segment[best - 1], b = segment[best],
                   c = segment[best + 1];
      const double d = ParabolicOffset(a, b, c);
      pos += d;
      amp = b - 0.25 * (a - c) * d;
    }
    positions.push_back(pos);
    amplitudes.push_back(amp);
  };

  pick(0, static_cast<std::ptrdiff_t>(std::ceil(period)) - 1);
  while (true) {
    const double prev = positions.back();
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil(prev + 0.75 * period));
    const auto hi =
        static_cast<std::ptrdiff_t>(std::floor(prev + 1.25 * period));
    if (hi >= len - 1) break;
    pick(lo, hi);
  }

  std::vector<double> periods;
  for (std::size_t i = 1; i < positions.size(); ++i) {
    periods.push_back(positions[i] - positions[i - 1]);
  }
  const auto mean_of = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  if (periods.size() >= 2) {
    const double mean_t = mean_of(periods);
    double acc = 0.0;
    for (std::size_t i = 1; i < periods.size(); ++i) {
      acc += std::abs(periods[i] - periods[i - 1]);
    }
    stats.jitter_local = acc / (periods.size() - 1) / mean_t;
    if (periods.size() >= 3) {
      double rap = 0.0;
      for (std::size_t i = 1; i + 1 < periods.size(); ++i) {
        rap += std::abs(periods[i] -
                        (periods[i - 1] + periods[i] + periods[i + 1]) / 3.0);
      }
      stats.jitter_rap = rap / (periods.size() - 2) / mean_t;
    }
  }
  const double mean_a = amplitudes.empty() ? 0.0 : mean_of(amplitudes);
  if (amplitudes.size() >= 2 && mean_a > 0.0) {
    double acc = 0.0;
    for (std::size_t i = 1; i < amplitudes.size(); ++i) {
      acc += std::abs(amplitudes[i] - amplitudes[i - 1]);
    }
    stats.shimmer_local = acc / (amplitudes.size() - 1) / mean_a;
    if (amplitudes.size() >= 3) {
      double apq = 0.0;
      for (std::size_t i = 1; i + 1 < amplitudes.size(); ++i) {
        apq += std::abs(amplitudes[i] - (amplitudes[i - 1] + amplitudes[i] +
                                         amplitudes[i + 1]) /
                                            3.0);
      }
      stats.shimmer_apq3 = apq / (amplitudes.size() - 2) / mean_a;
    }
  }
  return stats;
}

double SpectralTiltDbPerKhz(std::span<const double> magnitude) {
  std::vector<double> khz(kSpectrumBins - 1), db(kSpectrumBins - 1);
  for (std::size_t k = 1; k < kSpectrumBins; ++k) {
    khz[k - 1] = k * kBinHz / 1000.0;
    db[k - 1] = 20.0 * std::log10(std::max(magnitude[k], kLogFloor));
  }
  return Slope(khz, db);
}

// Cepstral peak prominence over quefrencies of the 60-400 Hz pitch range.
double CepstralPeakProminence(std::span<const double> magnitude) {
  std::vector<double> log_spec(kSpectrumBins);
  for (std::size_t k = 0; k < kSpectrumBins; ++k) {
    log_spec[k] = 20.0 * std::log10(std::max(magnitude[k], kLogFloor));
  }
  const auto cep = detail::InverseRealDft(log_spec, kFftSize);
  const auto q_lo =
      static_cast<std::size_t>(std::floor(kCanonicalRateHz / kMaxF0Hz));
  const auto q_hi = std::min<std::size_t>(
      kFftSize / 2 - 1,
      static_cast<std::size_t>(std::ceil(kCanonicalRateHz / kMinF0Hz)));
  std::vector<double> q, c;
  std::size_t peak = q_lo;
  for (std::size_t i = q_lo; i <= q_hi; ++i) {
    q.push_back(static_cast<double>(i));
    c.push_back(cep[i]);
    if (cep[i] > cep[peak]) peak = i;
  }
  const double slope = Slope(q, c);
  const double mq = std::accumulate(q.begin(), q.end(), 0.0) / q.size();
  const double mc = std::accumulate(c.begin(), c.end(), 0.0) / c.size();
  const double baseline = mc + slope * (static_cast<double>(peak) - mq);
  return cep[peak] - baseline;
}

struct FrameContext {
  std::vector<double> magnitude;
  PitchEstimate pitch;
};

std::array<double, kProsodyDim> ProsodyFrame(
    std::span<const double> tapered, std::span<const double> raw,
    const FrameContext& ctx, const std::vector<double>* prev_magnitude) {
  std::array<double, kProsodyDim> out{};
  const double energy = Energy(tapered);
  out[0] = SafeLog(energy);
  out[1] = ctx.pitch.f0_hz;
  out[2] = ctx.pitch.voicing;

  std::size_t crossings = 0;
  for (std::size_t n = 1; n < raw.size(); ++n) {
    if ((raw[n - 1] < 0.0 && raw[n] >= 0.0) ||
        (raw[n - 1] >= 0.0 && raw[n] < 0.0)) {
      // Exact zeros on both sides are not a crossing.
      if (!(raw[n - 1] == 0.0 && raw[n] == 0.0)) ++crossings;
    }
  }
  out[3] = static_cast<double>(crossings) / (raw.size() - 1);

  const auto& mag = ctx.magnitude;
  double mag_sum = 0.0, weighted = 0.0, power_sum = 0.0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    mag_sum += mag[k];
    weighted += k * kBinHz * mag[k];
    power_sum += mag[k] * mag[k];
  }
  out[4] = mag_sum > kLogFloor ? weighted / mag_sum : 0.0;

  if (prev_magnitude != nullptr) {
    const double norm_cur = std::sqrt(power_sum);
    const double norm_prev = std::sqrt(Energy(*prev_magnitude));
    double flux = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
      const double a = norm_cur > kLogFloor ? mag[k] / norm_cur : 0.0;
      const double b =
          norm_prev > kLogFloor ? (*prev_magnitude)[k] / norm_prev : 0.0;
      flux += (a - b) * (a - b);
    }
    out[5] = std::sqrt(flux);
  }

  if (power_sum > kLogFloor) {
    double cum = 0.0;
    std::size_t k = 0;
    for (; k < mag.size(); ++k) {
      cum += mag[k] * mag[k];
      if (cum >= 0.95 * power_sum) break;
    }
    out[6] = std::min(k, mag.size() - 1) * kBinHz;
  }
  out[7] = std::pow(energy, 0.3);
  return out;
}

std::array<double, kVoiceQualityDim> VoiceQualityFrame(
    const FrameStream& frames, std::size_t t, double f0_hz, double r,
    std::span<const double> magnitude) {
  std::array<double, kVoiceQualityDim> out{};
  if (!(f0_hz > 0.0)) return out;
  const std::size_t first = t >= 2 ? t - 2 : 0;
  const auto stats = MeasureCycles(frames.raw_span(first, t + 2),
                                   kCanonicalRateHz / f0_hz);
  out[0] = stats.jitter_local;
  out[1] = stats.jitter_rap;
  out[2] = stats.shimmer_local;
  out[3] = stats.shimmer_apq3;
  out[4] = HnrFromCorrelation(r);
  out[5] = SpectralTiltDbPerKhz(magnitude);
  out[6] = CepstralPeakProminence(magnitude);
  return out;
}

const std::vector<std::string>& MfccNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (std::size_t i = 0; i < kMfccDim; ++i) {
      n.push_back("mfcc_c" + std::to_string(i));
    }
    return n;
  }();
  return names;
}

const std::vector<std::string>& PlpNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n{"plp_gain"};
    for (std::size_t i = 1; i <= kLpcOrder; ++i) {
      n.push_back("plp_c" + std::to_string(i));
    }
    return n;
  }();
  return names;
}

const std::vector<std::string>& ProsodyNames() {
  static const std::vector<std::string> names{
      "log_energy",        "f0_hz",         "voicing_prob",
      "zcr",               "spectral_centroid", "spectral_flux",
      "spectral_rolloff95", "loudness"};
  return names;
}

const std::vector<std::string>& VoiceQualityNames() {
  static const std::vector<std::string> names{
      "jitter_local", "jitter_rap", "shimmer_local", "shimmer_apq3",
      "hnr_db",       "spectral_tilt", "cpp"};
  return names;
}

template <std::size_t N>
void PutRow(FrameMatrix& m, std::size_t r, std::size_t offset,
            const std::array<double, N>& v) {
  for (std::size_t i = 0; i < N; ++i) m.at(r, offset + i) = v[i];
}

}  // namespace

FrameMatrix::FrameMatrix(std::size_t rows, std::vector<std::string> names)
    : rows_(rows), names_(std::move(names)), data_(rows * names_.size(), 0.0) {}

std::vector<double> FrameMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

FrameMatrix FrameMatrix::HStack(std::span<const FrameMatrix* const> parts) {
  if (parts.empty()) return {};
  const std::size_t rows = parts.front()->rows();
  std::vector<std::string> names;
  for (const auto* p : parts) {
    if (p->rows() != rows) {
      throw Error(ErrorCode::kDimensionMismatch, "row counts differ");
    }
    names.insert(names.end(), p->names().begin(), p->names().end());
  }
  FrameMatrix out(rows, std::move(names));
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t offset = 0;
    for (const auto* p : parts) {
      auto src = p->row(r);
      std::copy(src.begin(), src.end(), out.row(r).begin() + offset);
      offset += p->cols();
    }
  }
  return out;
}

std::vector<double> FrameSpectrum(std::span<const double> frame) {
  return detail::MagnitudeSpectrum(frame, kFftSize);
}

const std::vector<std::array<double, kSpectrumBins>>& MelFilterbank() {
  static const std::vector<std::array<double, kSpectrumBins>> bank = [] {
    const auto& p = MelPointsHz();
    std::vector<std::array<double, kSpectrumBins>> b(kMelFilters);
    for (std::size_t m = 0; m < kMelFilters; ++m) {
      const double lo = p[m], mid = p[m + 1], hi = p[m + 2];
      for (std::size_t k = 0; k < kSpectrumBins; ++k) {
        const double f = k * kBinHz;
        double w = 0.0;
        if (f > lo && f <= mid) {
          w = (f - lo) / (mid - lo);
        } else if (f > mid && f < hi) {
          w = (hi - f) / (hi - mid);
        }
        b[m][k] = w;
      }
    }
    return b;
  }();
  return bank;
}

double MelFilterCenterHz(std::size_t filter) {
  return MelPointsHz().at(filter + 1);
}

std::array<double, kMelFilters> MelEnergies(
    std::span<const double> magnitude) {
  const auto& bank = MelFilterbank();
  std::array<double, kMelFilters> e{};
  for (std::size_t m = 0; m < kMelFilters; ++m) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kSpectrumBins; ++k) {
      acc += bank[m][k] * magnitude[k];
    }
    e[m] = acc;
  }
  return e;
}

std::array<double, kMfccDim> MfccFromSpectrum(
    std::span<const double> magnitude) {
  const auto energies = MelEnergies(magnitude);
  std::array<double, kMelFilters> logs{};
  for (std::size_t m = 0; m < kMelFilters; ++m) logs[m] = SafeLog(energies[m]);
  // Orthonormal DCT-II.
  static const auto basis = [] {
    std::array<std::array<double, kMelFilters>, kMfccDim> b{};
    const double m_count = static_cast<double>(kMelFilters);
    for (std::size_t k = 0; k < kMfccDim; ++k) {
      const double norm = std::sqrt((k == 0 ? 1.0 : 2.0) / m_count);
      for (std::size_t m = 0; m < kMelFilters; ++m) {
        b[k][m] = norm * std::cos(std::numbers::pi * k * (m + 0.5) / m_count);
      }
    }
    return b;
  }();
  std::array<double, kMfccDim> c{};
  for (std::size_t k = 0; k < kMfccDim; ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m < kMelFilters; ++m) acc += logs[m] * basis[k][m];
    c[k] = acc;
  }
  return c;
}

LpcSolution LevinsonDurbin(std::span<const double> r, std::size_t order) {
  if (r.size() < order + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "autocorrelation shorter than order + 1");
  }
  LpcSolution sol;
  sol.a.assign(order + 1, 0.0);
  sol.a[0] = 1.0;
  sol.reflection.assign(order, 0.0);
  if (!(r[0] > 0.0)) {
    sol.degenerate = true;
    return sol;
  }
  double err = r[0];
  std::vector<double> prev(order + 1, 0.0);
  for (std::size_t i = 1; i <= order; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc += sol.a[j] * r[i - j];
    const double k = -acc / err;
    sol.reflection[i - 1] = k;
    prev = sol.a;
    for (std::size_t j = 1; j < i; ++j) sol.a[j] = prev[j] + k * prev[i - j];
    sol.a[i] = k;
    err *= (1.0 - k * k);
    if (!(err > 0.0)) {
      // Singular (perfectly predictable) input: stop at this order.
      err = 0.0;
      sol.degenerate = true;
      break;
    }
  }
  sol.error = err;
  return sol;
}

std::vector<double> LpcToCepstrum(std::span<const double> a,
                                  std::size_t n_ceps) {
  const std::size_t p = a.size() - 1;
  std::vector<double> c(n_ceps + 1, 0.0);
  for (std::size_t n = 1; n <= n_ceps; ++n) {
    double acc = n <= p ? -a[n] : 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      if (n - k <= p) {
        acc -= (static_cast<double>(k) / n) * c[k] * a[n - k];
      }
    }
    c[n] = acc;
  }
  return {c.begin() + 1, c.end()};
}

double HzToBark(double hz) { return 6.0 * std::asinh(hz / 600.0); }

std::array<double, kPlpDim> PlpFromSpectrum(
    std::span<const double> magnitude) {
  std::array<double, kPlpDim> out{};
  const auto& bank = BarkFilterbank();
  // Spectrum samples at DC, each band, and Nyquist (edges replicated).
  std::vector<double> aud(kBarkBands + 2, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < kBarkBands; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kSpectrumBins; ++k) {
      acc += bank.weights[j][k] * magnitude[k] * magnitude[k];
    }
    aud[j + 1] = std::cbrt(acc * bank.equal_loudness[j]);
    total += aud[j + 1];
  }
  if (!(total > 0.0)) return out;
  aud.front() = aud[1];
  aud.back() = aud[kBarkBands];

  // Autocorrelation as the inverse DFT of the even-symmetric power spectrum.
  const std::size_t n_pts = aud.size();  // M + 2
  const double denom = static_cast<double>(n_pts - 1);
  std::vector<double> r(kLpcOrder + 1);
  for (std::size_t lag = 0; lag <= kLpcOrder; ++lag) {
    double acc = aud.front() + ((lag % 2 == 0) ? 1.0 : -1.0) * aud.back();
    for (std::size_t j = 1; j + 1 < n_pts; ++j) {
      acc += 2.0 * aud[j] * std::cos(std::numbers::pi * lag * j / denom);
    }
    r[lag] = acc / (2.0 * denom);
  }
  const auto lpc = LevinsonDurbin(r, kLpcOrder);
  if (lpc.error <= 0.0) return out;
  const auto ceps = LpcToCepstrum(lpc.a, kLpcOrder);
  out[0] = std::log(lpc.error);
  std::copy(ceps.begin(), ceps.end(), out.begin() + 1);
  return out;
}

PitchEstimate EstimatePitch(std::span<const double> raw_frame) {
  PitchEstimate est;
  const std::size_t n = raw_frame.size();
  const auto min_lag =
      static_cast<std::size_t>(std::floor(kCanonicalRateHz / kMaxF0Hz));
  const auto max_lag =
      static_cast<std::size_t>(std::ceil(kCanonicalRateHz / kMinF0Hz));
  if (n <= max_lag + 2) return est;

  std::vector<double> x(raw_frame.begin(), raw_frame.end());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  for (auto& v : x) v -= mean;
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];
  if (prefix[n] < 1e-12) return est;

  const std::size_t lo = min_lag - 1, hi = max_lag + 1;
  const auto acf = detail::Autocorrelation(x, hi);
  std::vector<double> r(hi + 1, 0.0);
  for (std::size_t lag = lo; lag <= hi; ++lag) {
    const double e_head = prefix[n - lag];
    const double e_tail = prefix[n] - prefix[lag];
    const double denom = std::sqrt(e_head * e_tail);
    r[lag] = denom > 0.0 ? acf[lag] / denom : 0.0;
  }

  double r_max = 0.0;
  std::vector<std::size_t> peaks;
  for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
    if (r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1] && r[lag] > 0.0) {
      peaks.push_back(lag);
      r_max = std::max(r_max, r[lag]);
    }
  }
  if (peaks.empty() || r_max < kVoicingThreshold) {
    est.voicing = std::clamp(r_max, 0.0, 1.0);
    return est;
  }
  // Shortest lag that is nearly as periodic as the best one: guards against
  // picking a multiple of the true period.
  std::size_t chosen = peaks.front();
  for (std::size_t lag : peaks) {
    if (r[lag] >= 0.9 * r_max) {
      chosen = lag;
      break;
    }
  }
  const double d = ParabolicOffset(r[chosen - 1], r[chosen], r[chosen + 1]);
  const double peak_r =
      r[chosen] - 0.25 * (r[chosen - 1] - r[chosen + 1]) * d;
  const double period = static_cast<double>(chosen) + d;
  est.period_samples = period;
  est.f0_hz = std::clamp(kCanonicalRateHz / period, kMinF0Hz, kMaxF0Hz);
  est.voicing = std::clamp(peak_r, 0.0, 1.0);
  return est;
}

double HnrFromCorrelation(double r) {
  if (!(r > 0.0)) return kHnrMinDb;
  if (r >= 1.0) return kHnrMaxDb;
  return std::clamp(10.0 * std::log10(r / (1.0 - r)), kHnrMinDb, kHnrMaxDb);
}

FrameMatrix Mfcc(const FrameStream& frames) {
  FrameMatrix out(frames.size(), MfccNames());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    PutRow(out, t, 0, MfccFromSpectrum(FrameSpectrum(frames.frame(t))));
  }
  return out;
}

FrameMatrix Plp(const FrameStream& frames) {
  FrameMatrix out(frames.size(), PlpNames());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    PutRow(out, t, 0, PlpFromSpectrum(FrameSpectrum(frames.frame(t))));
  }
  return out;
}

FrameMatrix Prosody(const FrameStream& frames) {
  FrameMatrix out(frames.size(), ProsodyNames());
  std::vector<double> prev;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    FrameContext ctx{FrameSpectrum(frames.frame(t)),
                     EstimatePitch(frames.raw(t))};
    PutRow(out, t, 0,
           ProsodyFrame(frames.frame(t), frames.raw(t), ctx,
                        t > 0 ? &prev : nullptr));
    prev = std::move(ctx.magnitude);
  }
  return out;
}

FrameMatrix VoiceQuality(const FrameStream& frames,
                         std::span<const double> f0_track) {
  if (f0_track.size() != frames.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "f0 track length differs from frame count");
  }
  FrameMatrix out(frames.size(), VoiceQualityNames());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    if (!(f0_track[t] > 0.0)) continue;
    const auto pitch = EstimatePitch(frames.raw(t));
    PutRow(out, t, 0,
           VoiceQualityFrame(frames, t, f0_track[t], pitch.voicing,
                             FrameSpectrum(frames.frame(t))));
  }
  return out;
}

FrameMatrix Supervector(const FrameStream& frames) {
  FrameMatrix out(frames.size(), SupervectorNames());
  std::vector<double> prev;
  constexpr std::size_t kPlpOffset = kMfccDim;
  constexpr std::size_t kProsodyOffset = kPlpOffset + kPlpDim;
  constexpr std::size_t kVqOffset = kProsodyOffset + kProsodyDim;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    FrameContext ctx{FrameSpectrum(frames.frame(t)),
                     EstimatePitch(frames.raw(t))};
    PutRow(out, t, 0, MfccFromSpectrum(ctx.magnitude));
    PutRow(out, t, kPlpOffset, PlpFromSpectrum(ctx.magnitude));
    PutRow(out, t, kProsodyOffset,
           ProsodyFrame(frames.frame(t), frames.raw(t), ctx,
                        t > 0 ? &prev : nullptr));
    PutRow(out, t, kVqOffset,
           VoiceQualityFrame(frames, t, ctx.pitch.f0_hz, ctx.pitch.voicing,
                             ctx.magnitude));
    prev = std::move(ctx.magnitude);
  }
  return out;
}

FrameMatrix StackDeltas(const FrameMatrix& statics) {
  if (statics.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one frame");
  }
  auto delta = [](const FrameMatrix& m, const std::string& suffix) {
    std::vector<std::string> names;
    for (const auto& n : m.names()) names.push_back(n + suffix);
    FrameMatrix d(m.rows(), std::move(names));
    const auto last = static_cast<std::ptrdiff_t>(m.rows()) - 1;
    double norm = 0.0;
    for (int k = 1; k <= kDeltaWindow; ++k) norm += 2.0 * k * k;
    for (std::ptrdiff_t t = 0; t <= last; ++t) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        double acc = 0.0;
        for (int k = 1; k <= kDeltaWindow; ++k) {
          const auto ahead = std::min<std::ptrdiff_t>(t + k, last);
          const auto behind = std::max<std::ptrdiff_t>(t - k, 0);
          acc += k * (m.at(ahead, c) - m.at(behind, c));
        }
        d.at(t, c) = acc / norm;
      }
    }
    return d;
  };
  // Delta-delta names build on the static names so they read "<x>_dd".
  const FrameMatrix d1 = delta(statics, "_d");
  FrameMatrix d2 = delta(d1, "");
  std::vector<std::string> dd_names;
  for (const auto& n : statics.names()) dd_names.push_back(n + "_dd");
  FrameMatrix dd(statics.rows(), std::move(dd_names));
  for (std::size_t t = 0; t < statics.rows(); ++t) {
    auto src = d2.row(t);
    std::copy(src.begin(), src.end(), dd.row(t).begin());
  }
  const FrameMatrix* parts[] = {&statics, &d1, &dd};
  return FrameMatrix::HStack(parts);
}

FrameMatrix ExtractFrameFeatures(const FrameStream& frames) {
  return StackDeltas(Supervector(frames));
}

const std::vector<std::string>& SupervectorNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto* group :
         {&MfccNames(), &PlpNames(), &ProsodyNames(), &VoiceQualityNames()}) {
      n.insert(n.end(), group->begin(), group->end());
    }
    return n;
  }();
  return names;
}

const std::vector<std::string>& FrameFeatureNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = SupervectorNames();
    for (const char* suffix : {"_d", "_dd"}) {
      for (const auto& s : SupervectorNames()) n.push_back(s + suffix);
    }
    return n;
  }();
  return names;
}

}  // namespace wellvoice
