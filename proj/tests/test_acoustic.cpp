#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "wellvoice/acoustic.hpp"

using namespace wellvoice;
using namespace wellvoice::testing;

namespace {

std::vector<double> Column(const FrameMatrix& m, const std::string& name) {
  const auto& names = m.names();
  const auto it = std::find(names.begin(), names.end(), name);
  REQUIRE(it != names.end());
  return m.column(static_cast<std::size_t>(it - names.begin()));
}

// Sample autocorrelation r[0..p] of a sequence.
std::vector<double> SampleAutocorr(const std::vector<double>& x, std::size_t p) {
  std::vector<double> r(p + 1, 0.0);
  for (std::size_t k = 0; k <= p; ++k) {
    for (std::size_t i = k; i < x.size(); ++i) r[k] += x[i] * x[i - k];
  }
  return r;
}

}  // namespace

TEST_CASE("mfcc of digital silence is the DCT of the log floor") {
  const FrameStream fs = Frame(Wave(std::vector<double>(4000, 0.0)));
  const FrameMatrix m = Mfcc(fs);
  REQUIRE(m.cols() == 13);
  // DCT-II (orthonormal) of a constant vector: only c0 survives.
  const double c0 = std::sqrt(26.0) * std::log(kLogFloor);
  for (std::size_t t = 0; t < m.rows(); ++t) {
    CHECK(m.at(t, 0) == doctest::Approx(c0).epsilon(1e-12));
    for (std::size_t k = 1; k < 13; ++k) CHECK(std::abs(m.at(t, k)) < 1e-9);
  }
}

TEST_CASE("1 kHz tone peaks in the mel filter centred nearest 1 kHz") {
  // Oracle filter centers straight from the mel formula.
  auto mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto inv = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  std::size_t nearest = 0;
  double best = 1e9;
  for (std::size_t j = 0; j < kMelFilters; ++j) {
    const double center = inv(mel(8000.0) * (j + 1) / (kMelFilters + 1));
    CHECK(MelFilterCenterHz(j) == doctest::Approx(center));
    if (std::abs(center - 1000.0) < best) {
      best = std::abs(center - 1000.0);
      nearest = j;
    }
  }
  const FrameStream fs = Frame(Wave(Sine(1000.0, 0.2, 0.5)));
  for (std::size_t t = 0; t < fs.size(); ++t) {
    const auto e = MelEnergies(FrameSpectrum(fs.frame(t)));
    const auto peak = static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin());
    CHECK(peak == nearest);
  }
}

TEST_CASE("mfcc c1-c12 are invariant to gain; c0 shifts by a constant") {
  const auto x = Sawtooth(180.0, 0.3, 0.2);
  std::vector<double> x2(x);
  for (auto& v : x2) v *= 2.0;
  const FrameMatrix a = Mfcc(Frame(Wave(x)));
  const FrameMatrix b = Mfcc(Frame(Wave(x2)));
  const double shift = b.at(0, 0) - a.at(0, 0);
  CHECK(shift == doctest::Approx(std::sqrt(26.0) * std::log(2.0)).epsilon(1e-6));
  for (std::size_t t = 0; t < a.rows(); ++t) {
    CHECK(b.at(t, 0) - a.at(t, 0) == doctest::Approx(shift).epsilon(1e-9));
    for (std::size_t k = 1; k < 13; ++k) CHECK(std::abs(b.at(t, k) - a.at(t, k)) <= 1e-6);
  }
}

TEST_CASE("plp: zero-energy frame gives all zeros") {
  const FrameMatrix m = Plp(Frame(Wave(std::vector<double>(800, 0.0))));
  REQUIRE(m.cols() == 13);
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t k = 0; k < 13; ++k) CHECK(m.at(t, k) == 0.0);
  }
}

TEST_CASE("plp cepstra are gain invariant up to the gain term") {
  const auto x = Sawtooth(140.0, 0.3, 0.2);
  std::vector<double> x3(x);
  for (auto& v : x3) v *= 3.0;
  const FrameMatrix a = Plp(Frame(Wave(x)));
  const FrameMatrix b = Plp(Frame(Wave(x3)));
  for (std::size_t t = 0; t < a.rows(); ++t) {
    for (std::size_t k = 1; k < 13; ++k) CHECK(std::abs(b.at(t, k) - a.at(t, k)) <= 1e-6);
  }
}

TEST_CASE("levinson-durbin: order-1 hand solution") {
  const std::vector<double> r{1.0, 0.5};
  const LpcSolution s = LevinsonDurbin(r, 1);
  REQUIRE(s.a.size() == 2);
  CHECK(s.a[0] == 1.0);
  CHECK(s.a[1] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(s.error == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_FALSE(s.degenerate);
}

TEST_CASE("levinson-durbin satisfies the normal equations") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 1 + UniformIndex(rng, 16);
    // Autocorrelation of a random coloured sequence is positive definite.
    std::vector<double> x(64 + UniformIndex(rng, 400));
    double prev = 0.0;
    const double color = Uniform(rng, -0.95, 0.95);
    for (auto& v : x) {
      v = color * prev + StandardNormal(rng);
      prev = v;
    }
    auto r = SampleAutocorr(x, p);
    const double r0 = r[0];
    for (auto& v : r) v /= r0;
    const LpcSolution s = LevinsonDurbin(r, p);
    Eigen::MatrixXd R(p, p);
    Eigen::VectorXd a(p), rhs(p);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) R(i, j) = r[i > j ? i - j : j - i];
      a(i) = s.a[i + 1];
      rhs(i) = -r[i + 1];
    }
    CHECK((R * a - rhs).norm() <= 1e-8);
    // Prediction error equals r0 + sum a_k r_k.
    double err = r[0];
    for (std::size_t k = 1; k <= p; ++k) err += s.a[k] * r[k];
    CHECK(s.error == doctest::Approx(err).epsilon(1e-9));
  }
}

TEST_CASE("levinson-durbin on white noise gives small coefficients") {
  const auto noise = WhiteNoise(400 * 100, 1.0, 99);
  std::vector<double> mean_abs(kLpcOrder + 1, 0.0);
  for (int f = 0; f < 100; ++f) {
    std::vector<double> frame(noise.begin() + f * 400, noise.begin() + (f + 1) * 400);
    const auto s = LevinsonDurbin(SampleAutocorr(frame, kLpcOrder), kLpcOrder);
    for (std::size_t k = 1; k <= kLpcOrder; ++k) mean_abs[k] += std::abs(s.a[k]) / 100.0;
  }
  // |a_k| ~ 1/sqrt(400) = 0.05 for a flat spectrum.
  for (std::size_t k = 1; k <= kLpcOrder; ++k) CHECK(mean_abs[k] < 0.1);
}

TEST_CASE("lpc to cepstrum matches the single-pole series") {
  for (double a1 : {-0.9, -0.3, 0.4, 0.8}) {
    const std::vector<double> a{1.0, a1};
    const auto c = LpcToCepstrum(a, 8);
    REQUIRE(c.size() == 8);
    for (std::size_t n = 1; n <= 8; ++n) {
      CHECK(c[n - 1] == doctest::Approx(std::pow(-a1, n) / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("bark scale") {
  CHECK(HzToBark(0.0) == 0.0);
  CHECK(HzToBark(600.0) == doctest::Approx(6.0 * std::asinh(1.0)));
}

TEST_CASE("pitch of periodic signals within 1%") {
  for (double f0 : {100.0, 150.0, 200.0, 250.0, 350.0}) {
    CAPTURE(f0);
    const FrameStream fs = Frame(Wave(Sawtooth(f0, 0.5)));
    const auto f0s = Column(Prosody(fs), "f0_hz");
    std::size_t voiced = 0, accurate = 0;
    for (double v : f0s) {
      if (v <= 0.0) continue;
      ++voiced;
      if (std::abs(v - f0) <= 0.01 * f0) ++accurate;
    }
    CHECK(voiced == f0s.size());
    CHECK(accurate == voiced);
  }
}

TEST_CASE("200 Hz sawtooth: f0 200 +- 2 on >= 95% of voiced frames") {
  const auto f0s = Column(Prosody(Frame(Wave(Sawtooth(200.0, 1.0)))), "f0_hz");
  std::size_t voiced = 0, close = 0;
  for (double v : f0s) {
    if (v > 0.0) {
      ++voiced;
      if (std::abs(v - 200.0) <= 2.0) ++close;
    }
  }
  REQUIRE(voiced > 0);
  CHECK(static_cast<double>(close) >= 0.95 * voiced);
}

TEST_CASE("white noise is mostly unvoiced") {
  const FrameMatrix p = Prosody(Frame(Wave(WhiteNoise(16000, 0.3, 5))));
  const auto f0 = Column(p, "f0_hz");
  const auto vp = Column(p, "voicing_prob");
  std::size_t below = 0;
  for (std::size_t t = 0; t < f0.size(); ++t) {
    if (vp[t] < kVoicingThreshold) {
      ++below;
      CHECK(f0[t] == 0.0);
    }
  }
  CHECK(static_cast<double>(below) >= 0.9 * f0.size());
}

TEST_CASE("silence: log energy at the floor, zero crossing rate 0") {
  const FrameMatrix p = Prosody(Frame(Wave(std::vector<double>(3200, 0.0))));
  for (std::size_t t = 0; t < p.rows(); ++t) {
    CHECK(p.at(t, kProsodyLogEnergy) == doctest::Approx(std::log(kLogFloor)));
    CHECK(Column(p, "zcr")[t] == 0.0);
    CHECK(Column(p, "f0_hz")[t] == 0.0);
  }
}

TEST_CASE("prosody descriptors of a pure tone") {
  const FrameMatrix p = Prosody(Frame(Wave(Sine(1000.0, 0.3, 0.5))));
  const auto frames = Frame(Wave(Sine(1000.0, 0.3, 0.5)));
  const auto centroid = Column(p, "spectral_centroid");
  const auto rolloff = Column(p, "spectral_rolloff95");
  const auto zcr = Column(p, "zcr");
  const auto loud = Column(p, "loudness");
  const auto energy = Column(p, "log_energy");
  for (std::size_t t = 2; t < p.rows(); ++t) {
    // Magnitude-weighted centroid of a direct 512-point DFT of the tapered
    // frame. The unfiltered first sample adds a flat floor that pulls it
    // above the tone frequency.
    const auto frame = frames.frame(t);
    double num = 0, den = 0;
    for (int k = 0; k <= 256; ++k) {
      std::complex<double> acc = 0;
      for (std::size_t n = 0; n < frame.size(); ++n) {
        acc += frame[n] * std::polar(1.0, -2 * std::numbers::pi * k * double(n) / 512);
      }
      num += k * 16000.0 / 512 * std::abs(acc);
      den += std::abs(acc);
    }
    CHECK(centroid[t] == doctest::Approx(num / den).epsilon(1e-9));
    CHECK(centroid[t] > 1000.0);
    CHECK(rolloff[t] == doctest::Approx(1000.0).epsilon(0.1));
    // Two crossings per period over 399 sample steps.
    CHECK(zcr[t] == doctest::Approx(2.0 * 1000.0 / 16000.0).epsilon(0.05));
    CHECK(loud[t] == doctest::Approx(std::pow(std::exp(energy[t]), 0.3)).epsilon(1e-9));
  }
}

TEST_CASE("voice quality of a pure 200 Hz sine") {
  const FrameStream fs = Frame(Wave(Sine(200.0, 0.5, 0.5)));
  const FrameMatrix sv = Supervector(fs);
  const auto jitter = Column(sv, "jitter_local");
  const auto hnr = Column(sv, "hnr_db");
  const auto f0 = Column(sv, "f0_hz");
  for (std::size_t t = 0; t < sv.rows(); ++t) {
    REQUIRE(f0[t] > 0.0);
    CHECK(jitter[t] <= 0.005);
    CHECK(hnr[t] == doctest::Approx(kHnrMaxDb));
  }
}

TEST_CASE("voice quality of unvoiced frames is all zero") {
  const FrameStream fs = Frame(Wave(WhiteNoise(8000, 0.2, 8)));
  const std::vector<double> unvoiced(fs.size(), 0.0);
  const FrameMatrix vq = VoiceQuality(fs, unvoiced);
  REQUIRE(vq.cols() == 7);
  for (std::size_t t = 0; t < vq.rows(); ++t) {
    for (std::size_t k = 0; k < 7; ++k) CHECK(vq.at(t, k) == 0.0);
  }
  CHECK_THROWS(VoiceQuality(fs, std::vector<double>(fs.size() + 1, 100.0)));
}

TEST_CASE("sine plus equal-power white noise gives HNR near 0 dB") {
  auto x = Sine(200.0, 1.0, 1.0);
  const auto noise = WhiteNoise(x.size(), std::sqrt(0.5), 17);  // sine power 0.5
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += noise[i];
  const FrameMatrix sv = Supervector(Frame(Wave(x)));
  const auto hnr = Column(sv, "hnr_db");
  const auto f0 = Column(sv, "f0_hz");
  double sum = 0.0;
  std::size_t voiced = 0;
  for (std::size_t t = 0; t < sv.rows(); ++t) {
    if (f0[t] > 0.0) {
      sum += hnr[t];
      ++voiced;
    }
  }
  REQUIRE(voiced > sv.rows() / 2);
  CHECK(std::abs(sum / voiced) <= 2.0);
}

TEST_CASE("hnr formula and clamps") {
  CHECK(HnrFromCorrelation(0.5) == doctest::Approx(0.0));
  CHECK(HnrFromCorrelation(0.9) == doctest::Approx(10.0 * std::log10(9.0)));
  CHECK(HnrFromCorrelation(1.0) == kHnrMaxDb);
  CHECK(HnrFromCorrelation(0.0) == kHnrMinDb);
  CHECK(HnrFromCorrelation(1e-9) == kHnrMinDb);
}

TEST_CASE("deltas") {
  SUBCASE("constant sequence") {
    FrameMatrix m(20, {"x"});
    for (std::size_t t = 0; t < 20; ++t) m.at(t, 0) = 4.2;
    const FrameMatrix d = StackDeltas(m);
    REQUIRE(d.cols() == 3);
    CHECK(d.names()[1] == "x_d");
    CHECK(d.names()[2] == "x_dd");
    for (std::size_t t = 0; t < 20; ++t) {
      CHECK(d.at(t, 1) == 0.0);
      CHECK(d.at(t, 2) == 0.0);
    }
  }
  SUBCASE("linear ramp") {
    FrameMatrix m(20, {"x"});
    for (std::size_t t = 0; t < 20; ++t) m.at(t, 0) = static_cast<double>(t);
    const FrameMatrix d = StackDeltas(m);
    for (std::size_t t = 2; t + 2 < 20; ++t) CHECK(d.at(t, 1) == doctest::Approx(1.0));
    // Replicated edges: frame 0 sees [0,0,0,1,2] -> (1*1 + 2*2) / 10.
    CHECK(d.at(0, 1) == doctest::Approx(0.5));
  }
  SUBCASE("single frame") {
    FrameMatrix m(1, {"x", "y"});
    m.at(0, 0) = 3.0;
    m.at(0, 1) = -1.0;
    const FrameMatrix d = StackDeltas(m);
    REQUIRE(d.cols() == 6);
    for (std::size_t c = 2; c < 6; ++c) CHECK(d.at(0, c) == 0.0);
  }
}

TEST_CASE("frame features: 123 unique names, finite on random input") {
  const auto& names = FrameFeatureNames();
  REQUIRE(names.size() == kFrameFeatureDim);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
  CHECK(SupervectorNames().size() == kSupervectorDim);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x(400 + UniformIndex(rng, 8000));
    const double scale = std::pow(10.0, Uniform(rng, -6.0, 0.0));
    for (auto& v : x) v = std::clamp(scale * StandardNormal(rng), -1.0, 1.0);
    if (trial == 3) std::fill(x.begin(), x.begin() + x.size() / 2, 0.0);
    const FrameStream fs = Frame(Wave(x));
    const FrameMatrix m = ExtractFrameFeatures(fs);
    REQUIRE(m.cols() == kFrameFeatureDim);
    CHECK(m.rows() == fs.size());
    for (std::size_t t = 0; t < m.rows(); ++t) {
      for (double v : m.row(t)) CHECK(std::isfinite(v));
    }
    const auto f0 = Column(m, "f0_hz");
    for (double v : f0) CHECK((v == 0.0 || (v >= kMinF0Hz && v <= kMaxF0Hz)));
    const auto hnr = Column(m, "hnr_db");
    for (double v : hnr) CHECK((v >= kHnrMinDb && v <= kHnrMaxDb));
  }
}

TEST_CASE("supervector composes the per-family extractors") {
  const FrameStream fs = Frame(Wave(Sawtooth(170.0, 0.3, 0.3)));
  const FrameMatrix sv = Supervector(fs);
  const FrameMatrix mf = Mfcc(fs);
  const FrameMatrix pl = Plp(fs);
  const FrameMatrix pr = Prosody(fs);
  REQUIRE(sv.cols() == kSupervectorDim);
  for (std::size_t t = 0; t < sv.rows(); ++t) {
    for (std::size_t k = 0; k < 13; ++k) {
      CHECK(sv.at(t, k) == doctest::Approx(mf.at(t, k)).epsilon(1e-12));
      CHECK(sv.at(t, 13 + k) == doctest::Approx(pl.at(t, k)).epsilon(1e-12));
    }
    for (std::size_t k = 0; k < 8; ++k) {
      CHECK(sv.at(t, 26 + k) == doctest::Approx(pr.at(t, k)).epsilon(1e-12));
    }
  }
}
