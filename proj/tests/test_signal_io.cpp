#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "wellvoice/error.hpp"
#include "wellvoice/signal_io.hpp"

using namespace wellvoice;
using namespace wellvoice::testing;

namespace {

// Independent RIFF writer for formats the library never emits.
std::vector<unsigned char> MakeWav(const std::vector<std::vector<double>>& channels,
                                   int rate, int bits, bool is_float) {
  const std::size_t n = channels[0].size();
  const auto n_ch = static_cast<std::uint16_t>(channels.size());
  const std::uint16_t bytes = static_cast<std::uint16_t>(bits / 8);
  std::vector<unsigned char> out;
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
  };
  auto u16 = [&](std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>(v >> 8));
  };
  auto tag = [&](const char* s) { out.insert(out.end(), s, s + 4); };
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(n * n_ch * bytes);
  tag("RIFF");
  u32(36 + data_bytes);
  tag("WAVE");
  tag("fmt ");
  u32(16);
  u16(is_float ? 3 : 1);
  u16(n_ch);
  u32(static_cast<std::uint32_t>(rate));
  u32(static_cast<std::uint32_t>(rate) * n_ch * bytes);
  u16(static_cast<std::uint16_t>(n_ch * bytes));
  u16(static_cast<std::uint16_t>(bits));
  tag("data");
  u32(data_bytes);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& ch : channels) {
      const double v = ch[i];
      if (is_float) {
        float f = static_cast<float>(v);
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        u32(u);
      } else if (bits == 8) {
        out.push_back(static_cast<unsigned char>(std::lround(v * 127.0) + 128));
      } else {
        const double scale = std::ldexp(1.0, bits - 1) - 1.0;
        const auto q = static_cast<std::int64_t>(std::lround(v * scale));
        for (int b = 0; b < bytes; ++b) {
          out.push_back(static_cast<unsigned char>((q >> (8 * b)) & 0xff));
        }
      }
    }
  }
  return out;
}

double DftMagnitudeAt(const std::vector<double>& x, double hz) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * std::polar(1.0, -2.0 * std::numbers::pi * hz * i / kCanonicalRateHz);
  }
  return std::abs(acc);
}

}  // namespace

TEST_CASE("decode: one second of 16 kHz silence") {
  const std::vector<double> zeros(16000, 0.0);
  const Waveform w = DecodeWav(EncodeWav16(zeros, 16000));
  CHECK(w.sample_rate_hz == 16000);
  REQUIRE(w.samples.size() == 16000);
  for (double v : w.samples) CHECK(v == 0.0);
  CHECK(w.duration_s() == doctest::Approx(1.0));
}

TEST_CASE("decode: 32 kHz input resamples to 16000 samples") {
  const auto x = Sine(300.0, 1.0, 0.4, 32000);
  const Waveform w = DecodeWav(EncodeWav16(x, 32000));
  CHECK(w.samples.size() == 16000);
}

TEST_CASE("decode: 440 Hz at 48 kHz keeps its dominant frequency") {
  const auto x = Sine(440.0, 1.0, 0.99, 48000);
  const Waveform w = DecodeWav(EncodeWav16(x, 48000));
  REQUIRE(w.samples.size() == 16000);
  // 1 Hz resolution over one second of output.
  double best_hz = 0.0, best = -1.0;
  for (int hz = 380; hz <= 500; ++hz) {
    const double m = DftMagnitudeAt(w.samples, hz);
    if (m > best) {
      best = m;
      best_hz = hz;
    }
  }
  CHECK(std::abs(best_hz - 440.0) <= 1.0);
}

TEST_CASE("decode: sample formats and channel averaging") {
  const auto left = Sine(200.0, 0.1, 0.5);
  std::vector<double> right(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) right[i] = -0.25 * left[i] + 0.1;

  SUBCASE("stereo 16-bit is averaged") {
    const Waveform w = DecodeWav(MakeWav({left, right}, 16000, 16, false));
    REQUIRE(w.samples.size() == left.size());
    for (std::size_t i = 0; i < left.size(); i += 37) {
      CHECK(w.samples[i] == doctest::Approx(0.5 * (left[i] + right[i])).epsilon(1e-3));
    }
  }
  for (int bits : {8, 24, 32}) {
    CAPTURE(bits);
    const Waveform w = DecodeWav(MakeWav({left}, 16000, bits, false));
    REQUIRE(w.samples.size() == left.size());
    const double tol = bits == 8 ? 1.5 / 127.0 : 1e-6;
    for (std::size_t i = 0; i < left.size(); i += 11) {
      CHECK(std::abs(w.samples[i] - left[i]) <= tol);
    }
  }
  SUBCASE("float32") {
    const Waveform w = DecodeWav(MakeWav({left}, 16000, 32, true));
    for (std::size_t i = 0; i < left.size(); i += 11) {
      CHECK(std::abs(w.samples[i] - left[i]) <= 1e-7);
    }
  }
}

TEST_CASE("decode: rejects bad input") {
  const auto x = Sine(200.0, 0.1);
  auto bytes = EncodeWav16(x, 16000);

  SUBCASE("compressed format tag") {
    bytes[20] = 0x55;  // MPEG layer 3
    CHECK_THROWS_AS(DecodeWav(bytes), Error);
    try {
      DecodeWav(bytes);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnsupportedFormat);
    }
  }
  SUBCASE("not RIFF") {
    bytes[0] = 'X';
    try {
      DecodeWav(bytes);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnsupportedFormat);
    }
  }
  SUBCASE("too short after resampling") {
    const std::vector<double> tiny(399, 0.1);
    try {
      DecodeWav(EncodeWav16(tiny, 16000));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyAudio);
    }
  }
  SUBCASE("unsupported rate") {
    try {
      DecodeWav(MakeWav({Sine(200.0, 0.1, 0.5, 96000)}, 96000, 16, false));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnsupportedFormat);
    }
  }
}

TEST_CASE("decode is deterministic") {
  const auto bytes = EncodeWav16(Sine(123.0, 0.5, 0.3, 22050), 22050);
  const Waveform a = DecodeWav(bytes);
  const Waveform b = DecodeWav(bytes);
  CHECK(a.samples == b.samples);
}

TEST_CASE("resampling 16 kHz to 16 kHz is the identity") {
  const auto x = WhiteNoise(5000, 0.3, 3);
  const auto y = Resample(x, 16000, 16000);
  REQUIRE(y.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) <= 1e-6);
}

TEST_CASE("resample length arithmetic") {
  const std::vector<double> x(44100, 0.0);
  CHECK(Resample(x, 44100, 16000).size() == 16000);
  CHECK(Resample(std::vector<double>(8000, 0.0), 8000, 16000).size() == 16000);
}

TEST_CASE("frame counts") {
  CHECK(FrameCount(16000) == 98);
  CHECK(FrameCount(400) == 1);
  CHECK(FrameCount(399) == 0);
  CHECK(Frame(Wave(std::vector<double>(16000, 0.0))).size() == 98);
  CHECK(Frame(Wave(std::vector<double>(400, 0.0))).size() == 1);
  CHECK_THROWS_AS(Frame(Wave(std::vector<double>(399, 0.0))), Error);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 400 + UniformIndex(rng, 200000);
    CHECK(FrameCount(n) == (n - 400) / 160 + 1);
  }
}

TEST_CASE("frame geometry and pre-emphasis of a constant signal") {
  const double c = 0.6;
  const FrameStream fs = Frame(Wave(std::vector<double>(2000, c)), 0.97);
  CHECK(fs.frame_length() == 400);
  CHECK(fs.hop_samples() == 160);
  CHECK(fs.window_fn() == "hamming");
  const auto& win = HammingWindow();
  for (std::size_t f = 0; f < fs.size(); ++f) {
    const auto frame = fs.frame(f);
    CHECK(frame[0] == doctest::Approx(c * win[0]));
    for (std::size_t n = 1; n < frame.size(); ++n) {
      CHECK(frame[n] / win[n] == doctest::Approx(c * 0.03).epsilon(1e-12));
    }
    for (double v : fs.raw(f)) CHECK(v == c);
  }
}

TEST_CASE("raw span covers consecutive frames") {
  std::vector<double> ramp(3000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i) / 3000.0;
  const FrameStream fs = Frame(Wave(ramp));
  const auto span = fs.raw_span(2, 4);
  REQUIRE(span.size() == 2 * 160 + 400);
  CHECK(span.front() == ramp[320]);
  CHECK(span.back() == ramp[320 + span.size() - 1]);
}

TEST_CASE("hamming window values") {
  const auto& w = HammingWindow();
  REQUIRE(w.size() == 400);
  CHECK(w[0] == doctest::Approx(0.08));
  CHECK(w[399] == doctest::Approx(0.08));
  for (std::size_t n = 0; n < w.size(); ++n) {
    CHECK(w[n] == doctest::Approx(0.54 - 0.46 * std::cos(2 * std::numbers::pi * n / 399.0)));
  }
}

TEST_CASE("WAV round trip through a file") {
  TempDir dir("sigio");
  const auto x = Sine(250.0, 0.5, 0.7);
  WriteWav16(dir.path() / "a.wav", x, 16000);
  const Waveform w = DecodeWav(dir.path() / "a.wav");
  REQUIRE(w.samples.size() == x.size());
  // Encoded as round(x * 32767), decoded as n / 32768.
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(w.samples[i] - x[i]) <= (0.5 + std::abs(x[i])) / 32768 + 1e-12);
  }
  CHECK_THROWS_AS(DecodeWav(dir.path() / "missing.wav"), Error);
}
