#include "wellvoice/signal_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>

#include "wellvoice/error.hpp"

namespace wellvoice {
namespace {

constexpr int kMinRateHz = 8000;
constexpr int kMaxRateHz = 48000;
constexpr int kSincZeroCrossings = 16;

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

double DecodeSample(const unsigned char* p, int bits, bool is_float) {
  if (is_float) {
    float f;
    std::memcpy(&f, p, sizeof(f));
    double v = static_cast<double>(f);
    if (!std::isfinite(v)) v = 0.0;
    return std::clamp(v, -1.0, 1.0);
  }
  switch (bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(p[0]) |
                       (static_cast<std::int32_t>(p[1]) << 8) |
                       (static_cast<std::int32_t>(p[2]) << 16);
      if (v & 0x800000) v |= ~0xFFFFFF;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(ReadU32(p)) / 2147483648.0;
    default:
      return 0.0;
  }
}

double BlackmanWindow(double x, double half_width) {
  // x in [-half_width, half_width]
  const double t = (x / half_width + 1.0) * 0.5;
  return 0.42 - 0.5 * std::cos(2.0 * std::numbers::pi * t) +
         0.08 * std::cos(4.0 * std::numbers::pi * t);
}

}  // namespace

FrameStream::FrameStream(std::vector<double> tapered, std::vector<double> raw,
                         std::size_t count)
    : tapered_(std::move(tapered)), raw_(std::move(raw)), count_(count) {}

std::vector<double> FrameStream::raw_span(std::size_t first,
                                          std::size_t last) const {
  std::vector<double> out;
  if (count_ == 0) return out;
  last = std::min(last, count_ - 1);
  if (first > last) return out;
  out.reserve((last - first) * kFrameHop + kFrameLength);
  for (std::size_t i = first; i < last; ++i) {
    auto r = raw(i);
    out.insert(out.end(), r.begin(), r.begin() + kFrameHop);
  }
  auto r = raw(last);
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::size_t FrameCount(std::size_t n) {
  if (n < kFrameLength) return 0;
  return (n - kFrameLength) / kFrameHop + 1;
}

const std::vector<double>& HammingWindow() {
  static const std::vector<double> window = [] {
    std::vector<double> w(kFrameLength);
    for (std::size_t i = 0; i < kFrameLength; ++i) {
      w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i /
                                    (kFrameLength - 1));
    }
    return w;
  }();
  return window;
}

std::vector<double> Resample(std::span<const double> input, int source_rate_hz,
                             int target_rate_hz) {
  if (source_rate_hz <= 0 || target_rate_hz <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample rates must be positive");
  }
  if (source_rate_hz == target_rate_hz) {
    return {input.begin(), input.end()};
  }
  const std::size_t out_len = static_cast<std::size_t>(
      static_cast<std::uint64_t>(input.size()) * target_rate_hz /
      source_rate_hz);
  const double step = static_cast<double>(source_rate_hz) / target_rate_hz;
  // Normalized cutoff relative to the input Nyquist; a small guard band keeps
  // the transition below the output Nyquist when downsampling.
  const double cutoff = std::min(1.0, 1.0 / step) * 0.97;
  const double half_width = kSincZeroCrossings / cutoff;
  const auto n_in = static_cast<std::ptrdiff_t>(input.size());

  std::vector<double> out(out_len);
  for (std::size_t n = 0; n < out_len; ++n) {
    const double center = n * step;
    const auto lo = std::max<std::ptrdiff_t>(
        0, static_cast<std::ptrdiff_t>(std::ceil(center - half_width)));
    const auto hi = std::min<std::ptrdiff_t>(
        n_in - 1, static_cast<std::ptrdiff_t>(std::floor(center + half_width)));
    double acc = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) {
      const double x = center - static_cast<double>(k);
      const double arg = std::numbers::pi * cutoff * x;
      const double sinc = std::abs(arg) < 1e-12 ? 1.0 : std::sin(arg) / arg;
      acc += input[k] * cutoff * sinc * BlackmanWindow(x, half_width);
    }
    out[n] = std::clamp(acc, -1.0, 1.0);
  }
  return out;
}

Waveform DecodeWav(std::span<const unsigned char> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  int format_tag = 0, channels = 0, rate = 0, bits = 0, block_align = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) {
        throw Error(ErrorCode::kUnsupportedFormat, "truncated fmt chunk");
      }
      const unsigned char* f = bytes.data() + body;
      format_tag = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = static_cast<int>(ReadU32(f + 4));
      block_align = ReadU16(f + 12);
      bits = ReadU16(f + 14);
      if (format_tag == 0xFFFE) {
        if (size < 40) {
          throw Error(ErrorCode::kUnsupportedFormat,
                      "truncated extensible fmt chunk");
        }
        format_tag = ReadU16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Tolerate writers that leave a placeholder size on streamed output.
      data_size = std::min(size, available);
      break;
    }
    pos = body + size + (size & 1);
  }

  if (!have_fmt || data == nullptr) {
    throw Error(ErrorCode::kUnsupportedFormat, "missing fmt or data chunk");
  }
  const bool is_float = format_tag == 3;
  if (format_tag != 1 && !is_float) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "compressed WAV (format tag " + std::to_string(format_tag) +
                    ")");
  }
  if (is_float ? bits != 32
               : (bits != 8 && bits != 16 && bits != 24 && bits != 32)) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported bit depth " + std::to_string(bits));
  }
  if (channels < 1 || channels > 2) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported channel count " + std::to_string(channels));
  }
  if (rate < kMinRateHz || rate > kMaxRateHz) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported sample rate " + std::to_string(rate));
  }
  const int bytes_per_sample = bits / 8;
  if (block_align != bytes_per_sample * channels) {
    throw Error(ErrorCode::kUnsupportedFormat, "inconsistent block alignment");
  }

  const std::size_t n_frames = data_size / block_align;
  std::vector<double> mono(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    const unsigned char* p = data + i * block_align;
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      acc += DecodeSample(p + c * bytes_per_sample, bits, is_float);
    }
    mono[i] = acc / channels;
  }

  Waveform w;
  w.samples = Resample(mono, rate, kCanonicalRateHz);
  w.sample_rate_hz = kCanonicalRateHz;
  if (w.samples.size() < kFrameLength) {
    throw Error(ErrorCode::kEmptyAudio,
                "fewer than " + std::to_string(kFrameLength) +
                    " samples after resampling");
  }
  return w;
}

Waveform DecodeWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<unsigned char> EncodeWav16(std::span<const double> samples,
                                       int sample_rate_hz) {
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  auto put = [&out](std::uint32_t v, int n) {
    for (int i = 0; i < n; ++i) out.push_back((v >> (8 * i)) & 0xFF);
  };
  auto tag = [&out](const char* s) { out.insert(out.end(), s, s + 4); };
  tag("RIFF");
  put(36 + data_bytes, 4);
  tag("WAVE");
  tag("fmt ");
  put(16, 4);
  put(1, 2);
  put(1, 2);
  put(static_cast<std::uint32_t>(sample_rate_hz), 4);
  put(static_cast<std::uint32_t>(sample_rate_hz) * 2, 4);
  put(2, 2);
  put(16, 2);
  tag("data");
  put(data_bytes, 4);
  for (double s : samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(
        std::clamp(std::lround(c * 32767.0), -32768L, 32767L));
    put(static_cast<std::uint16_t>(q), 2);
  }
  return out;
}

void WriteWav16(const std::filesystem::path& path,
                std::span<const double> samples, int sample_rate_hz) {
  const auto bytes = EncodeWav16(samples, sample_rate_hz);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
  }
}

FrameStream Frame(const Waveform& w, double pre_emphasis) {
  if (!(pre_emphasis >= 0.0 && pre_emphasis < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pre-emphasis must lie in [0, 1)");
  }
  const std::size_t count = FrameCount(w.samples.size());
  if (count == 0) {
    throw Error(ErrorCode::kEmptyAudio, "no full 25 ms frame fits");
  }
  const auto& window = HammingWindow();
  std::vector<double> tapered(count * kFrameLength);
  std::vector<double> raw(count * kFrameLength);
  for (std::size_t f = 0; f < count; ++f) {
    const double* x = w.samples.data() + f * kFrameHop;
    double* t = tapered.data() + f * kFrameLength;
    std::copy(x, x + kFrameLength, raw.data() + f * kFrameLength);
    t[0] = x[0] * window[0];
    for (std::size_t n = 1; n < kFrameLength; ++n) {
      t[n] = (x[n] - pre_emphasis * x[n - 1]) * window[n];
    }
  }
  return FrameStream(std::move(tapered), std::move(raw), count);
}

}  // namespace wellvoice
