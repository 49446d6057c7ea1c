#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace wellvoice::detail {
namespace {

// FFTW planning is not thread-safe; execution with new arrays is. Plans are
// created once per size under a lock and kept for the process lifetime.
struct RealPlans {
  fftw_plan forward = nullptr;  // r2c
  fftw_plan inverse = nullptr;  // c2r
};

const RealPlans& PlansFor(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<RealPlans>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<RealPlans>();
    const int len = static_cast<int>(n);
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    slot->forward = fftw_plan_dft_r2c_1d(len, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
    slot->inverse = fftw_plan_dft_c2r_1d(len, out, in, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
  }
  return *slot;
}

// c2r destroys its input, so callers pass a scratch copy.
void ForwardReal(std::vector<double>& in, std::vector<std::complex<double>>& out) {
  out.resize(in.size() / 2 + 1);
  fftw_execute_dft_r2c(PlansFor(in.size()).forward, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

// Unnormalized: returns n times the inverse DFT.
void InverseReal(std::vector<std::complex<double>>& in, std::vector<double>& out,
                 std::size_t n) {
  out.resize(n);
  fftw_execute_dft_c2r(PlansFor(n).inverse, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
}

std::size_t NextPow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::vector<double> MagnitudeSpectrum(std::span<const double> x,
                                      std::size_t n_fft) {
  std::vector<double> padded(n_fft, 0.0);
  std::copy_n(x.begin(), std::min(x.size(), n_fft), padded.begin());
  std::vector<std::complex<double>> spec;
  ForwardReal(padded, spec);
  std::vector<double> mag(n_fft / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(spec[k]);
  return mag;
}

std::vector<double> Autocorrelation(std::span<const double> x,
                                    std::size_t max_lag) {
  const std::size_t n_fft = NextPow2(x.size() + max_lag + 1);
  std::vector<double> padded(n_fft, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  std::vector<std::complex<double>> spec;
  ForwardReal(padded, spec);
  for (auto& c : spec) c = std::norm(c);
  std::vector<double> full;
  InverseReal(spec, full, n_fft);
  full.resize(max_lag + 1);
  const double scale = 1.0 / static_cast<double>(n_fft);
  for (auto& v : full) v *= scale;
  return full;
}

std::vector<double> InverseRealDft(std::span<const double> half_spectrum,
                                   std::size_t n) {
  std::vector<std::complex<double>> spec(n / 2 + 1, 0.0);
  std::copy_n(half_spectrum.begin(), std::min(half_spectrum.size(), spec.size()),
              spec.begin());
  std::vector<double> out;
  InverseReal(spec, out, n);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace wellvoice::detail
