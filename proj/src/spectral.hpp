#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wellvoice::detail {

/// Magnitude of the real DFT of `x` zero-padded to `n_fft` (n_fft/2 + 1 bins).
std::vector<double> MagnitudeSpectrum(std::span<const double> x,
                                      std::size_t n_fft);

/// Linear (non-circular) autocorrelation r[0..max_lag] computed through a
/// zero-padded FFT.
std::vector<double> Autocorrelation(std::span<const double> x,
                                    std::size_t max_lag);

/// Inverse real DFT of a half spectrum of real values (length n/2 + 1),
/// returning n real samples scaled by 1/n.
std::vector<double> InverseRealDft(std::span<const double> half_spectrum,
                                   std::size_t n);

}  // namespace wellvoice::detail
