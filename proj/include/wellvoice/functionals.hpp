#pragma once

#include <array>
#include <span>
#include <string_view>

#include "wellvoice/acoustic.hpp"
#include "wellvoice/features_types.hpp"

namespace wellvoice {

inline constexpr std::size_t kFunctionalCount = 19;
inline constexpr std::size_t kAcousticDim = kFrameFeatureDim * kFunctionalCount;

/// Fixed, versioned functional order.
inline constexpr std::array<std::string_view, kFunctionalCount>
    kFunctionalNames = {"mean",     "stddev",       "median",
                        "q1",       "q3",           "iqr",
                        "pct5",     "pct95",        "min",
                        "max",      "range",        "skewness",
                        "kurtosis", "slope",        "intercept",
                        "mean_abs_dev", "rms",      "mean_abs_delta",
                        "frac_above_mean"};

/// All 19 functionals of one column, in kFunctionalNames order.
/// Population moments; zero-variance columns report 0 for skewness,
/// kurtosis (excess), slope and frac_above_mean.
std::array<double, kFunctionalCount> ComputeFunctionals(
    std::span<const double> column);

/// Linear-interpolation percentile (p in [0, 100]) of an ascending range.
double SortedPercentile(std::span<const double> sorted, double p);

/// "<column>.<functional>" for every column: 123 x 19 = 2,337 dims.
FeatureVector ApplyFunctionals(const FrameMatrix& m);

}  // namespace wellvoice
