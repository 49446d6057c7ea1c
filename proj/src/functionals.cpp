#include "wellvoice/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wellvoice/error.hpp"

namespace wellvoice {

double SortedPercentile(std::span<const double> sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::array<double, kFunctionalCount> ComputeFunctionals(
    std::span<const double> column) {
  if (column.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "functionals need >= 1 frame");
  }
  const std::size_t n = column.size();
  const double nd = static_cast<double>(n);

  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  const double min = sorted.front();
  const double max = sorted.back();
  const bool constant = min == max;

  double sum = 0.0, sum_sq = 0.0;
  for (double v : column) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = constant ? min : sum / nd;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, abs_dev = 0.0;
  std::size_t above = 0;
  for (double v : column) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    abs_dev += std::abs(d);
    if (v > mean) ++above;
  }
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;

  double skew = 0.0, kurt = 0.0;
  if (!constant && m2 > 0.0) {
    skew = m3 / std::pow(m2, 1.5);
    kurt = m4 / (m2 * m2) - 3.0;
  }

  // Least squares of value against frame index 0..n-1.
  double slope = 0.0;
  if (n > 1 && !constant) {
    const double t_mean = (nd - 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double dt = static_cast<double>(t) - t_mean;
      sxy += dt * (column[t] - mean);
      sxx += dt * dt;
    }
    slope = sxy / sxx;
  }
  const double intercept = mean - slope * (nd - 1.0) / 2.0;

  double abs_delta = 0.0;
  for (std::size_t t = 1; t < n; ++t) {
    abs_delta += std::abs(column[t] - column[t - 1]);
  }
  if (n > 1) abs_delta /= static_cast<double>(n - 1);

  const double q1 = SortedPercentile(sorted, 25.0);
  const double q3 = SortedPercentile(sorted, 75.0);
  return {mean,
          std::sqrt(m2),
          SortedPercentile(sorted, 50.0),
          q1,
          q3,
          q3 - q1,
          SortedPercentile(sorted, 5.0),
          SortedPercentile(sorted, 95.0),
          min,
          max,
          max - min,
          skew,
          kurt,
          slope,
          intercept,
          abs_dev / nd,
          std::sqrt(sum_sq / nd),
          abs_delta,
          constant ? 0.0 : static_cast<double>(above) / nd};
}

FeatureVector ApplyFunctionals(const FrameMatrix& m) {
  if (m.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "functionals need >= 1 frame");
  }
  FeatureVector out;
  out.names.reserve(m.cols() * kFunctionalCount);
  out.values.reserve(m.cols() * kFunctionalCount);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto column = m.column(c);
    const auto values = ComputeFunctionals(column);
    for (std::size_t f = 0; f < kFunctionalCount; ++f) {
      out.push(m.names()[c] + "." + std::string(kFunctionalNames[f]),
               values[f]);
    }
  }
  return out;
}

}  // namespace wellvoice
