#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "wellvoice/eval.hpp"

namespace wellvoice {

inline constexpr int kDensityBins = 25;

/// Column order of table3.csv after the measurement label.
std::vector<std::string> TableSources();

/// JSON array of results, without the per-session pairs.
std::string ResultsToJson(const std::vector<EvalResult>& results);

/// One row per measurement present in `results`, columns Q1..Q7 and
/// Concatenated. Cells read "0.412**"; missing cells are empty.
std::string Table3Csv(const std::vector<EvalResult>& results);

/// "self_assessed,predicted" rows.
std::string PairsCsv(const EvalResult& result);

/// 2-D histogram over the measurement's possible range on both axes;
/// counts[row][col] with row 0 at the lowest predicted bin. Points outside
/// the range land in the edge bins.
using DensityGrid = std::array<std::array<int, kDensityBins>, kDensityBins>;
DensityGrid DensityCounts(const EvalResult& result);

/// Scatter of self-assessed (x) vs predicted (y), points colored by the
/// density of their histogram bin.
std::string DensityScatterSvg(const EvalResult& result);

void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace wellvoice
