#include "wellvoice/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wellvoice/error.hpp"
#include "wellvoice/features.hpp"

namespace wellvoice {
namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

int ColumnOf(const std::string& source) {
  const auto sources = TableSources();
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] == source) return static_cast<int>(i);
  }
  if (source == "concatenated") return static_cast<int>(sources.size()) - 1;
  return -1;
}

int BinOf(double v, double lo, double hi) {
  const double t = (v - lo) / (hi - lo);
  const int b = static_cast<int>(std::floor(t * kDensityBins));
  return std::clamp(b, 0, kDensityBins - 1);
}

// Blue (sparse) to yellow (dense).
std::string DensityColor(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(40 + t * (253 - 40)));
  const int g = static_cast<int>(std::lround(60 + t * (231 - 60)));
  const int b = static_cast<int>(std::lround(200 + t * (37 - 200)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::vector<std::string> TableSources() {
  std::vector<std::string> out;
  for (int q = 1; q <= kQuestionCount; ++q) out.push_back(QuestionName(q));
  out.push_back("Concatenated");
  return out;
}

std::string ResultsToJson(const std::vector<EvalResult>& results) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    arr.push_back({{"measurement", std::string(MeasurementName(r.measurement))},
                   {"source", r.source},
                   {"ccc", r.ccc},
                   {"pearson", r.pearson},
                   {"p_value", r.p_value},
                   {"stars", SignificanceStars(r.p_value)},
                   {"n_sessions", r.n_sessions},
                   {"fold_ccc", r.fold_ccc}});
  }
  return arr.dump(2) + "\n";
}

std::string Table3Csv(const std::vector<EvalResult>& results) {
  const auto sources = TableSources();
  std::ostringstream out;
  out << "measurement";
  for (const auto& s : sources) out << ',' << s;
  out << '\n';
  for (Measurement m : kAllMeasurements) {
    std::vector<std::string> cells(sources.size());
    bool any = false;
    for (const auto& r : results) {
      if (r.measurement != m) continue;
      const int col = ColumnOf(r.source);
      if (col < 0) continue;
      cells[col] = Fixed(r.ccc, 3) + SignificanceStars(r.p_value);
      any = true;
    }
    if (!any) continue;
    out << MeasurementName(m);
    for (const auto& c : cells) out << ',' << c;
    out << '\n';
  }
  return out.str();
}

std::string PairsCsv(const EvalResult& result) {
  std::ostringstream out;
  out << "self_assessed,predicted\n";
  for (const auto& [truth, pred] : result.pairs) {
    out << Fixed(truth, 6) << ',' << Fixed(pred, 6) << '\n';
  }
  return out.str();
}

DensityGrid DensityCounts(const EvalResult& result) {
  const auto range = RangeOf(result.measurement);
  DensityGrid grid{};
  for (const auto& [truth, pred] : result.pairs) {
    ++grid[BinOf(pred, range.min, range.max)][BinOf(truth, range.min, range.max)];
  }
  return grid;
}

std::string DensityScatterSvg(const EvalResult& result) {
  const auto range = RangeOf(result.measurement);
  const double lo = range.min;
  const double hi = range.max;
  constexpr double kSize = 420.0;
  constexpr double kMargin = 60.0;
  const double total = kSize + 2 * kMargin;
  auto px = [&](double v) {
    return kMargin + (std::clamp(v, lo, hi) - lo) / (hi - lo) * kSize;
  };
  auto py = [&](double v) {
    return kMargin + kSize - (std::clamp(v, lo, hi) - lo) / (hi - lo) * kSize;
  };

  const DensityGrid grid = DensityCounts(result);
  int max_count = 1;
  for (const auto& row : grid) {
    for (int c : row) max_count = std::max(max_count, c);
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total
      << "\" height=\"" << total << "\" viewBox=\"0 0 " << total << ' ' << total
      << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << total << "\" height=\"" << total
      << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize
      << "\" height=\"" << kSize << "\" fill=\"none\" stroke=\"black\"/>\n";
  // Identity line.
  svg << "<line x1=\"" << px(lo) << "\" y1=\"" << py(lo) << "\" x2=\"" << px(hi)
      << "\" y2=\"" << py(hi)
      << "\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double v = lo + (hi - lo) * i / ticks;
    const std::string label = Fixed(v, 0);
    svg << "<line x1=\"" << px(v) << "\" y1=\"" << kMargin + kSize << "\" x2=\""
        << px(v) << "\" y2=\"" << kMargin + kSize + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(v) << "\" y=\"" << kMargin + kSize + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << label << "</text>\n";
    svg << "<line x1=\"" << kMargin - 5 << "\" y1=\"" << py(v) << "\" x2=\""
        << kMargin << "\" y2=\"" << py(v) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << kMargin - 8 << "\" y=\"" << py(v) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
  }
  const std::string name(MeasurementName(result.measurement));
  svg << "<text x=\"" << kMargin + kSize / 2 << "\" y=\"" << total - 15
      << "\" font-size=\"14\" text-anchor=\"middle\">Self-assessed " << name
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kMargin + kSize / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kMargin + kSize / 2 << ")\">Predicted " << name << "</text>\n";
  svg << "<text x=\"" << kMargin + kSize / 2 << "\" y=\"30\" font-size=\"15\" "
      << "text-anchor=\"middle\">" << name << " (" << result.source
      << "), CCC = " << Fixed(result.ccc, 3) << "</text>\n";

  for (const auto& [truth, pred] : result.pairs) {
    const int count = grid[BinOf(pred, lo, hi)][BinOf(truth, lo, hi)];
    svg << "<circle cx=\"" << Fixed(px(truth), 2) << "\" cy=\"" << Fixed(py(pred), 2)
        << "\" r=\"3\" fill=\""
        << DensityColor(static_cast<double>(count) / max_count)
        << "\" fill-opacity=\"0.85\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

}  // namespace wellvoice
