#include "wellvoice/selection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "wellvoice/error.hpp"

namespace wellvoice {

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "pearson needs >= 2 points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

SelectionMask SelectTopN(const Eigen::MatrixXd& features,
                         std::span<const double> targets,
                         const std::vector<std::string>& names, std::size_t n,
                         std::span<const std::size_t> rows) {
  if (static_cast<std::size_t>(features.cols()) != names.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "names do not match columns");
  }
  if (static_cast<std::size_t>(features.rows()) != targets.size()) {
    throw Error(ErrorCode::kLengthMismatch, "targets do not match rows");
  }
  std::vector<std::size_t> use(rows.begin(), rows.end());
  if (use.empty()) {
    use.resize(targets.size());
    std::iota(use.begin(), use.end(), 0);
  }
  if (use.size() < 2) {
    throw Error(ErrorCode::kTooFewRows, "selection needs >= 2 rows");
  }
  if (n == 0 || n > names.size()) {
    throw Error(ErrorCode::kNTooLarge,
                "n = " + std::to_string(n) + " with " +
                    std::to_string(names.size()) + " features");
  }

  std::vector<double> y(use.size()), x(use.size());
  for (std::size_t i = 0; i < use.size(); ++i) y[i] = targets[use[i]];
  std::vector<double> r(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    for (std::size_t i = 0; i < use.size(); ++i) {
      x[i] = features(static_cast<Eigen::Index>(use[i]),
                      static_cast<Eigen::Index>(c));
    }
    r[c] = Pearson(x, y);
  }

  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = std::abs(r[a]), rb = std::abs(r[b]);
    if (ra != rb) return ra > rb;
    return names[a] < names[b];
  });

  SelectionMask mask;
  for (std::size_t k = 0; k < n; ++k) {
    mask.kept_indices.push_back(order[k]);
    mask.kept_names.push_back(names[order[k]]);
    mask.correlations.push_back(r[order[k]]);
  }
  return mask;
}

Eigen::MatrixXd ApplyMask(const SelectionMask& mask,
                          const Eigen::MatrixXd& features) {
  Eigen::MatrixXd out(features.rows(),
                      static_cast<Eigen::Index>(mask.kept_indices.size()));
  for (std::size_t k = 0; k < mask.kept_indices.size(); ++k) {
    const auto c = static_cast<Eigen::Index>(mask.kept_indices[k]);
    if (c >= features.cols()) {
      throw Error(ErrorCode::kDimensionMismatch, "mask index out of range");
    }
    out.col(static_cast<Eigen::Index>(k)) = features.col(c);
  }
  return out;
}

std::string MaskToJson(const SelectionMask& mask) {
  nlohmann::json j;
  j["measurement"] = MeasurementName(mask.measurement);
  j["source"] = mask.source;
  j["n"] = mask.size();
  j["entries"] = nlohmann::json::array();
  for (std::size_t k = 0; k < mask.size(); ++k) {
    j["entries"].push_back(
        {{"name", mask.kept_names[k]}, {"r", mask.correlations[k]}});
  }
  return j.dump(2);
}

SelectionMask MaskFromJson(std::string_view json_text,
                           const std::vector<std::string>& names) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);
  SelectionMask mask;
  try {
    const auto j = nlohmann::json::parse(json_text);
    const auto m = ParseMeasurement(j.at("measurement").get<std::string>());
    if (!m) throw Error(ErrorCode::kMalformedFile, "unknown measurement");
    mask.measurement = *m;
    mask.source = j.at("source").get<std::string>();
    for (const auto& e : j.at("entries")) {
      const auto name = e.at("name").get<std::string>();
      const auto it = index.find(name);
      if (it == index.end()) {
        throw Error(ErrorCode::kMalformedFile, "unknown feature " + name);
      }
      mask.kept_names.push_back(name);
      mask.kept_indices.push_back(it->second);
      mask.correlations.push_back(e.at("r").get<double>());
    }
    if (j.at("n").get<std::size_t>() != mask.size()) {
      throw Error(ErrorCode::kMalformedFile, "n disagrees with entries");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("mask JSON: ") + e.what());
  }
  return mask;
}

void WriteMask(const std::filesystem::path& path, const SelectionMask& mask) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << MaskToJson(mask) << '\n';
}

}  // namespace wellvoice
