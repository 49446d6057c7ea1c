#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wellvoice/measurement.hpp"

namespace wellvoice {

inline constexpr std::size_t kDefaultSelectCount = 88;

/// Pearson r; 0 when either side has zero variance.
double Pearson(std::span<const double> x, std::span<const double> y);

struct SelectionMask {
  Measurement measurement = Measurement::kStai;
  std::string source;  // "Q1".."Q7" or "concatenated"
  std::vector<std::string> kept_names;
  std::vector<std::size_t> kept_indices;
  std::vector<double> correlations;  // signed r, ordered by |r| descending

  std::size_t size() const { return kept_names.size(); }
};

/// Ranks columns of `features` (rows = sessions) by |Pearson r| against
/// `targets`, keeping the top n; ties break on feature name.
/// Only rows listed in `rows` participate (all rows when empty).
SelectionMask SelectTopN(const Eigen::MatrixXd& features,
                         std::span<const double> targets,
                         const std::vector<std::string>& names, std::size_t n,
                         std::span<const std::size_t> rows = {});

/// Columns of `features` picked by the mask, in mask order.
Eigen::MatrixXd ApplyMask(const SelectionMask& mask,
                          const Eigen::MatrixXd& features);

std::string MaskToJson(const SelectionMask& mask);
SelectionMask MaskFromJson(std::string_view json_text,
                           const std::vector<std::string>& names);
void WriteMask(const std::filesystem::path& path, const SelectionMask& mask);

}  // namespace wellvoice
