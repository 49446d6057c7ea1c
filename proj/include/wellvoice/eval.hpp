#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wellvoice/measurement.hpp"
#include "wellvoice/model.hpp"
#include "wellvoice/selection.hpp"

namespace wellvoice {

inline constexpr int kDefaultFolds = 5;
inline constexpr int kMinPermutations = 1000;
inline constexpr int kDefaultPermutations = 100000;

/// Lin's concordance correlation with population moments; 0 when both
/// inputs are constant.
double Ccc(std::span<const double> x, std::span<const double> y);

/// Two-sided permutation p-value of |CCC|: (1 + #{|CCC_perm| >= |CCC_obs|})
/// / (n_perm + 1), permuting y.
double PermutationP(std::span<const double> x, std::span<const double> y,
                    int n_perm, std::uint64_t seed);

/// "**" below 1e-5, "*" below 1e-2, otherwise empty.
std::string SignificanceStars(double p);

struct FoldPlan {
  int k = kDefaultFolds;
  std::map<std::string, int> assignments;  // subject -> fold
  std::uint64_t seed = 0;

  std::vector<std::string> subjects_in(int fold) const;
};

/// Seeded shuffle of the distinct subject ids, then round-robin.
FoldPlan MakeFolds(const std::vector<std::string>& subjects, int k,
                   std::uint64_t seed);

/// Rows are sessions of one source (a single question or the concatenation).
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<std::string> names;
  std::vector<std::string> subject_ids;
  std::vector<double> targets;
};

struct CvOptions {
  Measurement measurement = Measurement::kStai;
  std::string source = "concatenated";
  std::size_t n_select = kDefaultSelectCount;
  Hyperparams hyper;
  std::uint64_t seed = 42;
  int k = kDefaultFolds;
  int n_perm = kDefaultPermutations;
  bool clip_predictions = false;
  bool fold_averaged = false;
  std::size_t workers = 1;
};

struct EvalResult {
  Measurement measurement = Measurement::kStai;
  std::string source;
  double ccc = 0.0;
  double pearson = 0.0;
  double p_value = 1.0;
  std::size_t n_sessions = 0;
  std::vector<std::pair<double, double>> pairs;  // (self-assessed, predicted)
  std::vector<double> fold_ccc;
};

/// Subject-independent k-fold CV: per fold, selection and standardization
/// are fit on training sessions only; metrics use pooled held-out
/// predictions (or the fold mean when fold_averaged is set).
EvalResult CrossValidate(const Dataset& data, const CvOptions& options);

}  // namespace wellvoice
