#include "wellvoice/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "wellvoice/error.hpp"
#include "wellvoice/parallel.hpp"
#include "wellvoice/rng.hpp"

namespace wellvoice {
namespace {

struct Moments {
  double mean_x, mean_y, var_x, var_y;
};

Moments ComputeMoments(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  Moments m{};
  m.mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  m.mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.var_x += (x[i] - m.mean_x) * (x[i] - m.mean_x);
    m.var_y += (y[i] - m.mean_y) * (y[i] - m.mean_y);
  }
  m.var_x /= n;
  m.var_y /= n;
  return m;
}

void CheckPair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 2 pairs");
  }
}

}  // namespace

double Ccc(std::span<const double> x, std::span<const double> y) {
  CheckPair(x, y);
  const Moments m = ComputeMoments(x, y);
  if (!(m.var_x > 0.0) && !(m.var_y > 0.0)) return 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - m.mean_x) * (y[i] - m.mean_y);
  }
  cov /= static_cast<double>(x.size());
  const double gap = m.mean_x - m.mean_y;
  return std::clamp(2.0 * cov / (m.var_x + m.var_y + gap * gap), -1.0, 1.0);
}

double PermutationP(std::span<const double> x, std::span<const double> y,
                    int n_perm, std::uint64_t seed) {
  CheckPair(x, y);
  if (n_perm < kMinPermutations) {
    throw Error(ErrorCode::kInvalidArgument,
                "n_perm must be >= " + std::to_string(kMinPermutations));
  }
  const double observed = std::abs(Ccc(x, y));
  // Means and variances are permutation invariant; only the cross term moves.
  const Moments m = ComputeMoments(x, y);
  const double n = static_cast<double>(x.size());
  const double gap = m.mean_x - m.mean_y;
  const double denom = m.var_x + m.var_y + gap * gap;
  if (!(denom > 0.0)) return 1.0;

  std::vector<double> cx(x.size()), cy(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    cx[i] = x[i] - m.mean_x;
    cy[i] = y[i] - m.mean_y;
  }
  // Relative slack so permutations reproducing the observed statistic
  // exactly are counted despite summation-order rounding.
  const double threshold = observed * (1.0 - 1e-12);
  std::mt19937_64 rng(seed);
  long exceed = 0;
  for (int p = 0; p < n_perm; ++p) {
    Shuffle(cy, rng);
    double cov = 0.0;
    for (std::size_t i = 0; i < cx.size(); ++i) cov += cx[i] * cy[i];
    const double stat = std::abs(2.0 * (cov / n) / denom);
    if (stat >= threshold) ++exceed;
  }
  return (1.0 + static_cast<double>(exceed)) / (n_perm + 1.0);
}

std::string SignificanceStars(double p) {
  if (p < 1e-5) return "**";
  if (p < 1e-2) return "*";
  return "";
}

std::vector<std::string> FoldPlan::subjects_in(int fold) const {
  std::vector<std::string> out;
  for (const auto& [subject, f] : assignments) {
    if (f == fold) out.push_back(subject);
  }
  return out;
}

FoldPlan MakeFolds(const std::vector<std::string>& subjects, int k,
                   std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "k must be >= 2");
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (const auto& s : subjects) {
    if (seen.insert(s).second) unique.push_back(s);
  }
  if (unique.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::kTooFewSubjects,
                std::to_string(unique.size()) + " subjects for " +
                    std::to_string(k) + " folds");
  }
  // Shuffle from a canonical order so the plan depends only on the id set.
  std::sort(unique.begin(), unique.end());
  std::mt19937_64 rng(seed);
  Shuffle(unique, rng);
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    plan.assignments[unique[i]] = static_cast<int>(i % k);
  }
  return plan;
}

EvalResult CrossValidate(const Dataset& data, const CvOptions& options) {
  const auto n = static_cast<std::size_t>(data.features.rows());
  if (data.subject_ids.size() != n || data.targets.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "dataset columns disagree");
  }
  const FoldPlan plan = MakeFolds(data.subject_ids, options.k, options.seed);

  std::vector<std::vector<std::size_t>> test_rows(options.k), train_rows(options.k);
  for (std::size_t i = 0; i < n; ++i) {
    const int fold = plan.assignments.at(data.subject_ids[i]);
    for (int f = 0; f < options.k; ++f) {
      (f == fold ? test_rows[f] : train_rows[f]).push_back(i);
    }
  }

  std::vector<double> predictions(n, 0.0);
  std::vector<int> predicted_count(n, 0);
  const ScoreRange range = RangeOf(options.measurement);

  ParallelFor(static_cast<std::size_t>(options.k), options.workers,
              [&](std::size_t fold) {
    const auto& train = train_rows[fold];
    const auto& test = test_rows[fold];
    std::set<std::string> train_subjects;
    for (auto i : train) train_subjects.insert(data.subject_ids[i]);
    for (auto i : test) {
      if (train_subjects.contains(data.subject_ids[i])) {
        throw std::logic_error("subject " + data.subject_ids[i] +
                               " appears in training and test of fold " +
                               std::to_string(fold));
      }
    }
    if (test.empty()) return;

    const SelectionMask mask = SelectTopN(
        data.features, data.targets, data.names,
        std::min(options.n_select, data.names.size()), train);
    const Eigen::MatrixXd selected = ApplyMask(mask, data.features);

    Eigen::MatrixXd x_train(static_cast<Eigen::Index>(train.size()), selected.cols());
    std::vector<double> y_train(train.size());
    for (std::size_t r = 0; r < train.size(); ++r) {
      x_train.row(static_cast<Eigen::Index>(r)) =
          selected.row(static_cast<Eigen::Index>(train[r]));
      y_train[r] = data.targets[train[r]];
    }
    Hyperparams hyper = options.hyper;
    hyper.seed = options.seed + fold;
    const TrainResult trained = Train(x_train, y_train, mask.kept_names, hyper);

    Eigen::MatrixXd x_test(static_cast<Eigen::Index>(test.size()), selected.cols());
    for (std::size_t r = 0; r < test.size(); ++r) {
      x_test.row(static_cast<Eigen::Index>(r)) =
          selected.row(static_cast<Eigen::Index>(test[r]));
    }
    const Eigen::VectorXd pred = trained.model.Predict(x_test);
    for (std::size_t r = 0; r < test.size(); ++r) {
      double p = pred(static_cast<Eigen::Index>(r));
      if (options.clip_predictions) {
        p = std::clamp(p, static_cast<double>(range.min),
                       static_cast<double>(range.max));
      }
      predictions[test[r]] = p;
      predicted_count[test[r]] += 1;
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    if (predicted_count[i] != 1) {
      throw std::logic_error("session " + std::to_string(i) +
                             " predicted " + std::to_string(predicted_count[i]) +
                             " times");
    }
  }

  EvalResult result;
  result.measurement = options.measurement;
  result.source = options.source;
  result.n_sessions = n;
  for (std::size_t i = 0; i < n; ++i) {
    result.pairs.emplace_back(data.targets[i], predictions[i]);
  }
  for (int f = 0; f < options.k; ++f) {
    std::vector<double> t, p;
    for (auto i : test_rows[f]) {
      t.push_back(data.targets[i]);
      p.push_back(predictions[i]);
    }
    result.fold_ccc.push_back(t.size() >= 2 ? Ccc(t, p) : 0.0);
  }
  result.pearson = Pearson(data.targets, predictions);
  result.ccc = options.fold_averaged
                   ? std::accumulate(result.fold_ccc.begin(), result.fold_ccc.end(), 0.0) /
                         options.k
                   : Ccc(data.targets, predictions);
  result.p_value = PermutationP(data.targets, predictions, options.n_perm, options.seed);
  return result;
}

}  // namespace wellvoice
