#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wellvoice {

struct Hyperparams {
  std::vector<int> hidden = {256, 256, 256, 256};
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double dropout = 0.5;  // drop probability on hidden activations
  double l2_lambda = 1e-4;
  int batch = 32;
  int epochs = 100;
  std::uint64_t seed = 42;
  /// After training, refit the output layer's scale and offset by least
  /// squares on the training rows in inference mode. Dropout-trained nets
  /// otherwise compress their deterministic outputs.
  bool recalibrate_output = true;
};

/// Per-feature z-scoring fit on training rows; zero-variance columns keep
/// stddev 1.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;

  static Standardizer Fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd Apply(const Eigen::MatrixXd& x) const;
};

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;
};

struct Gradients {
  std::vector<DenseLayer> layers;
  double loss = 0.0;  // MSE + l2 penalty
  double mse = 0.0;
};

/// Per-sample keep masks for each hidden layer (units x batch), already
/// scaled by 1/keep; empty means no dropout.
using DropoutMasks = std::vector<Eigen::MatrixXd>;

class RegressorModel {
 public:
  std::vector<DenseLayer> layers;
  std::vector<std::string> feature_names;
  Standardizer standardizer;
  double target_mean = 0.0;
  double target_scale = 1.0;
  Hyperparams hyper;

  /// He-uniform weights, zero biases.
  static RegressorModel Initialize(std::size_t n_inputs,
                                   const Hyperparams& hyper,
                                   std::mt19937_64& rng);

  std::size_t input_dim() const;

  /// Single standardized sample; output in standardized target units.
  /// `train_mode` applies inverted dropout drawn from `rng`.
  double Forward(std::span<const double> x, bool train_mode,
                 std::mt19937_64* rng = nullptr) const;

  /// Batch forward, inputs as columns (n_in x batch).
  Eigen::RowVectorXd ForwardBatch(const Eigen::MatrixXd& inputs,
                                  const DropoutMasks& masks = {}) const;

  /// Raw feature rows in, predictions in target units out.
  Eigen::VectorXd Predict(const Eigen::MatrixXd& raw_rows) const;

  /// Loss and gradients of mean squared error + l2_lambda * sum ||W||^2 for
  /// standardized inputs (n_in x batch) against standardized targets.
  Gradients ComputeGradients(const Eigen::MatrixXd& inputs,
                             const Eigen::RowVectorXd& targets,
                             const DropoutMasks& masks = {}) const;

  /// Same objective without gradients.
  double Loss(const Eigen::MatrixXd& inputs,
              const Eigen::RowVectorXd& targets) const;
};

struct TrainReport {
  std::vector<double> epoch_mse;  // training MSE in target units
  double calibration_scale = 1.0;
  double calibration_offset = 0.0;  // standardized target units
  int epochs = 0;
  std::uint64_t seed = 0;
};

struct TrainResult {
  RegressorModel model;
  TrainReport report;
};

struct AdamMoments {
  std::vector<double> m;
  std::vector<double> v;
};

/// One bias-corrected Adam update; `step` counts from 1.
void AdamUpdate(std::span<double> params, std::span<const double> grads,
                AdamMoments& moments, long step, const Hyperparams& hyper);

/// Full training: standardizer and target scaling fit on `features`,
/// seeded shuffles, exactly hyper.epochs epochs, then the optional output
/// recalibration.
TrainResult Train(const Eigen::MatrixXd& features,
                  std::span<const double> targets,
                  const std::vector<std::string>& feature_names,
                  const Hyperparams& hyper);

/// Max relative error between analytic gradients and central differences
/// (step h) over all parameters, dropout disabled.
double GradientCheck(const RegressorModel& model, const Eigen::MatrixXd& inputs,
                     const Eigen::RowVectorXd& targets, double h = 1e-5);

std::string ModelToJson(const RegressorModel& model);
RegressorModel ModelFromJson(std::string_view json_text);
void SaveModel(const std::filesystem::path& path, const RegressorModel& model);
RegressorModel LoadModel(const std::filesystem::path& path);

}  // namespace wellvoice
