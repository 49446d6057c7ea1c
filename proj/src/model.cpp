#include "wellvoice/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "wellvoice/error.hpp"
#include "wellvoice/rng.hpp"

namespace wellvoice {
namespace {

constexpr const char* kModelFormat = "wellvoice-regressor";
constexpr int kModelVersion = 1;

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DropoutMasks DrawMasks(const RegressorModel& model, Eigen::Index batch,
                       std::mt19937_64& rng) {
  DropoutMasks masks;
  const double drop = model.hyper.dropout;
  if (drop <= 0.0) return masks;
  const double keep = 1.0 - drop;
  for (std::size_t l = 0; l + 1 < model.layers.size(); ++l) {
    Eigen::MatrixXd m(model.layers[l].weights.rows(), batch);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, j) = Uniform01(rng) < keep ? 1.0 / keep : 0.0;
      }
    }
    masks.push_back(std::move(m));
  }
  return masks;
}

nlohmann::json VectorToJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd VectorFromJson(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

}  // namespace

Standardizer Standardizer::Fit(const Eigen::MatrixXd& x) {
  Standardizer s;
  const auto n = static_cast<double>(x.rows());
  s.mean = x.colwise().mean().transpose();
  s.stddev.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double var = (x.col(c).array() - s.mean(c)).square().sum() / n;
    const double sd = std::sqrt(var);
    s.stddev(c) = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::Apply(const Eigen::MatrixXd& x) const {
  if (x.cols() != mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "standardizer width mismatch");
  }
  return (x.rowwise() - mean.transpose()).array().rowwise() /
         stddev.transpose().array();
}

RegressorModel RegressorModel::Initialize(std::size_t n_inputs,
                                          const Hyperparams& hyper,
                                          std::mt19937_64& rng) {
  RegressorModel m;
  m.hyper = hyper;
  std::vector<int> sizes{static_cast<int>(n_inputs)};
  sizes.insert(sizes.end(), hyper.hidden.begin(), hyper.hidden.end());
  sizes.push_back(1);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    DenseLayer layer;
    layer.weights.resize(sizes[l + 1], sizes[l]);
    const double limit = std::sqrt(6.0 / sizes[l]);
    for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
      for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
        layer.weights(i, j) = (2.0 * Uniform01(rng) - 1.0) * limit;
      }
    }
    layer.bias = Eigen::VectorXd::Zero(sizes[l + 1]);
    m.layers.push_back(std::move(layer));
  }
  return m;
}

std::size_t RegressorModel::input_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weights.cols());
}

Eigen::RowVectorXd RegressorModel::ForwardBatch(const Eigen::MatrixXd& inputs,
                                                const DropoutMasks& masks) const {
  if (static_cast<std::size_t>(inputs.rows()) != input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(inputs.rows()) +
                    " features, model expects " + std::to_string(input_dim()));
  }
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Eigen::MatrixXd z = layers[l].weights * a;
    z.colwise() += layers[l].bias;
    if (l + 1 < layers.size()) {
      a = z.cwiseMax(0.0);
      if (!masks.empty()) a = a.cwiseProduct(masks[l]);
    } else {
      a = std::move(z);
    }
  }
  return a.row(0);
}

double RegressorModel::Forward(std::span<const double> x, bool train_mode,
                               std::mt19937_64* rng) const {
  if (x.size() != input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input has " + std::to_string(x.size()) +
                    " features, model expects " + std::to_string(input_dim()));
  }
  const Eigen::MatrixXd col = Eigen::Map<const Eigen::VectorXd>(
      x.data(), static_cast<Eigen::Index>(x.size()));
  if (train_mode && hyper.dropout > 0.0) {
    if (rng == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "train mode needs an rng");
    }
    return ForwardBatch(col, DrawMasks(*this, 1, *rng))(0);
  }
  return ForwardBatch(col)(0);
}

Eigen::VectorXd RegressorModel::Predict(const Eigen::MatrixXd& raw_rows) const {
  const Eigen::MatrixXd z = standardizer.Apply(raw_rows).transpose();
  const Eigen::RowVectorXd out = ForwardBatch(z);
  return (out.transpose().array() * target_scale + target_mean).matrix();
}

Gradients RegressorModel::ComputeGradients(const Eigen::MatrixXd& inputs,
                                           const Eigen::RowVectorXd& targets,
                                           const DropoutMasks& masks) const {
  const std::size_t n_layers = layers.size();
  const double batch = static_cast<double>(inputs.cols());
  if (targets.size() != inputs.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "targets do not match batch");
  }
  if (static_cast<std::size_t>(inputs.rows()) != input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "input width mismatch");
  }

  // Forward, keeping pre-activations and (masked) activations.
  std::vector<Eigen::MatrixXd> acts{inputs};
  std::vector<Eigen::MatrixXd> pre;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd z = layers[l].weights * acts.back();
    z.colwise() += layers[l].bias;
    pre.push_back(z);
    if (l + 1 < n_layers) {
      Eigen::MatrixXd a = z.cwiseMax(0.0);
      if (!masks.empty()) a = a.cwiseProduct(masks[l]);
      acts.push_back(std::move(a));
    }
  }
  const Eigen::RowVectorXd residual = pre.back().row(0) - targets;

  Gradients g;
  g.mse = residual.squaredNorm() / batch;
  double penalty = 0.0;
  for (const auto& layer : layers) penalty += layer.weights.squaredNorm();
  g.loss = g.mse + hyper.l2_lambda * penalty;

  g.layers.resize(n_layers);
  Eigen::MatrixXd delta = (2.0 / batch) * residual;
  for (std::size_t l = n_layers; l-- > 0;) {
    g.layers[l].weights = delta * acts[l].transpose() +
                          2.0 * hyper.l2_lambda * layers[l].weights;
    g.layers[l].bias = delta.rowwise().sum();
    if (l == 0) break;
    Eigen::MatrixXd back = layers[l].weights.transpose() * delta;
    const Eigen::MatrixXd& z = pre[l - 1];
    for (Eigen::Index j = 0; j < back.cols(); ++j) {
      for (Eigen::Index i = 0; i < back.rows(); ++i) {
        double d = z(i, j) > 0.0 ? back(i, j) : 0.0;
        if (!masks.empty()) d *= masks[l - 1](i, j);
        back(i, j) = d;
      }
    }
    delta = std::move(back);
  }
  return g;
}

double RegressorModel::Loss(const Eigen::MatrixXd& inputs,
                            const Eigen::RowVectorXd& targets) const {
  const Eigen::RowVectorXd out = ForwardBatch(inputs);
  double penalty = 0.0;
  for (const auto& layer : layers) penalty += layer.weights.squaredNorm();
  return (out - targets).squaredNorm() / static_cast<double>(inputs.cols()) +
         hyper.l2_lambda * penalty;
}

void AdamUpdate(std::span<double> params, std::span<const double> grads,
                AdamMoments& moments, long step, const Hyperparams& hyper) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kLengthMismatch, "params and grads differ");
  }
  if (moments.m.size() != params.size()) {
    moments.m.assign(params.size(), 0.0);
    moments.v.assign(params.size(), 0.0);
  }
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    moments.m[i] = hyper.beta1 * moments.m[i] + (1.0 - hyper.beta1) * g;
    moments.v[i] = hyper.beta2 * moments.v[i] + (1.0 - hyper.beta2) * g * g;
    const double m_hat = moments.m[i] / c1;
    const double v_hat = moments.v[i] / c2;
    params[i] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

namespace {

// Least-squares fit of y ~ offset + scale * output, folded into the last
// layer. Skipped when the outputs are constant or anti-correlated.
void RecalibrateOutput(RegressorModel& model, const Eigen::MatrixXd& x,
                       const Eigen::RowVectorXd& y, TrainReport& report) {
  const Eigen::RowVectorXd out = model.ForwardBatch(x);
  const double n = static_cast<double>(out.size());
  const double mo = out.mean();
  const double my = y.mean();
  const double var = (out.array() - mo).square().sum() / n;
  const double cov = ((out.array() - mo) * (y.array() - my)).sum() / n;
  double scale = 1.0;
  if (var > 1e-12 && cov >= 0.0) scale = cov / var;
  const double offset = my - scale * mo;
  DenseLayer& last = model.layers.back();
  last.weights *= scale;
  last.bias = last.bias.array() * scale + offset;
  report.calibration_scale = scale;
  report.calibration_offset = offset;
}

}  // namespace

TrainResult Train(const Eigen::MatrixXd& features,
                  std::span<const double> targets,
                  const std::vector<std::string>& feature_names,
                  const Hyperparams& hyper) {
  const auto n = static_cast<std::size_t>(features.rows());
  if (n == 0) throw Error(ErrorCode::kTooFewRows, "no training samples");
  if (targets.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "targets do not match rows");
  }
  if (feature_names.size() != static_cast<std::size_t>(features.cols())) {
    throw Error(ErrorCode::kDimensionMismatch, "names do not match columns");
  }
  for (double t : targets) {
    if (!std::isfinite(t)) {
      throw Error(ErrorCode::kNonFiniteLoss, "non-finite target");
    }
  }
  if (hyper.batch < 1 || hyper.epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch and epochs must be >= 1");
  }

  std::mt19937_64 rng(hyper.seed);
  TrainResult result;
  RegressorModel& model = result.model;
  model = RegressorModel::Initialize(static_cast<std::size_t>(features.cols()),
                                     hyper, rng);
  model.feature_names = feature_names;
  model.standardizer = Standardizer::Fit(features);

  const double t_mean =
      std::accumulate(targets.begin(), targets.end(), 0.0) / n;
  double t_var = 0.0;
  for (double t : targets) t_var += (t - t_mean) * (t - t_mean);
  const double t_sd = std::sqrt(t_var / n);
  model.target_mean = t_mean;
  model.target_scale = t_sd > 0.0 ? t_sd : 1.0;

  // Samples as columns.
  const Eigen::MatrixXd x = model.standardizer.Apply(features).transpose();
  Eigen::RowVectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    y(static_cast<Eigen::Index>(i)) = (targets[i] - t_mean) / model.target_scale;
  }

  std::vector<AdamMoments> w_moments(model.layers.size());
  std::vector<AdamMoments> b_moments(model.layers.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  long step = 0;

  result.report.seed = hyper.seed;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    Shuffle(order, rng);
    double sse = 0.0;
    for (std::size_t start = 0; start < n; start += hyper.batch) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(hyper.batch));
      const auto b = static_cast<Eigen::Index>(end - start);
      Eigen::MatrixXd xb(x.rows(), b);
      Eigen::RowVectorXd yb(b);
      for (Eigen::Index j = 0; j < b; ++j) {
        const auto src = static_cast<Eigen::Index>(order[start + j]);
        xb.col(j) = x.col(src);
        yb(j) = y(src);
      }
      const auto masks = DrawMasks(model, b, rng);
      const Gradients g = model.ComputeGradients(xb, yb, masks);
      if (!std::isfinite(g.loss)) {
        throw Error(ErrorCode::kNonFiniteLoss,
                    "loss became non-finite at epoch " + std::to_string(epoch + 1));
      }
      sse += g.mse * static_cast<double>(b);
      ++step;
      for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto& layer = model.layers[l];
        AdamUpdate({layer.weights.data(), static_cast<std::size_t>(layer.weights.size())},
                   {g.layers[l].weights.data(),
                    static_cast<std::size_t>(g.layers[l].weights.size())},
                   w_moments[l], step, hyper);
        AdamUpdate({layer.bias.data(), static_cast<std::size_t>(layer.bias.size())},
                   {g.layers[l].bias.data(), static_cast<std::size_t>(g.layers[l].bias.size())},
                   b_moments[l], step, hyper);
      }
    }
    result.report.epoch_mse.push_back(sse / n * model.target_scale *
                                      model.target_scale);
  }
  result.report.epochs = hyper.epochs;
  if (hyper.recalibrate_output) RecalibrateOutput(model, x, y, result.report);
  return result;
}

double GradientCheck(const RegressorModel& model, const Eigen::MatrixXd& inputs,
                     const Eigen::RowVectorXd& targets, double h) {
  const Gradients analytic = model.ComputeGradients(inputs, targets);
  RegressorModel probe = model;
  double worst = 0.0;
  auto check = [&](double& param, double grad) {
    const double saved = param;
    param = saved + h;
    const double up = probe.Loss(inputs, targets);
    param = saved - h;
    const double down = probe.Loss(inputs, targets);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(grad), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(grad - numeric) / denom);
  };
  for (std::size_t l = 0; l < probe.layers.size(); ++l) {
    auto& layer = probe.layers[l];
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) {
      check(layer.weights.data()[i], analytic.layers[l].weights.data()[i]);
    }
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) {
      check(layer.bias(i), analytic.layers[l].bias(i));
    }
  }
  return worst;
}

std::string ModelToJson(const RegressorModel& model) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  const auto& h = model.hyper;
  j["hyperparams"] = {{"hidden", h.hidden}, {"lr", h.lr},
                      {"beta1", h.beta1},   {"beta2", h.beta2},
                      {"eps", h.eps},       {"dropout", h.dropout},
                      {"l2_lambda", h.l2_lambda}, {"batch", h.batch},
                      {"epochs", h.epochs}, {"seed", h.seed},
                      {"recalibrate_output", h.recalibrate_output}};
  j["feature_names"] = model.feature_names;
  j["standardizer"] = {{"mean", VectorToJson(model.standardizer.mean)},
                       {"stddev", VectorToJson(model.standardizer.stddev)}};
  j["target"] = {{"mean", model.target_mean}, {"scale", model.target_scale}};
  j["layers"] = nlohmann::json::array();
  for (const auto& layer : model.layers) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.weights.size()));
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
        w.push_back(layer.weights(r, c));
      }
    }
    j["layers"].push_back({{"rows", layer.weights.rows()},
                           {"cols", layer.weights.cols()},
                           {"weights", std::move(w)},
                           {"bias", VectorToJson(layer.bias)}});
  }
  return j.dump();
}

RegressorModel ModelFromJson(std::string_view json_text) {
  RegressorModel m;
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (j.at("format").get<std::string>() != kModelFormat ||
        j.at("version").get<int>() != kModelVersion) {
      throw Error(ErrorCode::kMalformedFile, "unsupported model format");
    }
    const auto& hp = j.at("hyperparams");
    m.hyper.hidden = hp.at("hidden").get<std::vector<int>>();
    m.hyper.lr = hp.at("lr").get<double>();
    m.hyper.beta1 = hp.at("beta1").get<double>();
    m.hyper.beta2 = hp.at("beta2").get<double>();
    m.hyper.eps = hp.at("eps").get<double>();
    m.hyper.dropout = hp.at("dropout").get<double>();
    m.hyper.l2_lambda = hp.at("l2_lambda").get<double>();
    m.hyper.batch = hp.at("batch").get<int>();
    m.hyper.epochs = hp.at("epochs").get<int>();
    m.hyper.seed = hp.at("seed").get<std::uint64_t>();
    m.hyper.recalibrate_output = hp.value("recalibrate_output", false);
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.standardizer.mean = VectorFromJson(j.at("standardizer").at("mean"));
    m.standardizer.stddev = VectorFromJson(j.at("standardizer").at("stddev"));
    m.target_mean = j.at("target").at("mean").get<double>();
    m.target_scale = j.at("target").at("scale").get<double>();
    Eigen::Index expected_in = static_cast<Eigen::Index>(m.feature_names.size());
    for (const auto& jl : j.at("layers")) {
      DenseLayer layer;
      const auto rows = jl.at("rows").get<Eigen::Index>();
      const auto cols = jl.at("cols").get<Eigen::Index>();
      const auto w = jl.at("weights").get<std::vector<double>>();
      if (cols != expected_in || static_cast<Eigen::Index>(w.size()) != rows * cols) {
        throw Error(ErrorCode::kMalformedFile, "inconsistent layer shapes");
      }
      layer.weights.resize(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) layer.weights(r, c) = w[r * cols + c];
      }
      layer.bias = VectorFromJson(jl.at("bias"));
      if (layer.bias.size() != rows) {
        throw Error(ErrorCode::kMalformedFile, "bias length mismatch");
      }
      expected_in = rows;
      m.layers.push_back(std::move(layer));
    }
    if (m.layers.empty() || expected_in != 1 ||
        m.standardizer.mean.size() != static_cast<Eigen::Index>(m.feature_names.size()) ||
        m.standardizer.stddev.size() != m.standardizer.mean.size()) {
      throw Error(ErrorCode::kMalformedFile, "inconsistent model");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("model JSON: ") + e.what());
  }
  return m;
}

void SaveModel(const std::filesystem::path& path, const RegressorModel& model) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << ModelToJson(model) << '\n';
}

RegressorModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ModelFromJson(ss.str());
}

}  // namespace wellvoice
