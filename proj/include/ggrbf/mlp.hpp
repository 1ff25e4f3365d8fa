#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ggrbf/dataset.hpp"

namespace ggrbf {

/// Learnable radial activation exp(-x^2/alpha^2) exp(exp(-x^2/beta^2) - 1):
/// even, equal to 1 at x = 0, Gaussian decay in both tails.  Shares its
/// implementation with the GGRBF kernel at sigma = 1/alpha, sigma0 = 1/beta.
double ggrbf_activation(double x, double alpha, double beta);

struct ActivationGrads {
  double dx = 0.0;
  double dalpha = 0.0;
  double dbeta = 0.0;
};

/// Analytic partials of ggrbf_activation with respect to x, alpha, beta.
ActivationGrads ggrbf_activation_grads(double x, double alpha, double beta);

/// Leaky rectifier: x for x > 0, leak * x otherwise.
double alpha_relu(double x, double leak);

enum class Activation { ggrbf, alpha_relu };

struct MlpSpec {
  std::vector<unsigned> layers;  // {inputs, hidden..., classes}
  Activation activation = Activation::ggrbf;
  double leak = 0.1;

  std::size_t dense_layers() const { return layers.size() - 1; }
};

/// Dense network with softmax cross-entropy head.  GGRBF hidden layers
/// carry one learnable (alpha, beta) pair per unit.
struct MlpModel {
  MlpSpec spec;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::vector<Eigen::VectorXd> alphas;  // per hidden layer, ggrbf only
  std::vector<Eigen::VectorXd> betas;
  Eigen::VectorXd input_mean;  // standardization learned from training data
  Eigen::VectorXd input_scale;
  std::uint64_t seed = 0;

  Eigen::VectorXd logits(const Eigen::VectorXd& x) const;
  unsigned predict_class(std::span<const double> x) const;

  std::vector<double> flatten() const;
  void unflatten(std::span<const double> values);
};

struct TrainConfig {
  double learning_rate = 1e-2;
  double momentum = 0.9;
  unsigned batch_size = 16;
  unsigned epochs = 500;
  std::uint64_t seed = 0;
};

struct TrainTrace {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;
  bool diverged = false;
};

/// Fresh model with seeded initialization: He-scaled normal weights, zero
/// biases, activation parameters uniform on (0,1) clamped to >= 1e-3.
MlpModel mlp_init(const MlpSpec& spec, std::uint64_t seed);

/// Class indices from dataset targets (-1/+1 map to 0/1).
std::vector<unsigned> class_labels(const Dataset& data);

/// Mean softmax cross-entropy of the model on the given sample.
double mlp_batch_loss(const MlpModel& model,
                      const std::vector<std::vector<double>>& inputs,
                      const std::vector<unsigned>& labels);

/// Gradient of mlp_batch_loss in flatten() order, by backpropagation.
std::vector<double> mlp_batch_gradient(const MlpModel& model,
                                       const std::vector<std::vector<double>>& inputs,
                                       const std::vector<unsigned>& labels);

/// Minibatch SGD with momentum; deterministic under a fixed config.  Aborts
/// with a diagnostic if the loss stops being finite.
MlpModel mlp_train(const MlpSpec& spec, const Dataset& data,
                   const TrainConfig& config, TrainTrace* trace = nullptr);

double mlp_accuracy(const MlpModel& model, const Dataset& data);

struct NnRow {
  std::string method;  // "ggrbf" or "alpha_relu"
  double median_accuracy_pct = 0.0;
  double iqr_accuracy_pct = 0.0;
  std::vector<double> per_seed_accuracy_pct;
  double reference_accuracy_pct = 0.0;
  double reference_dcnn_accuracy_pct = 0.0;
};

struct NnReport {
  std::string dataset_tag;
  std::vector<std::uint64_t> seeds;
  MlpSpec spec_ggrbf;
  MlpSpec spec_relu;
  TrainConfig config;
  std::vector<NnRow> rows;
};

/// Trains the activation pair on the same data across >= 3 seeds and
/// reports held-out accuracy (median and interquartile range).
NnReport nn_report(const MlpSpec& spec_ggrbf, const MlpSpec& spec_relu,
                   const Dataset& data, const TrainConfig& config,
                   const std::vector<std::uint64_t>& seeds);

}  // namespace ggrbf
