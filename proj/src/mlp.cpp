#include "ggrbf/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ggrbf/kernels.hpp"
#include "ggrbf/parallel.hpp"
#include "ggrbf/rng.hpp"

namespace ggrbf {

double ggrbf_activation(double x, double alpha, double beta) {
  if (alpha == 0.0 || beta == 0.0)
    throw std::domain_error("ggrbf_activation: alpha and beta must be nonzero");
  return ggrbf_radial2(x * x, 1.0 / alpha, 1.0 / beta);
}

ActivationGrads ggrbf_activation_grads(double x, double alpha, double beta) {
  if (alpha == 0.0 || beta == 0.0)
    throw std::domain_error("ggrbf_activation_grads: alpha and beta must be nonzero");
  const double x2 = x * x;
  const double a2 = alpha * alpha;
  const double b2 = beta * beta;
  const double inner = std::exp(-x2 / b2);
  const double g = std::exp(-x2 / a2) * std::exp(inner - 1.0);
  ActivationGrads out;
  out.dx = g * (-2.0 * x / a2 - (2.0 * x / b2) * inner);
  out.dalpha = g * (2.0 * x2 / (a2 * alpha));
  out.dbeta = g * (2.0 * x2 / (b2 * beta)) * inner;
  return out;
}

double alpha_relu(double x, double leak) { return x > 0.0 ? x : leak * x; }

namespace {

constexpr double kParamFloor = 1e-3;  // keeps alpha^-2 finite during training

double act_value(const MlpSpec& spec, double z, double alpha, double beta) {
  return spec.activation == Activation::ggrbf ? ggrbf_activation(z, alpha, beta)
                                              : alpha_relu(z, spec.leak);
}

}  // namespace

Eigen::VectorXd MlpModel::logits(const Eigen::VectorXd& x) const {
  Eigen::VectorXd a = (x - input_mean).cwiseQuotient(input_scale);
  const std::size_t L = spec.dense_layers();
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::VectorXd z = weights[l] * a + biases[l];
    if (l + 1 == L) return z;
    a.resize(z.size());
    for (Eigen::Index u = 0; u < z.size(); ++u) {
      const double alpha = spec.activation == Activation::ggrbf ? alphas[l](u) : 0.0;
      const double beta = spec.activation == Activation::ggrbf ? betas[l](u) : 0.0;
      a(u) = act_value(spec, z(u), alpha, beta);
    }
  }
  return a;
}

unsigned MlpModel::predict_class(std::span<const double> x) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = x[i];
  const Eigen::VectorXd out = logits(v);
  Eigen::Index best = 0;
  out.maxCoeff(&best);
  return static_cast<unsigned>(best);
}

std::vector<double> MlpModel::flatten() const {
  std::vector<double> v;
  for (const auto& w : weights) v.insert(v.end(), w.data(), w.data() + w.size());
  for (const auto& b : biases) v.insert(v.end(), b.data(), b.data() + b.size());
  for (const auto& a : alphas) v.insert(v.end(), a.data(), a.data() + a.size());
  for (const auto& b : betas) v.insert(v.end(), b.data(), b.data() + b.size());
  return v;
}

void MlpModel::unflatten(std::span<const double> values) {
  std::size_t pos = 0;
  const auto take = [&](auto& dst) {
    std::copy(values.begin() + pos, values.begin() + pos + dst.size(), dst.data());
    pos += dst.size();
  };
  for (auto& w : weights) take(w);
  for (auto& b : biases) take(b);
  for (auto& a : alphas) take(a);
  for (auto& b : betas) take(b);
  if (pos != values.size())
    throw std::invalid_argument("MlpModel::unflatten: size mismatch");
}

MlpModel mlp_init(const MlpSpec& spec, std::uint64_t seed) {
  if (spec.layers.size() < 2)
    throw std::invalid_argument("mlp_init: need at least input and output layers");
  MlpModel model;
  model.spec = spec;
  model.seed = seed;
  Rng rng(seed);
  const std::size_t L = spec.dense_layers();
  for (std::size_t l = 0; l < L; ++l) {
    const auto rows = static_cast<Eigen::Index>(spec.layers[l + 1]);
    const auto cols = static_cast<Eigen::Index>(spec.layers[l]);
    Eigen::MatrixXd w(rows, cols);
    const double scale = std::sqrt(2.0 / static_cast<double>(cols));
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = scale * rng.normal();
    model.weights.push_back(std::move(w));
    model.biases.push_back(Eigen::VectorXd::Zero(rows));
  }
  if (spec.activation == Activation::ggrbf) {
    for (std::size_t l = 0; l + 1 < L; ++l) {
      const auto units = static_cast<Eigen::Index>(spec.layers[l + 1]);
      Eigen::VectorXd a(units), b(units);
      for (Eigen::Index u = 0; u < units; ++u) {
        a(u) = std::max(rng.uniform01(), kParamFloor);
        b(u) = std::max(rng.uniform01(), kParamFloor);
      }
      model.alphas.push_back(std::move(a));
      model.betas.push_back(std::move(b));
    }
  }
  const auto d = static_cast<Eigen::Index>(spec.layers.front());
  model.input_mean = Eigen::VectorXd::Zero(d);
  model.input_scale = Eigen::VectorXd::Ones(d);
  return model;
}

std::vector<unsigned> class_labels(const Dataset& data) {
  std::vector<unsigned> labels;
  labels.reserve(data.size());
  for (double t : data.targets) {
    if (t == -1.0)
      labels.push_back(0);
    else if (t == 1.0)
      labels.push_back(1);
    else if (t >= 0.0 && t == std::floor(t))
      labels.push_back(static_cast<unsigned>(t));
    else
      throw std::invalid_argument("class_labels: target is not a class label");
  }
  return labels;
}

namespace {

struct ForwardPass {
  std::vector<Eigen::VectorXd> pre;   // z per dense layer
  std::vector<Eigen::VectorXd> post;  // activations, post[0] is the input
};

ForwardPass forward(const MlpModel& model, const Eigen::VectorXd& x) {
  ForwardPass fp;
  fp.post.push_back((x - model.input_mean).cwiseQuotient(model.input_scale));
  const std::size_t L = model.spec.dense_layers();
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::VectorXd z = model.weights[l] * fp.post.back() + model.biases[l];
    fp.pre.push_back(z);
    if (l + 1 == L) break;
    Eigen::VectorXd a(z.size());
    for (Eigen::Index u = 0; u < z.size(); ++u) {
      const double alpha =
          model.spec.activation == Activation::ggrbf ? model.alphas[l](u) : 0.0;
      const double beta =
          model.spec.activation == Activation::ggrbf ? model.betas[l](u) : 0.0;
      a(u) = act_value(model.spec, z(u), alpha, beta);
    }
    fp.post.push_back(std::move(a));
  }
  return fp;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp();
  return e / e.sum();
}

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::vector<Eigen::VectorXd> alphas;
  std::vector<Eigen::VectorXd> betas;

  static Gradients zeros_like(const MlpModel& model) {
    Gradients g;
    for (const auto& w : model.weights)
      g.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    for (const auto& b : model.biases)
      g.biases.push_back(Eigen::VectorXd::Zero(b.size()));
    for (const auto& a : model.alphas)
      g.alphas.push_back(Eigen::VectorXd::Zero(a.size()));
    for (const auto& b : model.betas)
      g.betas.push_back(Eigen::VectorXd::Zero(b.size()));
    return g;
  }
};

// Accumulates dLoss/dparams for one sample into grads; returns the sample loss.
double backward(const MlpModel& model, const Eigen::VectorXd& x, unsigned label,
                Gradients& grads) {
  const ForwardPass fp = forward(model, x);
  const std::size_t L = model.spec.dense_layers();
  const Eigen::VectorXd probs = softmax(fp.pre.back());
  const double loss = -std::log(std::max(probs(static_cast<Eigen::Index>(label)),
                                         1e-300));

  Eigen::VectorXd delta = probs;  // dLoss/dz for the output layer
  delta(static_cast<Eigen::Index>(label)) -= 1.0;

  for (std::size_t l = L; l-- > 0;) {
    grads.weights[l] += delta * fp.post[l].transpose();
    grads.biases[l] += delta;
    if (l == 0) break;
    Eigen::VectorXd upstream = model.weights[l].transpose() * delta;
    const Eigen::VectorXd& z = fp.pre[l - 1];
    delta.resize(z.size());
    for (Eigen::Index u = 0; u < z.size(); ++u) {
      if (model.spec.activation == Activation::ggrbf) {
        const ActivationGrads ag =
            ggrbf_activation_grads(z(u), model.alphas[l - 1](u), model.betas[l - 1](u));
        grads.alphas[l - 1](u) += upstream(u) * ag.dalpha;
        grads.betas[l - 1](u) += upstream(u) * ag.dbeta;
        delta(u) = upstream(u) * ag.dx;
      } else {
        delta(u) = upstream(u) * (z(u) > 0.0 ? 1.0 : model.spec.leak);
      }
    }
  }
  return loss;
}

Eigen::VectorXd to_vector(const std::vector<double>& x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = x[i];
  return v;
}

}  // namespace

double mlp_batch_loss(const MlpModel& model,
                      const std::vector<std::vector<double>>& inputs,
                      const std::vector<unsigned>& labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Eigen::VectorXd probs = softmax(model.logits(to_vector(inputs[i])));
    total += -std::log(
        std::max(probs(static_cast<Eigen::Index>(labels[i])), 1e-300));
  }
  return total / static_cast<double>(inputs.size());
}

std::vector<double> mlp_batch_gradient(
    const MlpModel& model, const std::vector<std::vector<double>>& inputs,
    const std::vector<unsigned>& labels) {
  Gradients grads = Gradients::zeros_like(model);
  for (std::size_t i = 0; i < inputs.size(); ++i)
    backward(model, to_vector(inputs[i]), labels[i], grads);
  const double inv = 1.0 / static_cast<double>(inputs.size());

  std::vector<double> flat;
  for (const auto& w : grads.weights)
    for (Eigen::Index i = 0; i < w.size(); ++i) flat.push_back(w.data()[i] * inv);
  for (const auto& b : grads.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) flat.push_back(b.data()[i] * inv);
  for (const auto& a : grads.alphas)
    for (Eigen::Index i = 0; i < a.size(); ++i) flat.push_back(a.data()[i] * inv);
  for (const auto& b : grads.betas)
    for (Eigen::Index i = 0; i < b.size(); ++i) flat.push_back(b.data()[i] * inv);
  return flat;
}

MlpModel mlp_train(const MlpSpec& spec, const Dataset& data,
                   const TrainConfig& config, TrainTrace* trace) {
  const std::vector<unsigned> labels = class_labels(data);
  for (unsigned c : labels)
    if (c >= spec.layers.back())
      throw std::invalid_argument("mlp_train: class index exceeds output width");

  MlpModel model = mlp_init(spec, config.seed);

  // Standardize inputs on training statistics (kept inside the model so
  // prediction applies the same transform).
  const auto d = static_cast<Eigen::Index>(data.dimension());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& row : data.inputs) mean += to_vector(row);
  mean /= static_cast<double>(data.size());
  Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
  for (const auto& row : data.inputs) {
    const Eigen::VectorXd c = to_vector(row) - mean;
    var += c.cwiseProduct(c);
  }
  var /= static_cast<double>(data.size());
  model.input_mean = mean;
  model.input_scale = var.cwiseSqrt().cwiseMax(1e-12);

  Gradients velocity = Gradients::zeros_like(model);
  Rng rng(config.seed ^ 0xa02bdbf7bb3c0a7ull);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (unsigned epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.uniform_int(i)]);

    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      Gradients grads = Gradients::zeros_like(model);
      for (std::size_t idx = start; idx < stop; ++idx)
        backward(model, to_vector(data.inputs[order[idx]]), labels[order[idx]],
                 grads);
      const double inv = 1.0 / static_cast<double>(stop - start);

      const auto update = [&](Eigen::MatrixXd& param, Eigen::MatrixXd& vel,
                              const Eigen::MatrixXd& grad) {
        vel = config.momentum * vel - config.learning_rate * inv * grad;
        param += vel;
      };
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        update(model.weights[l], velocity.weights[l], grads.weights[l]);
        Eigen::MatrixXd bg = grads.biases[l], bv = velocity.biases[l],
                        bp = model.biases[l];
        update(bp, bv, bg);
        model.biases[l] = bp;
        velocity.biases[l] = bv;
      }
      for (std::size_t l = 0; l < model.alphas.size(); ++l) {
        Eigen::MatrixXd ap = model.alphas[l], av = velocity.alphas[l];
        update(ap, av, grads.alphas[l]);
        model.alphas[l] = ap.cwiseMax(kParamFloor);
        velocity.alphas[l] = av;
        Eigen::MatrixXd bp = model.betas[l], bv = velocity.betas[l];
        update(bp, bv, grads.betas[l]);
        model.betas[l] = bp.cwiseMax(kParamFloor);
        velocity.betas[l] = bv;
      }
    }

    const double loss = mlp_batch_loss(model, data.inputs, labels);
    if (!std::isfinite(loss)) {
      if (trace) trace->diverged = true;
      throw std::runtime_error("mlp_train: loss diverged at epoch " +
                               std::to_string(epoch));
    }
    if (trace) {
      trace->epoch_loss.push_back(loss);
      trace->epoch_accuracy.push_back(mlp_accuracy(model, data));
    }
  }
  return model;
}

double mlp_accuracy(const MlpModel& model, const Dataset& data) {
  const std::vector<unsigned> labels = class_labels(data);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (model.predict_class(data.inputs[i]) == labels[i]) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(data.size());
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double iqr_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto quartile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return quartile(0.75) - quartile(0.25);
}

}  // namespace

NnReport nn_report(const MlpSpec& spec_ggrbf, const MlpSpec& spec_relu,
                   const Dataset& data, const TrainConfig& config,
                   const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() < 3)
    throw std::invalid_argument("nn_report: at least 3 seeds required");

  NnReport report;
  report.dataset_tag = data.generator_tag;
  report.seeds = seeds;
  report.spec_ggrbf = spec_ggrbf;
  report.spec_relu = spec_relu;
  report.config = config;

  const std::vector<const MlpSpec*> specs = {&spec_ggrbf, &spec_relu};
  std::vector<std::vector<double>> accuracy(2,
                                            std::vector<double>(seeds.size()));
  parallel_for(2 * seeds.size(), [&](std::size_t task) {
    const std::size_t which = task / seeds.size();
    const std::size_t si = task % seeds.size();
    const auto [train, val] = split(data, 0.75, seeds[si]);
    TrainConfig cfg = config;
    cfg.seed = seeds[si];
    const MlpModel model = mlp_train(*specs[which], train, cfg);
    accuracy[which][si] = mlp_accuracy(model, val);
  });

  NnRow ggrbf_row;
  ggrbf_row.method = "ggrbf";
  ggrbf_row.per_seed_accuracy_pct = accuracy[0];
  ggrbf_row.median_accuracy_pct = median_of(accuracy[0]);
  ggrbf_row.iqr_accuracy_pct = iqr_of(accuracy[0]);
  ggrbf_row.reference_accuracy_pct = 97.74;
  ggrbf_row.reference_dcnn_accuracy_pct = 96.33;

  NnRow relu_row;
  relu_row.method = "alpha_relu";
  relu_row.per_seed_accuracy_pct = accuracy[1];
  relu_row.median_accuracy_pct = median_of(accuracy[1]);
  relu_row.iqr_accuracy_pct = iqr_of(accuracy[1]);
  relu_row.reference_accuracy_pct = 94.76;
  relu_row.reference_dcnn_accuracy_pct = 91.87;

  report.rows = {ggrbf_row, relu_row};
  return report;
}

}  // namespace ggrbf
