#include "ggrbf/krr.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ggrbf/parallel.hpp"

namespace ggrbf {

KrrModel krr_fit(const Dataset& data, const KernelSpec& kernel, double lambda) {
  if (data.size() == 0) throw std::invalid_argument("krr_fit: empty dataset");
  if (!(lambda >= 0.0)) throw std::invalid_argument("krr_fit: lambda must be >= 0");

  const GramMatrix g = gram(data.inputs, kernel);
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = g(i, j);
  a.diagonal().array() += lambda;

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = data.targets[i];

  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const double min_pivot = ldlt.vectorD().minCoeff();
  if (ldlt.info() != Eigen::Success || min_pivot <= 0.0) {
    std::ostringstream msg;
    msg << "krr_fit: factorization failed, smallest pivot " << min_pivot
        << " (lambda too small for this Gram matrix)";
    throw std::runtime_error(msg.str());
  }

  // Solve with iterative refinement; smooth kernels make these systems
  // ill-conditioned well before the factorization breaks down.
  Eigen::VectorXd w = ldlt.solve(y);
  double residual = (a * w - y).norm();
  for (int step = 0; step < 3 && residual > 1e-10 * y.norm(); ++step) {
    const Eigen::VectorXd correction = ldlt.solve(y - a * w);
    const Eigen::VectorXd candidate = w + correction;
    const double candidate_residual = (a * candidate - y).norm();
    if (candidate_residual >= residual) break;
    w = candidate;
    residual = candidate_residual;
  }
  if (residual > 1e-8 * std::max(y.norm(), 1e-300)) {
    std::ostringstream msg;
    msg << "krr_fit: solve residual " << residual << " exceeds 1e-8 * ||y||"
        << " (smallest pivot " << min_pivot << ")";
    throw std::runtime_error(msg.str());
  }

  KrrModel model;
  model.centers = data.inputs;
  model.weights.assign(w.data(), w.data() + w.size());
  model.kernel = kernel;
  model.lambda = lambda;
  model.solve_residual = residual;
  return model;
}

double krr_predict(const KrrModel& model, std::span<const double> x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < model.centers.size(); ++i)
    sum += model.weights[i] * model.kernel(x, model.centers[i]);
  return sum;
}

namespace {

double mean_squared_error(const KrrModel& model, const Dataset& data) {
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double d = krr_predict(model, data.inputs[i]) - data.targets[i];
    sum += d * d;
  }
  return sum / static_cast<double>(data.size());
}

}  // namespace

RegressionReport regression_report(
    const Dataset& data,
    const std::vector<std::pair<KernelSpec, double>>& grid) {
  if (grid.empty()) throw std::invalid_argument("regression_report: empty grid");

  const auto [train, val] = split(data, 0.75, data.seed);

  RegressionReport report;
  report.dataset_tag = data.generator_tag;
  report.seed = data.seed;
  report.cells.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    RegressionCell cell;
    cell.kernel = grid[i].first;
    cell.lambda = grid[i].second;
    const KrrModel model = krr_fit(train, cell.kernel, cell.lambda);
    cell.validation_error = mean_squared_error(model, val);
    report.cells[i] = cell;
  });

  bool have_grbf = false, have_ggrbf = false;
  for (const auto& cell : report.cells) {
    if (cell.kernel.family == KernelSpec::Family::grbf) {
      if (!have_grbf || cell.validation_error < report.best_grbf.validation_error) {
        report.best_grbf = cell;
        have_grbf = true;
      }
    } else if (cell.kernel.family == KernelSpec::Family::ggrbf) {
      if (!have_ggrbf ||
          cell.validation_error < report.best_ggrbf.validation_error) {
        report.best_ggrbf = cell;
        have_ggrbf = true;
      }
    }
  }
  return report;
}

std::vector<std::pair<KernelSpec, double>> default_regression_grid() {
  const std::vector<double> sigmas = {0.5, 1.0, 2.0, 4.0, 8.0};
  const std::vector<double> sigma0s = {0.0, 0.5, 1.0, 2.0};
  const std::vector<double> lambdas = {1e-8, 1e-6, 1e-4, 1e-2};

  std::vector<std::pair<KernelSpec, double>> grid;
  for (double s : sigmas)
    for (double l : lambdas) {
      KernelSpec spec;
      spec.family = KernelSpec::Family::grbf;
      spec.sigma = s;
      grid.emplace_back(spec, l);
    }
  for (double s : sigmas)
    for (double s0 : sigma0s)
      for (double l : lambdas) {
        KernelSpec spec;
        spec.family = KernelSpec::Family::ggrbf;
        spec.sigma = s;
        spec.sigma0 = s0;
        grid.emplace_back(spec, l);
      }
  return grid;
}

}  // namespace ggrbf
