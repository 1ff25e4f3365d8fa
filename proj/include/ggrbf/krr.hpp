#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ggrbf/dataset.hpp"
#include "ggrbf/kernels.hpp"

namespace ggrbf {

/// Kernel ridge regressor: dual weights solving (K + lambda I) w = y.
struct KrrModel {
  std::vector<std::vector<double>> centers;
  std::vector<double> weights;
  KernelSpec kernel;
  double lambda = 0.0;
  double solve_residual = 0.0;  // ||(K + lambda I) w - y|| after the solve
};

/// Fits by symmetric positive-definite factorization; throws (reporting the
/// smallest pivot) when the regularized Gram is numerically indefinite or
/// the normal-equation residual exceeds 1e-8 ||y||.
KrrModel krr_fit(const Dataset& data, const KernelSpec& kernel, double lambda);

double krr_predict(const KrrModel& model, std::span<const double> x);

/// One grid candidate of a regression comparison.
struct RegressionCell {
  KernelSpec kernel;
  double lambda = 0.0;
  double validation_error = 0.0;  // mean squared error on the held-out part
};

struct RegressionReport {
  std::string dataset_tag;
  std::uint64_t seed = 0;
  std::vector<RegressionCell> cells;         // every grid candidate, in grid order
  RegressionCell best_grbf;
  RegressionCell best_ggrbf;
  double reference_grbf = 0.0;               // published comparison values
  double reference_ggrbf = 0.0;
};

/// Fits every (kernel, lambda) candidate on a deterministic 75/25 split and
/// reports the per-family minima.  Grid cells are evaluated independently
/// (parallel-safe) and reported in grid order.
RegressionReport regression_report(
    const Dataset& data,
    const std::vector<std::pair<KernelSpec, double>>& grid);

/// Default comparison grids; the GGRBF grid contains every GRBF candidate
/// as its sigma0 = 0 slice, which forces best GGRBF <= best GRBF.
std::vector<std::pair<KernelSpec, double>> default_regression_grid();

}  // namespace ggrbf
