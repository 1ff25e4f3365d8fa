#include "ggrbf/mercer.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "ggrbf/orthopoly.hpp"
#include "ggrbf/special_fn.hpp"

namespace ggrbf {

QuadratureGrid gauss_legendre_grid(std::size_t n, double lo, double hi) {
  if (n == 0) throw std::invalid_argument("gauss_legendre_grid: n must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("gauss_legendre_grid: lo < hi required");

  // Golub-Welsch: Jacobi matrix of the Legendre recurrence.
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(ni, ni);
  for (Eigen::Index k = 1; k < ni; ++k) {
    const double kk = static_cast<double>(k);
    const double beta = kk / std::sqrt(4.0 * kk * kk - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gauss_legendre_grid: eigen-solver failed");

  QuadratureGrid grid;
  grid.nodes.resize(n);
  grid.weights.resize(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    grid.nodes[i] = mid + half * solver.eigenvalues()(ii);
    const double v0 = solver.eigenvectors()(0, ii);
    grid.weights[i] = 2.0 * v0 * v0 * half;
  }
  return grid;
}

MercerEigenpair mercer_gaussian_pair(unsigned i, double alpha, double sigma) {
  if (!(alpha > 0.0) || !(sigma > 0.0))
    throw std::domain_error("mercer_gaussian_pair: alpha, sigma must be > 0");

  const double beta = std::sqrt(1.0 + std::pow(2.0 * sigma / alpha, 2.0));
  const double denom = 0.5 * alpha * alpha * (1.0 + beta) + 0.5 * sigma * sigma;

  MercerEigenpair pair;
  pair.index = i;
  pair.eigenvalue =
      alpha * std::pow(sigma * sigma, static_cast<double>(i)) /
      std::pow(denom, static_cast<double>(i) + 0.5);

  const double prefactor =
      std::pow(1.0 + std::pow(1.0 + 2.0 * sigma / alpha, 2.0), 0.125);
  double norm = 1.0;
  for (unsigned k = 1; k <= i; ++k) norm *= 2.0 * k;  // 2^i i!
  const double inv_sqrt_norm = 1.0 / std::sqrt(norm);
  const double gauss_rate = 0.5 * (beta - 1.0) * alpha * alpha;
  const double hermite_scale = std::sqrt(beta) * alpha;
  pair.eigenfunction = [=](double x) {
    return prefactor * inv_sqrt_norm * std::exp(-gauss_rate * x * x) *
           hermite(i, hermite_scale * x);
  };
  return pair;
}

double mercer_gaussian_ratio(double alpha, double sigma) {
  const double beta = std::sqrt(1.0 + std::pow(2.0 * sigma / alpha, 2.0));
  return sigma * sigma /
         (0.5 * alpha * alpha * (1.0 + beta) + 0.5 * sigma * sigma);
}

std::vector<MercerEigenpair> nystrom_eig(
    const std::function<double(double, double)>& kernel,
    const std::function<double(double)>& weight, const QuadratureGrid& grid,
    unsigned count) {
  const std::size_t n = grid.nodes.size();
  if (grid.weights.size() != n)
    throw std::invalid_argument("nystrom_eig: grid nodes/weights size mismatch");
  if (count > n)
    throw std::invalid_argument("nystrom_eig: count exceeds grid size");

  std::vector<double> w(n), sqrt_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = grid.weights[i] * weight(grid.nodes[i]);
    if (!(w[i] >= 0.0))
      throw std::invalid_argument("nystrom_eig: negative quadrature weight");
    sqrt_w[i] = std::sqrt(w[i]);
  }

  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i)
    for (Eigen::Index j = i; j < ni; ++j) {
      const double v = sqrt_w[i] * kernel(grid.nodes[i], grid.nodes[j]) * sqrt_w[j];
      m(i, j) = v;
      m(j, i) = v;
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("nystrom_eig: eigen-solver did not converge");

  // Eigen sorts ascending; we hand out the largest first.  Eigenvalues at
  // the rounding floor of the decomposition carry no usable eigenvector;
  // their extension is pinned to zero instead of dividing by noise.
  const double lambda_max = std::abs(solver.eigenvalues()(ni - 1));
  const double lambda_floor =
      16.0 * std::numeric_limits<double>::epsilon() * lambda_max;
  const auto nodes = std::make_shared<std::vector<double>>(grid.nodes);
  const auto scaled_w = std::make_shared<std::vector<double>>(w);
  std::vector<MercerEigenpair> pairs;
  pairs.reserve(count);
  for (unsigned idx = 0; idx < count; ++idx) {
    const Eigen::Index col = ni - 1 - static_cast<Eigen::Index>(idx);
    const double lambda = solver.eigenvalues()(col);
    auto phi_at_nodes = std::make_shared<std::vector<double>>(n);
    for (std::size_t i = 0; i < n; ++i)
      (*phi_at_nodes)[i] =
          solver.eigenvectors()(static_cast<Eigen::Index>(i), col) / sqrt_w[i];

    MercerEigenpair pair;
    pair.index = idx;
    pair.eigenvalue = lambda;
    if (std::abs(lambda) < lambda_floor) {
      pair.eigenfunction = [](double) { return 0.0; };
    } else {
      // Nystrom extension: phi(x) = (1/lambda) sum_j w_j k(x, x_j) phi(x_j).
      pair.eigenfunction = [kernel, nodes, scaled_w, phi_at_nodes,
                            lambda](double x) {
        double sum = 0.0;
        for (std::size_t j = 0; j < nodes->size(); ++j)
          sum += (*scaled_w)[j] * kernel(x, (*nodes)[j]) * (*phi_at_nodes)[j];
        return sum / lambda;
      };
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

double mercer_reconstruct(double x, double z,
                          const std::vector<MercerEigenpair>& pairs,
                          unsigned count) {
  if (count > pairs.size())
    throw std::invalid_argument("mercer_reconstruct: count exceeds available pairs");
  double sum = 0.0;
  for (unsigned i = 0; i < count; ++i)
    sum += pairs[i].eigenvalue * pairs[i].eigenfunction(x) *
           pairs[i].eigenfunction(z);
  return sum;
}

std::vector<std::vector<double>> orthonormality_gram(
    const std::function<double(unsigned, double)>& family,
    const std::function<double(double)>& weight, unsigned max_index,
    double rel_tol) {
  std::vector<std::vector<double>> table(max_index + 1,
                                         std::vector<double>(max_index + 1, 0.0));
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  for (unsigned n = 0; n <= max_index; ++n)
    for (unsigned m = n; m <= max_index; ++m) {
      const auto integrand = [&](double x) {
        return family(n, x) * family(m, x) * weight(x);
      };
      const double v = quad_real_line(integrand, opts).value;
      table[n][m] = v;
      table[m][n] = v;
    }
  return table;
}

}  // namespace ggrbf
