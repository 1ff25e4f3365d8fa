#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ggrbf {

/// Inverse length-scale pair of the generalized Gaussian kernel:
/// sigma > 0 drives the Gaussian factor, sigma0 >= 0 the generalization.
struct KernelParams {
  double sigma = 1.0;
  double sigma0 = 0.0;

  /// Dimensionless ratio sigma0^2 / sigma^2.
  double sigma_hat() const { return (sigma0 * sigma0) / (sigma * sigma); }

  void validate() const;
};

/// exp(-sigma^2 ||x-z||^2) on the squared radial distance r2.
double grbf_radial2(double r2, double sigma);

/// exp(-sigma^2 r^2) * exp(exp(-sigma0^2 r^2) - 1) on the squared distance.
/// Shared by the kernel and the neural activation so the two are
/// bit-identical for matching parameters.
double ggrbf_radial2(double r2, double sigma, double sigma0);

double grbf(std::span<const double> x, std::span<const double> z, double sigma);
double ggrbf(std::span<const double> x, std::span<const double> z,
             const KernelParams& params);
double sigmoid_kernel(std::span<const double> x, std::span<const double> z,
                      double gamma, double coef0);

/// Parsed kernel selector, grammar shared by the CLI and configs:
///   grbf:sigma=<v>
///   ggrbf:sigma=<v>,sigma0=<v>
///   sigmoid:gamma=<v>,coef0=<v>     (gamma defaults to 1/d)
struct KernelSpec {
  enum class Family { grbf, ggrbf, sigmoid };

  Family family = Family::grbf;
  double sigma = 1.0;
  double sigma0 = 0.0;
  std::optional<double> gamma;  // sigmoid only; 1/d when unset
  double coef0 = 0.0;

  static KernelSpec parse(const std::string& selector);

  /// Canonical selector string (round-trips through parse).
  std::string tag() const;

  double operator()(std::span<const double> x, std::span<const double> z) const;
};

/// Dense symmetric table of pairwise kernel values.  Entries are computed
/// once per unordered pair and mirrored, so symmetry is exact.
class GramMatrix {
 public:
  GramMatrix(std::size_t size, std::string kernel_tag);

  std::size_t size() const { return size_; }
  const std::string& kernel_tag() const { return kernel_tag_; }

  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * size_ + j];
  }
  void set(std::size_t i, std::size_t j, double v) {
    entries_[i * size_ + j] = v;
    entries_[j * size_ + i] = v;
  }
  const std::vector<double>& entries() const { return entries_; }

 private:
  std::size_t size_;
  std::string kernel_tag_;
  std::vector<double> entries_;
};

GramMatrix gram(const std::vector<std::vector<double>>& points,
                const KernelSpec& kernel);

/// Smallest eigenvalue of the symmetric table, the PSD diagnostic.
double min_eigenvalue(const GramMatrix& g);

}  // namespace ggrbf
