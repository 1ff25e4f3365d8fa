#include "ggrbf/kernels.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ggrbf {

void KernelParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("KernelParams: sigma must be > 0");
  if (!(sigma0 >= 0.0))
    throw std::invalid_argument("KernelParams: sigma0 must be >= 0");
}

namespace {

double squared_distance(std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size())
    throw std::invalid_argument("kernel: point dimensions differ");
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - z[i];
    r2 += d * d;
  }
  return r2;
}

double dot(std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size())
    throw std::invalid_argument("kernel: point dimensions differ");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * z[i];
  return s;
}

}  // namespace

double grbf_radial2(double r2, double sigma) {
  return std::exp(-(sigma * sigma) * r2);
}

double ggrbf_radial2(double r2, double sigma, double sigma0) {
  // With sigma0 == 0 the second factor is exp(exp(0)-1) == 1 exactly, so
  // the value reduces bit-identically to the plain Gaussian kernel.
  return std::exp(-(sigma * sigma) * r2) *
         std::exp(std::exp(-(sigma0 * sigma0) * r2) - 1.0);
}

double grbf(std::span<const double> x, std::span<const double> z, double sigma) {
  return grbf_radial2(squared_distance(x, z), sigma);
}

double ggrbf(std::span<const double> x, std::span<const double> z,
             const KernelParams& params) {
  return ggrbf_radial2(squared_distance(x, z), params.sigma, params.sigma0);
}

double sigmoid_kernel(std::span<const double> x, std::span<const double> z,
                      double gamma, double coef0) {
  return std::tanh(gamma * dot(x, z) + coef0);
}

namespace {

std::map<std::string, double> parse_kv(const std::string& body,
                                       const std::string& selector) {
  std::map<std::string, double> kv;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("kernel selector '" + selector +
                                  "': expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    try {
      kv[key] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("kernel selector '" + selector +
                                  "': bad numeric value for '" + key + "'");
    }
  }
  return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key,
            const std::string& selector) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("kernel selector '" + selector +
                                "': missing required parameter '" + key + "'");
  const double v = it->second;
  kv.erase(it);
  return v;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

KernelSpec KernelSpec::parse(const std::string& selector) {
  const auto colon = selector.find(':');
  const std::string name = selector.substr(0, colon);
  std::map<std::string, double> kv =
      colon == std::string::npos ? std::map<std::string, double>{}
                                 : parse_kv(selector.substr(colon + 1), selector);

  KernelSpec spec;
  if (name == "grbf") {
    spec.family = Family::grbf;
    spec.sigma = take(kv, "sigma", selector);
    if (!(spec.sigma > 0.0))
      throw std::invalid_argument("kernel selector '" + selector +
                                  "': sigma must be > 0");
  } else if (name == "ggrbf") {
    spec.family = Family::ggrbf;
    spec.sigma = take(kv, "sigma", selector);
    spec.sigma0 = take(kv, "sigma0", selector);
    KernelParams{spec.sigma, spec.sigma0}.validate();
  } else if (name == "sigmoid") {
    spec.family = Family::sigmoid;
    if (kv.count("gamma")) spec.gamma = take(kv, "gamma", selector);
    if (kv.count("coef0")) spec.coef0 = take(kv, "coef0", selector);
  } else {
    throw std::invalid_argument("unknown kernel family '" + name +
                                "' (expected grbf, ggrbf or sigmoid)");
  }
  if (!kv.empty())
    throw std::invalid_argument("kernel selector '" + selector +
                                "': unknown parameter '" + kv.begin()->first + "'");
  return spec;
}

std::string KernelSpec::tag() const {
  switch (family) {
    case Family::grbf:
      return "grbf:sigma=" + format_value(sigma);
    case Family::ggrbf:
      return "ggrbf:sigma=" + format_value(sigma) +
             ",sigma0=" + format_value(sigma0);
    case Family::sigmoid:
      return "sigmoid:gamma=" + (gamma ? format_value(*gamma) : std::string("auto")) +
             ",coef0=" + format_value(coef0);
  }
  return {};
}

double KernelSpec::operator()(std::span<const double> x,
                              std::span<const double> z) const {
  switch (family) {
    case Family::grbf:
      return grbf(x, z, sigma);
    case Family::ggrbf:
      return ggrbf(x, z, KernelParams{sigma, sigma0});
    case Family::sigmoid:
      return sigmoid_kernel(x, z, gamma.value_or(1.0 / static_cast<double>(x.size())),
                            coef0);
  }
  return 0.0;
}

GramMatrix::GramMatrix(std::size_t size, std::string kernel_tag)
    : size_(size), kernel_tag_(std::move(kernel_tag)), entries_(size * size, 0.0) {}

GramMatrix gram(const std::vector<std::vector<double>>& points,
                const KernelSpec& kernel) {
  if (points.empty()) throw std::invalid_argument("gram: empty point set");
  const std::size_t d = points.front().size();
  for (const auto& p : points)
    if (p.size() != d)
      throw std::invalid_argument("gram: points have mixed dimensions");

  GramMatrix g(points.size(), kernel.tag());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i; j < points.size(); ++j)
      g.set(i, j, kernel(points[i], points[j]));
  return g;
}

double min_eigenvalue(const GramMatrix& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = g(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("min_eigenvalue: eigen-solver did not converge");
  return solver.eigenvalues().minCoeff();
}

}  // namespace ggrbf
