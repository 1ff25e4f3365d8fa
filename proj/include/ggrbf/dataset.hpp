#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ggrbf {

/// Point set with regression targets or classification labels.  Targets are
/// stored as doubles; classifiers interpret them as -1/+1 labels or class
/// indices.  Regeneration from (generator_tag, seed) is bit-identical.
struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  std::uint64_t seed = 0;
  std::string generator_tag;

  std::size_t size() const { return inputs.size(); }
  std::size_t dimension() const { return inputs.empty() ? 0 : inputs.front().size(); }
};

/// Regression sample of f(x) = exp((1-9x^2)/4) + tan(x) + x^(1/6) + sin(x^theta)
/// on the count-point grid, theta drawn uniform on (0,1) per sample.
/// With normalized==true the grid is x_n = n/(count-1) on [0,1]; otherwise
/// the raw integers 0..count-1.  Grid points closer than 1e-3 to a tangent
/// pole are nudged by +1e-3.
Dataset gen_test_function_1(std::size_t count, std::uint64_t seed,
                            bool normalized = true);

/// Regression sample of f(x) = exp(sin x - sin x^2) + sqrt(2 pi) |x + cos theta|
/// on the same grid conventions.
Dataset gen_test_function_2(std::size_t count, std::uint64_t seed,
                            bool normalized = true);

/// Two Gaussian blobs in the plane with +-1 labels, centers at distance
/// `separation`, unit-variance-`spread` components.
Dataset gen_two_blobs(std::size_t count, std::uint64_t seed,
                      double separation = 4.0, double spread = 1.0);

/// Two interleaved half-moons with +-1 labels and additive Gaussian noise.
Dataset gen_two_moons(std::size_t count, std::uint64_t seed, double noise = 0.1);

/// CSV with header x_0,...,x_{d-1},y.
void write_csv(const Dataset& data, std::ostream& out);
Dataset read_csv(std::istream& in);

/// Deterministic train/validation split: shuffles indices with the given
/// seed and puts the first round(fraction*n) samples in the first part.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction,
                                  std::uint64_t seed);

}  // namespace ggrbf
