#include "ggrbf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ggrbf/rng.hpp"

namespace ggrbf {

namespace {

std::vector<double> sample_grid(std::size_t count, bool normalized) {
  std::vector<double> xs(count);
  for (std::size_t n = 0; n < count; ++n) {
    double x = static_cast<double>(n);
    if (normalized) x /= static_cast<double>(count - 1);
    // Tangent-pole policy: nudge anything within 1e-3 of a pole of tan.
    if (std::abs(std::cos(x)) < 1e-3) x += 1e-3;
    xs[n] = x;
  }
  return xs;
}

std::string grid_tag(bool normalized) {
  return normalized ? "unit-grid" : "integer-grid";
}

}  // namespace

Dataset gen_test_function_1(std::size_t count, std::uint64_t seed,
                            bool normalized) {
  if (count < 2)
    throw std::invalid_argument("gen_test_function_1: count must be >= 2");
  Dataset data;
  data.seed = seed;
  data.generator_tag = "test-function-1:" + grid_tag(normalized) +
                       ",count=" + std::to_string(count);
  Rng rng(seed);
  for (double x : sample_grid(count, normalized)) {
    const double theta = rng.uniform_open01();
    const double y = std::exp((1.0 - 9.0 * x * x) / 4.0) + std::tan(x) +
                     std::pow(x, 1.0 / 6.0) + std::sin(std::pow(x, theta));
    data.inputs.push_back({x});
    data.targets.push_back(y);
  }
  return data;
}

Dataset gen_test_function_2(std::size_t count, std::uint64_t seed,
                            bool normalized) {
  if (count < 2)
    throw std::invalid_argument("gen_test_function_2: count must be >= 2");
  Dataset data;
  data.seed = seed;
  data.generator_tag = "test-function-2:" + grid_tag(normalized) +
                       ",count=" + std::to_string(count);
  Rng rng(seed);
  for (double x : sample_grid(count, normalized)) {
    const double theta = rng.uniform_open01();
    const double y = std::exp(std::sin(x) - std::sin(x * x)) +
                     std::sqrt(2.0 * std::numbers::pi) *
                         std::abs(x + std::cos(theta));
    data.inputs.push_back({x});
    data.targets.push_back(y);
  }
  return data;
}

Dataset gen_two_blobs(std::size_t count, std::uint64_t seed, double separation,
                      double spread) {
  Dataset data;
  data.seed = seed;
  std::ostringstream tag;
  tag << "two-blobs:count=" << count << ",separation=" << separation
      << ",spread=" << spread;
  data.generator_tag = tag.str();
  Rng rng(seed);
  const double half = 0.5 * separation;
  for (std::size_t i = 0; i < count; ++i) {
    const double label = (i % 2 == 0) ? 1.0 : -1.0;
    const double cx = label * half;
    data.inputs.push_back(
        {cx + spread * rng.normal(), spread * rng.normal()});
    data.targets.push_back(label);
  }
  return data;
}

Dataset gen_two_moons(std::size_t count, std::uint64_t seed, double noise) {
  Dataset data;
  data.seed = seed;
  std::ostringstream tag;
  tag << "two-moons:count=" << count << ",noise=" << noise;
  data.generator_tag = tag.str();
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const double label = (i % 2 == 0) ? 1.0 : -1.0;
    const double t = std::numbers::pi * rng.uniform01();
    double x, y;
    if (label > 0) {
      x = std::cos(t);
      y = std::sin(t);
    } else {
      x = 1.0 - std::cos(t);
      y = 0.5 - std::sin(t);
    }
    data.inputs.push_back({x + noise * rng.normal(), y + noise * rng.normal()});
    data.targets.push_back(label);
  }
  return data;
}

void write_csv(const Dataset& data, std::ostream& out) {
  const std::size_t d = data.dimension();
  for (std::size_t i = 0; i < d; ++i) out << "x_" << i << ",";
  out << "y\n";
  char buf[40];
  for (std::size_t row = 0; row < data.size(); ++row) {
    for (std::size_t i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.inputs[row][i]);
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.targets[row]);
    out << buf << "\n";
  }
}

Dataset read_csv(std::istream& in) {
  Dataset data;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty input");
  const std::size_t columns = 1 + std::count(line.begin(), line.end(), ',');
  if (columns < 2) throw std::runtime_error("read_csv: need at least x_0 and y");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    if (values.size() != columns)
      throw std::runtime_error("read_csv: ragged row");
    data.targets.push_back(values.back());
    values.pop_back();
    data.inputs.push_back(std::move(values));
  }
  return data;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction,
                                  std::uint64_t seed) {
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw std::invalid_argument("split: fraction must be in [0,1]");
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.uniform_int(i)]);

  const auto n_train =
      static_cast<std::size_t>(std::lround(train_fraction * data.size()));
  Dataset train, val;
  train.seed = val.seed = data.seed;
  train.generator_tag = data.generator_tag + "|train";
  val.generator_tag = data.generator_tag + "|val";
  for (std::size_t i = 0; i < order.size(); ++i) {
    Dataset& dst = (i < n_train) ? train : val;
    dst.inputs.push_back(data.inputs[order[i]]);
    dst.targets.push_back(data.targets[order[i]]);
  }
  return {std::move(train), std::move(val)};
}

}  // namespace ggrbf
