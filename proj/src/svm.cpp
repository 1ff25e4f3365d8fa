#include "ggrbf/svm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ggrbf/parallel.hpp"

namespace ggrbf {

double SvmModel::decision(std::span<const double> x) const {
  double sum = bias;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (alphas[i] > 0.0) sum += alphas[i] * labels[i] * kernel(x, points[i]);
  return sum;
}

double SvmModel::predict(std::span<const double> x) const {
  return decision(x) >= 0.0 ? 1.0 : -1.0;
}

namespace {

struct SmoState {
  const GramMatrix* k = nullptr;
  const std::vector<double>* y = nullptr;
  std::vector<double> alpha;
  std::vector<double> error;  // decision(x_i) - y_i, kept incrementally
  double b = 0.0;
  double C = 1.0;
  double tol = 1e-3;

  double decision(std::size_t i) const {
    double sum = b;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      if (alpha[j] > 0.0) sum += alpha[j] * (*y)[j] * (*k)(j, i);
    return sum;
  }

  bool take_step(std::size_t i, std::size_t j) {
    if (i == j) return false;
    const double yi = (*y)[i], yj = (*y)[j];
    const double ai_old = alpha[i], aj_old = alpha[j];
    const double Ei = error[i], Ej = error[j];

    double lo, hi;
    if (yi != yj) {
      lo = std::max(0.0, aj_old - ai_old);
      hi = std::min(C, C + aj_old - ai_old);
    } else {
      lo = std::max(0.0, ai_old + aj_old - C);
      hi = std::min(C, ai_old + aj_old);
    }
    if (lo >= hi) return false;

    const double kii = (*k)(i, i), kjj = (*k)(j, j), kij = (*k)(i, j);
    const double eta = kii + kjj - 2.0 * kij;
    if (eta <= 0.0) return false;  // degenerate pair (duplicate points)

    double aj = aj_old + yj * (Ei - Ej) / eta;
    aj = std::clamp(aj, lo, hi);
    if (std::abs(aj - aj_old) < 1e-12 * (aj + aj_old + 1e-12)) return false;
    double ai = ai_old + yi * yj * (aj_old - aj);
    // The pair update keeps ai inside [0, C] in exact arithmetic; snap the
    // last few ulps so dual feasibility holds exactly.
    if (ai < 0.0 && ai > -1e-10) ai = 0.0;
    if (ai > C && ai < C + 1e-10) ai = C;

    // Bias update keeping a KKT-consistent value for the changed pair.
    const double b1 = b - Ei - yi * (ai - ai_old) * kii - yj * (aj - aj_old) * kij;
    const double b2 = b - Ej - yi * (ai - ai_old) * kij - yj * (aj - aj_old) * kjj;
    double b_new;
    if (ai > 0.0 && ai < C)
      b_new = b1;
    else if (aj > 0.0 && aj < C)
      b_new = b2;
    else
      b_new = 0.5 * (b1 + b2);

    const double db = b_new - b;
    for (std::size_t t = 0; t < alpha.size(); ++t)
      error[t] += yi * (ai - ai_old) * (*k)(i, t) +
                  yj * (aj - aj_old) * (*k)(j, t) + db;
    alpha[i] = ai;
    alpha[j] = aj;
    b = b_new;
    return true;
  }

  bool violates_kkt(std::size_t i) const {
    const double r = (*y)[i] * error[i];  // y_i f(x_i) - 1
    return (r < -tol && alpha[i] < C) || (r > tol && alpha[i] > 0.0);
  }

  // Second-choice heuristic: the partner maximizing |E_i - E_j|, then a
  // sweep over all indices.  Fully deterministic.
  bool examine(std::size_t i) {
    if (!violates_kkt(i)) return false;
    std::size_t best = i;
    double best_gap = -1.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (j == i) continue;
      const double gap = std::abs(error[i] - error[j]);
      if (gap > best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    if (best != i && take_step(i, best)) return true;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      if (j != i && take_step(i, j)) return true;
    return false;
  }
};

}  // namespace

SvmModel smo_fit(const Dataset& data, const KernelSpec& kernel, double C,
                 double tol, unsigned max_passes, unsigned max_sweeps) {
  if (!(C > 0.0)) throw std::invalid_argument("smo_fit: C must be > 0");
  bool has_pos = false, has_neg = false;
  for (double t : data.targets) {
    if (t == 1.0) has_pos = true;
    else if (t == -1.0) has_neg = true;
    else throw std::invalid_argument("smo_fit: labels must be -1 or +1");
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("smo_fit: both classes must be present");

  const GramMatrix g = gram(data.inputs, kernel);
  SmoState state;
  state.k = &g;
  state.y = &data.targets;
  state.alpha.assign(data.size(), 0.0);
  state.error.resize(data.size());
  state.C = C;
  state.tol = tol;
  for (std::size_t i = 0; i < data.size(); ++i)
    state.error[i] = -data.targets[i];  // decision is 0 at alpha = 0

  unsigned quiet_sweeps = 0;
  unsigned sweeps = 0;
  bool converged = false;
  while (sweeps < max_sweeps) {
    ++sweeps;
    std::size_t changed = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (state.examine(i)) ++changed;
    quiet_sweeps = (changed == 0) ? quiet_sweeps + 1 : 0;
    if (quiet_sweeps >= max_passes) {
      converged = true;
      break;
    }
  }

  SvmModel model;
  model.points = data.inputs;
  model.labels = data.targets;
  model.alphas = state.alpha;
  model.kernel = kernel;
  model.C = C;
  model.sweeps = sweeps;

  // Recompute the bias from the free support vectors (averaged margin);
  // fall back to the pairwise value when every alpha sits on a bound or
  // when the average would leave a KKT violation the pairwise value avoids.
  double sum = 0.0;
  std::size_t free_svs = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (state.alpha[i] > 0.0 && state.alpha[i] < C) {
      double f = 0.0;
      for (std::size_t j = 0; j < data.size(); ++j)
        if (state.alpha[j] > 0.0)
          f += state.alpha[j] * data.targets[j] * g(j, i);
      sum += data.targets[i] - f;
      ++free_svs;
    }
  }
  model.bias = free_svs > 0 ? sum / static_cast<double>(free_svs) : state.b;
  if (free_svs > 0 && kkt_violation(model) > tol) {
    SvmModel alt = model;
    alt.bias = state.b;
    if (kkt_violation(alt) < kkt_violation(model)) model.bias = alt.bias;
  }
  model.converged = converged && kkt_violation(model) <= tol;
  return model;
}

double kkt_violation(const SvmModel& model) {
  double worst = 0.0;
  for (std::size_t i = 0; i < model.points.size(); ++i) {
    const double margin = model.labels[i] * model.decision(model.points[i]);
    double v = 0.0;
    if (model.alphas[i] <= 0.0)
      v = std::max(0.0, 1.0 - margin);
    else if (model.alphas[i] >= model.C)
      v = std::max(0.0, margin - 1.0);
    else
      v = std::abs(margin - 1.0);
    worst = std::max(worst, v);
  }
  return worst;
}

namespace {

Dataset make_classification(const std::string& generator, std::size_t count,
                            std::uint64_t seed) {
  if (generator == "two-blobs") return gen_two_blobs(count, seed);
  if (generator == "two-moons") return gen_two_moons(count, seed);
  throw std::invalid_argument("svm_report: unknown generator '" + generator +
                              "' (expected two-blobs or two-moons)");
}

double misclass_pct(const SvmModel& model, const Dataset& data) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (model.predict(data.inputs[i]) != data.targets[i]) ++wrong;
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(data.size());
}

}  // namespace

SvmReport svm_report(const std::string& generator, std::size_t count, double C,
                     const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() < 5)
    throw std::invalid_argument("svm_report: at least 5 seeds required");

  const std::vector<double> sigmas = {0.25, 0.5, 1.0, 2.0};
  const std::vector<double> sigma0s = {0.0, 0.5, 1.0};
  std::vector<KernelSpec> candidates;
  for (double s : sigmas) {
    KernelSpec spec;
    spec.family = KernelSpec::Family::grbf;
    spec.sigma = s;
    candidates.push_back(spec);
  }
  {
    KernelSpec spec;
    spec.family = KernelSpec::Family::sigmoid;
    spec.coef0 = 0.0;
    candidates.push_back(spec);  // gamma defaults to 1/d
    spec.gamma = 1.0;
    candidates.push_back(spec);
  }
  for (double s : sigmas)
    for (double s0 : sigma0s) {
      KernelSpec spec;
      spec.family = KernelSpec::Family::ggrbf;
      spec.sigma = s;
      spec.sigma0 = s0;
      candidates.push_back(spec);
    }

  // Mean held-out misclassification per candidate, averaged over seeds.
  std::vector<double> mean_pct(candidates.size(), 0.0);
  std::vector<double> per_task(candidates.size() * seeds.size(), 0.0);
  parallel_for(candidates.size() * seeds.size(), [&](std::size_t task) {
    const std::size_t ci = task / seeds.size();
    const std::size_t si = task % seeds.size();
    const Dataset data = make_classification(generator, count, seeds[si]);
    const auto [train, val] = split(data, 0.75, seeds[si] ^ 0x9e3779b97f4a7c15ull);
    const SvmModel model = smo_fit(train, candidates[ci], C);
    per_task[task] = misclass_pct(model, val);
  });
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    for (std::size_t si = 0; si < seeds.size(); ++si)
      mean_pct[ci] += per_task[ci * seeds.size() + si];
    mean_pct[ci] /= static_cast<double>(seeds.size());
  }

  const auto best_of = [&](KernelSpec::Family family) {
    SvmRow row;
    bool found = false;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      if (candidates[ci].family != family) continue;
      if (!found || mean_pct[ci] < row.misclass_pct) {
        row.best_kernel = candidates[ci];
        row.misclass_pct = mean_pct[ci];
        found = true;
      }
    }
    return row;
  };

  SvmReport report;
  report.dataset_tag = generator + ":count=" + std::to_string(count);
  report.seeds = seeds;
  report.C = C;

  SvmRow grbf_row = best_of(KernelSpec::Family::grbf);
  grbf_row.method = "grbf";
  grbf_row.reference_pct = 5.75;
  SvmRow sigmoid_row = best_of(KernelSpec::Family::sigmoid);
  sigmoid_row.method = "sigmoid";
  sigmoid_row.reference_pct = 4.5;
  SvmRow ggrbf_row = best_of(KernelSpec::Family::ggrbf);
  ggrbf_row.method = "ggrbf";
  ggrbf_row.reference_pct = 3.75;
  report.rows = {grbf_row, sigmoid_row, ggrbf_row};
  return report;
}

}  // namespace ggrbf
