#include "bandvote/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bandvote/rng.hpp"

namespace bandvote {

double svm_decision(const LinearSvm& svm, const float* x, int dim) {
  if (dim != static_cast<int>(svm.weights.size())) {
    throw std::invalid_argument("svm_decision: feature dimension mismatch");
  }
  double d = svm.bias;
  for (int i = 0; i < dim; ++i) d += svm.weights[i] * x[i];
  return d;
}

SvmFit train_svm(const float* features, int n, int dim, const std::vector<int>& labels,
                 const SvmTrainConfig& config) {
  if (n < 2) throw std::invalid_argument("train_svm: need at least two points");
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("train_svm: label count does not match feature rows");
  }
  if (config.c <= 0 || config.tol <= 0 || config.max_epochs < 1) {
    throw std::invalid_argument("train_svm: invalid configuration");
  }
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y == 1) has_pos = true;
    else if (y == -1) has_neg = true;
    else throw std::invalid_argument("train_svm: labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw std::invalid_argument("train_svm: both classes must be present");
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * dim; ++i) {
    if (!std::isfinite(features[i])) throw std::invalid_argument("train_svm: non-finite feature");
  }

  // Dual coordinate descent over the augmented problem (x, 1); the last
  // weight component is reported as the bias.
  const int adim = dim + 1;
  std::vector<double> w(adim, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> q_diag(n);
  for (int i = 0; i < n; ++i) {
    const float* x = features + static_cast<std::size_t>(i) * dim;
    double q = 1.0;  // the augmented constant
    for (int d = 0; d < dim; ++d) q += static_cast<double>(x[d]) * x[d];
    q_diag[i] = q;
  }

  CounterRng rng = make_rng(config.shuffle_seed, 0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  SvmFit fit;
  const double c_upper = config.c;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double max_violation = 0;
    for (int idx : order) {
      const float* x = features + static_cast<std::size_t>(idx) * dim;
      const double y = labels[idx];
      double decision = w[dim];
      for (int d = 0; d < dim; ++d) decision += w[d] * x[d];
      const double grad = y * decision - 1.0;

      double projected = grad;
      if (alpha[idx] <= 0) projected = std::min(grad, 0.0);
      else if (alpha[idx] >= c_upper) projected = std::max(grad, 0.0);
      max_violation = std::max(max_violation, std::abs(projected));
      if (std::abs(projected) < 1e-12) continue;

      const double next = std::clamp(alpha[idx] - grad / q_diag[idx], 0.0, c_upper);
      const double delta = (next - alpha[idx]) * y;
      alpha[idx] = next;
      if (delta != 0.0) {
        for (int d = 0; d < dim; ++d) w[d] += delta * x[d];
        w[dim] += delta;
      }
    }
    fit.epochs = epoch + 1;
    if (max_violation < config.tol) {
      fit.converged = true;
      break;
    }
  }

  double wnorm2 = 0;
  for (double v : w) wnorm2 += v * v;
  double hinge = 0;
  for (int i = 0; i < n; ++i) {
    const float* x = features + static_cast<std::size_t>(i) * dim;
    double decision = w[dim];
    for (int d = 0; d < dim; ++d) decision += w[d] * x[d];
    hinge += std::max(0.0, 1.0 - labels[i] * decision);
  }
  double alpha_sum = 0;
  for (double a : alpha) alpha_sum += a;

  fit.primal_objective = 0.5 * wnorm2 + c_upper * hinge;
  fit.dual_objective = alpha_sum - 0.5 * wnorm2;
  fit.alpha = std::move(alpha);
  fit.svm.weights.assign(w.begin(), w.begin() + dim);
  fit.svm.bias = w[dim];
  return fit;
}

}  // namespace bandvote
