#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace bandvote {

// Diagonal-covariance Gaussian mixture. Weights are non-negative and sum to
// one (within 1e-9); variances never fall below the floor.
struct GmmModel {
  int k = 0;
  int dim = 0;
  std::vector<double> weights;    // k
  std::vector<double> means;      // k x dim, row-major
  std::vector<double> variances;  // k x dim, row-major
  double variance_floor = 1e-4;

  void validate() const;
};

struct EmConfig {
  int max_iters = 100;
  double rel_tol = 1e-4;
  double variance_floor = 1e-4;
  std::uint64_t seed = 0;  // seeds the k-means++ initialization
};

struct GmmFit {
  GmmModel model;
  std::vector<double> log_likelihood;  // average log-likelihood after each iteration
  int iterations = 0;
  bool converged = false;
};

// EM with k-means++ initialization followed by one hard-assignment moment
// estimate. Stops when the relative improvement of the average
// log-likelihood drops below rel_tol or after max_iters. Variances are
// floored every M-step. Requires n >= k; throws on degenerate fits where
// components collapse onto each other.
GmmFit fit_gmm(const float* data, int n, int dim, int k, const EmConfig& config);
GmmFit fit_gmm(const std::vector<float>& data, int dim, int k, const EmConfig& config);

// Posterior responsibilities of one point; returns log p(x) under the
// mixture. gamma must hold k entries.
double gmm_posteriors(const GmmModel& model, const float* x, double* gamma);

// Model file: text header (k, dim, variance_floor, dtype) at `path`, float32
// payload (weights, means, variances) at `path` + ".raw". Weights are
// renormalized on load to absorb float32 rounding.
void save_gmm(const GmmModel& model, const std::filesystem::path& path);
GmmModel load_gmm(const std::filesystem::path& path);

}  // namespace bandvote
