#pragma once

#include <cstdint>
#include <vector>

namespace bandvote {

struct LinearSvm {
  std::vector<double> weights;
  double bias = 0;
  int class_id = 0;
};

struct SvmTrainConfig {
  double c = 10.0;
  double tol = 1e-3;       // projected-gradient stopping threshold
  int max_epochs = 1000;
  std::uint64_t shuffle_seed = 0;
};

struct SvmFit {
  LinearSvm svm;
  std::vector<double> alpha;  // dual variables, one per training point
  int epochs = 0;
  bool converged = false;
  double primal_objective = 0;
  double dual_objective = 0;
};

// L1-hinge linear SVM, primal
//   min 1/2 ||w||^2 + C sum_i max(0, 1 - y_i (w . x_i + b)),
// solved by dual coordinate descent with the bias folded in as a constant
// augmented feature. labels are +-1 and both classes must be present.
// Deterministic for a fixed shuffle_seed.
SvmFit train_svm(const float* features, int n, int dim, const std::vector<int>& labels,
                 const SvmTrainConfig& config);

double svm_decision(const LinearSvm& svm, const float* x, int dim);

}  // namespace bandvote
