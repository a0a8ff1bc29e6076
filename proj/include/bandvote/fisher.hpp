#pragma once

#include <vector>

#include "bandvote/descriptors.hpp"
#include "bandvote/gmm.hpp"

namespace bandvote {

// Fisher vector: gradients of the GMM log-likelihood with respect to means
// and standard deviations, averaged over the descriptors. Layout is the mean
// block (k x dim) followed by the variance block (k x dim); an empty
// descriptor set encodes to the zero vector.
struct FisherVector {
  std::vector<float> values;  // 2 * k * dim
  int source_band = 0;
};

FisherVector fisher_encode(const float* descriptors, int n, int dim, const GmmModel& gmm);
FisherVector fisher_encode(const DescriptorSet& set, const GmmModel& gmm);

// v / ||v||2; the zero vector maps to itself. Throws on non-finite input.
std::vector<float> l2_normalize(const std::vector<float>& v);
void l2_normalize_inplace(std::vector<float>& v);

// Signed square root, applied elementwise. Optional power normalization for
// Fisher vectors; off by default in the pipeline.
void signed_sqrt_inplace(std::vector<float>& v);

}  // namespace bandvote
