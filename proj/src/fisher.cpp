#include "bandvote/fisher.hpp"

#include <cmath>
#include <stdexcept>

namespace bandvote {

FisherVector fisher_encode(const DescriptorSet& set, const GmmModel& gmm) {
  FisherVector fv = fisher_encode(set.values.data(), set.count, set.dim, gmm);
  fv.source_band = set.band_index;
  return fv;
}

FisherVector fisher_encode(const float* descriptors, int n, int dim, const GmmModel& gmm) {
  gmm.validate();
  if (n > 0 && dim != gmm.dim) {
    throw std::invalid_argument("fisher_encode: descriptor dimension does not match the model");
  }
  const int k = gmm.k;
  const std::size_t kd = static_cast<std::size_t>(k) * gmm.dim;

  FisherVector fv;
  fv.values.assign(2 * kd, 0.0f);
  if (n == 0) return fv;

  // Accumulate per-component responsibility moments, then assemble the
  // closed-form gradients.
  std::vector<double> s0(k, 0.0), s1(kd, 0.0), s2(kd, 0.0);
  std::vector<double> gamma(k);
  for (int i = 0; i < n; ++i) {
    const float* x = descriptors + static_cast<std::size_t>(i) * dim;
    gmm_posteriors(gmm, x, gamma.data());
    for (int c = 0; c < k; ++c) {
      const double g = gamma[c];
      if (g == 0.0) continue;
      s0[c] += g;
      double* s1c = s1.data() + static_cast<std::size_t>(c) * dim;
      double* s2c = s2.data() + static_cast<std::size_t>(c) * dim;
      for (int d = 0; d < dim; ++d) {
        s1c[d] += g * x[d];
        s2c[d] += g * static_cast<double>(x[d]) * x[d];
      }
    }
  }

  for (int c = 0; c < k; ++c) {
    const double w = gmm.weights[c];
    const double mean_scale = 1.0 / (n * std::sqrt(w));
    const double var_scale = 1.0 / (n * std::sqrt(2.0 * w));
    for (int d = 0; d < dim; ++d) {
      const double mu = gmm.means[c * dim + d];
      const double var = gmm.variances[c * dim + d];
      const double sigma = std::sqrt(var);
      // sum_i gamma_i (x - mu) / sigma
      const double mean_grad = (s1[c * dim + d] - mu * s0[c]) / sigma;
      // sum_i gamma_i ((x - mu)^2 / var - 1)
      const double var_grad =
          (s2[c * dim + d] - 2.0 * mu * s1[c * dim + d] + mu * mu * s0[c]) / var - s0[c];
      fv.values[c * dim + d] = static_cast<float>(mean_scale * mean_grad);
      fv.values[kd + c * dim + d] = static_cast<float>(var_scale * var_grad);
    }
  }
  return fv;
}

void l2_normalize_inplace(std::vector<float>& v) {
  double sumsq = 0;
  for (float x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("l2_normalize: non-finite input");
    sumsq += static_cast<double>(x) * x;
  }
  if (sumsq == 0) return;
  const double inv = 1.0 / std::sqrt(sumsq);
  for (float& x : v) x = static_cast<float>(x * inv);
}

std::vector<float> l2_normalize(const std::vector<float>& v) {
  std::vector<float> out = v;
  l2_normalize_inplace(out);
  return out;
}

void signed_sqrt_inplace(std::vector<float>& v) {
  for (float& x : v) x = (x >= 0 ? 1.0f : -1.0f) * std::sqrt(std::abs(x));
}

}  // namespace bandvote
