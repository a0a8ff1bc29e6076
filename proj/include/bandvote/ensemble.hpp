#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandvote/svm.hpp"

namespace bandvote {

// Row-major sample-by-feature matrix for one band.
struct FeatureMatrix {
  int rows = 0;
  int dim = 0;
  std::vector<float> values;

  const float* row(int i) const { return values.data() + static_cast<std::size_t>(i) * dim; }
  void push_row(const std::vector<float>& v);
};

// One one-vs-all linear SVM per (band, class). The class list is shared by
// all bands; per-band predictions are fused by majority voting.
struct BandEnsemble {
  int bands = 0;
  std::vector<std::string> classes;
  std::vector<std::vector<LinearSvm>> per_band;  // [band][class_index]
  nlohmann::json provenance;                     // descriptor/encoder configs, for prediction

  int feature_dim() const {
    return per_band.empty() || per_band[0].empty()
               ? 0
               : static_cast<int>(per_band[0][0].weights.size());
  }
};

struct BandPrediction {
  int class_index = -1;
  double margin = 0;  // decision value of the winning class
};

// Trains bands x classes one-vs-all SVMs. Every class must appear in the
// labels; all bands must agree on the sample count. Trainings run in
// parallel with per-(band, class) seeds derived from config.shuffle_seed.
BandEnsemble train_band_ensemble(const std::vector<FeatureMatrix>& per_band_features,
                                 const std::vector<int>& labels,
                                 const std::vector<std::string>& classes,
                                 const SvmTrainConfig& config);

// Argmax of the one-vs-all decision values; ties go to the lower class index.
BandPrediction predict_band(const BandEnsemble& ensemble, int band, const float* feature,
                            int dim);

// Majority vote over all bands. Ties are broken by the larger sum of winning
// margins among the tied classes, then by the lower class index.
int majority_vote(const BandEnsemble& ensemble, const std::vector<std::vector<float>>& per_band);

// Directory layout: ensemble.json (classes, bands, dim, provenance) plus
// weights.raw holding float32 [w..., bias] blocks, band-major then
// class-major.
void save_ensemble(const BandEnsemble& ensemble, const std::filesystem::path& dir);
BandEnsemble load_ensemble(const std::filesystem::path& dir);

}  // namespace bandvote
