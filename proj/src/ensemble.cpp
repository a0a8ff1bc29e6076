#include "bandvote/ensemble.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "bandvote/cube.hpp"
#include "bandvote/parallel.hpp"
#include "bandvote/rng.hpp"

namespace bandvote {

void FeatureMatrix::push_row(const std::vector<float>& v) {
  if (rows == 0 && dim == 0) dim = static_cast<int>(v.size());
  if (static_cast<int>(v.size()) != dim) {
    throw std::invalid_argument("FeatureMatrix: inconsistent row dimension");
  }
  values.insert(values.end(), v.begin(), v.end());
  ++rows;
}

BandEnsemble train_band_ensemble(const std::vector<FeatureMatrix>& per_band_features,
                                 const std::vector<int>& labels,
                                 const std::vector<std::string>& classes,
                                 const SvmTrainConfig& config) {
  if (per_band_features.empty()) throw std::invalid_argument("train_band_ensemble: no bands");
  if (classes.size() < 2) throw std::invalid_argument("train_band_ensemble: need >= 2 classes");
  const int n = per_band_features.front().rows;
  for (const auto& m : per_band_features) {
    if (m.rows != n) throw std::invalid_argument("train_band_ensemble: bands disagree on sample count");
  }
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("train_band_ensemble: label count mismatch");
  }
  std::vector<int> class_counts(classes.size(), 0);
  for (int label : labels) {
    if (label < 0 || label >= static_cast<int>(classes.size())) {
      throw std::invalid_argument("train_band_ensemble: label out of range");
    }
    ++class_counts[label];
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (class_counts[c] == 0) {
      throw std::invalid_argument("train_band_ensemble: class '" + classes[c] + "' has no samples");
    }
  }

  const int bands = static_cast<int>(per_band_features.size());
  const int n_classes = static_cast<int>(classes.size());
  BandEnsemble ensemble;
  ensemble.bands = bands;
  ensemble.classes = classes;
  ensemble.per_band.assign(bands, std::vector<LinearSvm>(n_classes));

  const std::uint64_t seed_key = rng_mix(config.shuffle_seed);
  parallel_for(static_cast<std::size_t>(bands) * n_classes, [&](std::size_t task) {
    const int band = static_cast<int>(task) / n_classes;
    const int cls = static_cast<int>(task) % n_classes;
    std::vector<int> binary(n);
    for (int i = 0; i < n; ++i) binary[i] = labels[i] == cls ? 1 : -1;
    SvmTrainConfig local = config;
    local.shuffle_seed = rng_hash(seed_key, task);
    SvmFit fit = train_svm(per_band_features[band].values.data(), n,
                           per_band_features[band].dim, binary, local);
    fit.svm.class_id = cls;
    ensemble.per_band[band][cls] = std::move(fit.svm);
  });
  return ensemble;
}

BandPrediction predict_band(const BandEnsemble& ensemble, int band, const float* feature,
                            int dim) {
  if (band < 0 || band >= ensemble.bands) {
    throw std::invalid_argument("predict_band: band index out of range");
  }
  BandPrediction best;
  const auto& svms = ensemble.per_band[band];
  for (std::size_t c = 0; c < svms.size(); ++c) {
    const double d = svm_decision(svms[c], feature, dim);
    if (best.class_index < 0 || d > best.margin) {
      best.class_index = static_cast<int>(c);
      best.margin = d;
    }
  }
  return best;
}

int majority_vote(const BandEnsemble& ensemble, const std::vector<std::vector<float>>& per_band) {
  if (ensemble.bands == 0) throw std::invalid_argument("majority_vote: empty ensemble");
  if (static_cast<int>(per_band.size()) != ensemble.bands) {
    throw std::invalid_argument("majority_vote: need one feature vector per band");
  }
  const int n_classes = static_cast<int>(ensemble.classes.size());
  std::vector<int> votes(n_classes, 0);
  std::vector<double> margin_sum(n_classes, 0.0);
  for (int b = 0; b < ensemble.bands; ++b) {
    const BandPrediction p =
        predict_band(ensemble, b, per_band[b].data(), static_cast<int>(per_band[b].size()));
    ++votes[p.class_index];
    margin_sum[p.class_index] += p.margin;
  }

  int winner = 0;
  for (int c = 1; c < n_classes; ++c) {
    if (votes[c] > votes[winner]) {
      winner = c;
    } else if (votes[c] == votes[winner] && margin_sum[c] > margin_sum[winner]) {
      winner = c;
    }
    // equal votes and margins keep the lower index
  }
  return winner;
}

void save_ensemble(const BandEnsemble& ensemble, const std::filesystem::path& dir) {
  if (ensemble.bands == 0) throw std::invalid_argument("save_ensemble: empty ensemble");
  std::filesystem::create_directories(dir);
  const int dim = ensemble.feature_dim();

  nlohmann::json j;
  j["classes"] = ensemble.classes;
  j["bands"] = ensemble.bands;
  j["feature_dim"] = dim;
  j["provenance"] = ensemble.provenance;
  std::ofstream out(dir / "ensemble.json");
  if (!out) throw std::runtime_error("cannot write ensemble manifest in " + dir.string());
  out << j.dump(2) << "\n";
  out.close();

  std::vector<float> payload;
  payload.reserve(static_cast<std::size_t>(ensemble.bands) * ensemble.classes.size() * (dim + 1));
  for (const auto& band : ensemble.per_band) {
    if (band.size() != ensemble.classes.size()) {
      throw std::runtime_error("save_ensemble: band is missing class models");
    }
    for (const auto& svm : band) {
      if (static_cast<int>(svm.weights.size()) != dim) {
        throw std::runtime_error("save_ensemble: inconsistent weight dimension");
      }
      for (double w : svm.weights) payload.push_back(static_cast<float>(w));
      payload.push_back(static_cast<float>(svm.bias));
    }
  }
  write_f32_le(payload, dir / "weights.raw");
}

BandEnsemble load_ensemble(const std::filesystem::path& dir) {
  std::ifstream in(dir / "ensemble.json");
  if (!in) throw std::runtime_error("cannot open ensemble manifest in " + dir.string());
  nlohmann::json j;
  in >> j;

  BandEnsemble ensemble;
  ensemble.classes = j.at("classes").get<std::vector<std::string>>();
  ensemble.bands = j.at("bands").get<int>();
  ensemble.provenance = j.value("provenance", nlohmann::json::object());
  const int dim = j.at("feature_dim").get<int>();

  const std::vector<float> payload = read_f32_le(dir / "weights.raw");
  const std::size_t expected =
      static_cast<std::size_t>(ensemble.bands) * ensemble.classes.size() * (dim + 1);
  if (payload.size() != expected) {
    throw std::runtime_error("ensemble weights.raw size does not match manifest");
  }

  std::size_t pos = 0;
  ensemble.per_band.assign(ensemble.bands, {});
  for (int b = 0; b < ensemble.bands; ++b) {
    for (std::size_t c = 0; c < ensemble.classes.size(); ++c) {
      LinearSvm svm;
      svm.class_id = static_cast<int>(c);
      svm.weights.assign(payload.begin() + pos, payload.begin() + pos + dim);
      svm.bias = payload[pos + dim];
      pos += dim + 1;
      ensemble.per_band[b].push_back(std::move(svm));
    }
  }
  return ensemble;
}

}  // namespace bandvote
