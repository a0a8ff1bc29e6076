#include <fstream>
#include <map>
#include <stdexcept>

#include "bandvote/cube.hpp"
#include "bandvote/descriptors.hpp"

namespace bandvote {

std::string descriptor_kind_name(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::Hog: return "hog";
    case DescriptorKind::Lbp: return "lbp";
    case DescriptorKind::Dsift: return "dsift";
    case DescriptorKind::FisherVec: return "fv";
  }
  throw std::logic_error("unknown descriptor kind");
}

DescriptorKind descriptor_kind_from_name(const std::string& name) {
  if (name == "hog") return DescriptorKind::Hog;
  if (name == "lbp") return DescriptorKind::Lbp;
  if (name == "dsift") return DescriptorKind::Dsift;
  if (name == "fv" || name == "dsift-fv") return DescriptorKind::FisherVec;
  throw std::invalid_argument("unknown descriptor kind: " + name);
}

void save_features(const FeatureFile& features, const std::filesystem::path& path) {
  if (features.per_band.empty()) throw std::invalid_argument("save_features: no bands");
  const auto& first = features.per_band.front();
  for (const auto& set : features.per_band) {
    if (set.dim != first.dim || set.count != first.count) {
      throw std::invalid_argument("save_features: bands disagree on vector layout");
    }
  }

  std::ofstream header(path);
  if (!header) throw std::runtime_error("cannot open for writing: " + path.string());
  header << "kind: " << descriptor_kind_name(features.kind) << "\n";
  header << "bands: " << features.per_band.size() << "\n";
  header << "vectors_per_band: " << first.count << "\n";
  header << "dim: " << first.dim << "\n";
  header << "grid_rows: " << first.grid_rows << "\n";
  header << "grid_cols: " << first.grid_cols << "\n";
  header << "dtype: float32le\n";
  header.close();

  std::vector<float> payload;
  payload.reserve(features.per_band.size() * first.values.size());
  for (const auto& set : features.per_band) {
    payload.insert(payload.end(), set.values.begin(), set.values.end());
  }
  write_f32_le(payload, cube_payload_path(path));
}

FeatureFile load_features(const std::filesystem::path& path) {
  std::ifstream header(path);
  if (!header) throw std::runtime_error("cannot open feature header: " + path.string());
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(header, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    const auto a = value.find_first_not_of(" \t\r");
    value = (a == std::string::npos) ? std::string() : value.substr(a);
    if (const auto b = value.find_last_not_of(" \t\r"); b != std::string::npos) {
      value = value.substr(0, b + 1);
    }
    fields[key] = value;
  }
  for (const char* key : {"kind", "bands", "vectors_per_band", "dim", "grid_rows", "grid_cols"}) {
    if (!fields.count(key)) {
      throw std::runtime_error("feature header missing key '" + std::string(key) +
                               "': " + path.string());
    }
  }

  FeatureFile out;
  out.kind = descriptor_kind_from_name(fields["kind"]);
  const int bands = std::stoi(fields["bands"]);
  const int count = std::stoi(fields["vectors_per_band"]);
  const int dim = std::stoi(fields["dim"]);
  const int grid_rows = std::stoi(fields["grid_rows"]);
  const int grid_cols = std::stoi(fields["grid_cols"]);
  if (bands < 1 || count < 0 || dim < 1) {
    throw std::runtime_error("feature header declares invalid layout: " + path.string());
  }

  const std::vector<float> payload = read_f32_le(cube_payload_path(path));
  const std::size_t per_band = static_cast<std::size_t>(count) * dim;
  if (payload.size() != per_band * bands) {
    throw std::runtime_error("feature payload size does not match header: " + path.string());
  }

  for (int b = 0; b < bands; ++b) {
    DescriptorSet set;
    set.kind = out.kind;
    set.band_index = b;
    set.dim = dim;
    set.count = count;
    set.grid_rows = grid_rows;
    set.grid_cols = grid_cols;
    set.values.assign(payload.begin() + b * per_band, payload.begin() + (b + 1) * per_band);
    out.per_band.push_back(std::move(set));
  }
  return out;
}

}  // namespace bandvote
