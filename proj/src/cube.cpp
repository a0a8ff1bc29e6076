#include "bandvote/cube.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bandvote {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Image HyperspectralCube::band(int b) const {
  Image img(height, width);
  const float* src = data.data() + static_cast<std::size_t>(b) * plane_size();
  std::copy(src, src + plane_size(), img.data.begin());
  return img;
}

void HyperspectralCube::set_band(int b, const Image& img) {
  if (img.height != height || img.width != width) {
    fail("set_band: image dimensions do not match cube");
  }
  std::copy(img.data.begin(), img.data.end(),
            data.begin() + static_cast<std::size_t>(b) * plane_size());
}

void HyperspectralCube::validate() const {
  if (height <= 0 || width <= 0 || bands <= 0) fail("cube: dimensions must be positive");
  if (static_cast<int>(wavelengths_nm.size()) != bands) {
    fail("cube: wavelength count does not match band count");
  }
  for (int b = 1; b < bands; ++b) {
    if (!(wavelengths_nm[b] > wavelengths_nm[b - 1])) {
      fail("cube: wavelengths must be strictly increasing");
    }
  }
  if (data.size() != plane_size() * static_cast<std::size_t>(bands)) {
    fail("cube: data size does not match height*width*bands");
  }
  for (float v : data) {
    if (!std::isfinite(v)) fail("cube: data contains non-finite values");
    if (v < 0.0f) fail("cube: data contains negative values");
  }
}

std::filesystem::path cube_payload_path(const std::filesystem::path& header_path) {
  std::filesystem::path p = header_path;
  p += ".raw";
  return p;
}

void write_f32_le(std::vector<float> const& values, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open for writing: " + path.string());
  std::vector<unsigned char> buf(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t bits = std::bit_cast<std::uint32_t>(values[i]);
    buf[4 * i + 0] = static_cast<unsigned char>(bits & 0xFF);
    buf[4 * i + 1] = static_cast<unsigned char>((bits >> 8) & 0xFF);
    buf[4 * i + 2] = static_cast<unsigned char>((bits >> 16) & 0xFF);
    buf[4 * i + 3] = static_cast<unsigned char>((bits >> 24) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) fail("write failed: " + path.string());
}

std::vector<float> read_f32_le(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open: " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() % 4 != 0) fail("payload size is not a multiple of 4 bytes: " + path.string());
  std::vector<float> values(buf.size() / 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(buf[4 * i + 0]) |
                               (static_cast<std::uint32_t>(buf[4 * i + 1]) << 8) |
                               (static_cast<std::uint32_t>(buf[4 * i + 2]) << 16) |
                               (static_cast<std::uint32_t>(buf[4 * i + 3]) << 24);
    values[i] = std::bit_cast<float>(bits);
  }
  return values;
}

void write_cube(const HyperspectralCube& cube, const std::filesystem::path& path) {
  cube.validate();
  std::ofstream header(path);
  if (!header) fail("cannot open for writing: " + path.string());
  header << "height: " << cube.height << "\n";
  header << "width: " << cube.width << "\n";
  header << "bands: " << cube.bands << "\n";
  header << "wavelengths: ";
  for (int b = 0; b < cube.bands; ++b) {
    if (b) header << ",";
    header << format_double(cube.wavelengths_nm[b]);
  }
  header << "\n";
  header << "dtype: float32le\n";
  header << "interleave: bsq\n";
  if (!header) fail("write failed: " + path.string());
  header.close();
  write_f32_le(cube.data, cube_payload_path(path));
}

HyperspectralCube load_cube(const std::filesystem::path& path) {
  std::ifstream header(path);
  if (!header) fail("cannot open cube header: " + path.string());

  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(header, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) fail("malformed header line in " + path.string());
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    // trim
    const auto strip = [](std::string& s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    strip(key);
    strip(value);
    fields[key] = value;
  }
  for (const char* key : {"height", "width", "bands", "wavelengths", "dtype", "interleave"}) {
    if (!fields.count(key)) fail("cube header missing key '" + std::string(key) + "': " + path.string());
  }
  if (fields["dtype"] != "float32le") fail("unsupported dtype: " + fields["dtype"]);
  if (fields["interleave"] != "bsq") fail("unsupported interleave: " + fields["interleave"]);

  HyperspectralCube cube;
  try {
    cube.height = std::stoi(fields["height"]);
    cube.width = std::stoi(fields["width"]);
    cube.bands = std::stoi(fields["bands"]);
  } catch (const std::exception&) {
    fail("non-numeric dimension in cube header: " + path.string());
  }

  std::stringstream ws(fields["wavelengths"]);
  std::string token;
  while (std::getline(ws, token, ',')) {
    if (token.empty()) continue;
    cube.wavelengths_nm.push_back(std::stod(token));
  }

  cube.data = read_f32_le(cube_payload_path(path));
  const std::size_t expected =
      static_cast<std::size_t>(cube.height) * cube.width * std::max(cube.bands, 0);
  if (cube.height <= 0 || cube.width <= 0 || cube.bands <= 0 || cube.data.size() != expected) {
    fail("cube payload size does not match declared dimensions: " + path.string());
  }
  cube.validate();
  return cube;
}

void DatasetManifest::validate() const {
  std::map<std::string, int> counts;
  for (const auto& s : subjects) {
    if (counts.count(s)) fail("manifest: duplicate subject id '" + s + "'");
    counts[s] = 0;
  }
  for (const auto& sample : samples) {
    auto it = counts.find(sample.subject);
    if (it == counts.end()) {
      fail("manifest: sample references unknown subject '" + sample.subject + "'");
    }
    ++it->second;
  }
  for (const auto& [subject, n] : counts) {
    if (n < 3) {
      fail("manifest: subject '" + subject + "' has " + std::to_string(n) +
           " samples; at least 3 are required for 1-gallery/2-probe splits");
    }
  }
  if (band_exclusion.drop_first < 0 || band_exclusion.drop_last < 0) {
    fail("manifest: band exclusion counts must be non-negative");
  }
}

std::filesystem::path DatasetManifest::resolve(const SampleEntry& sample) const {
  std::filesystem::path p(sample.cube_path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

std::vector<int> DatasetManifest::samples_of(const std::string& subject) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].subject == subject) out.push_back(static_cast<int>(i));
  }
  return out;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  manifest.validate();
  nlohmann::json j;
  j["subjects"] = manifest.subjects;
  j["band_exclusion"] = {{"drop_first", manifest.band_exclusion.drop_first},
                         {"drop_last", manifest.band_exclusion.drop_last}};
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : manifest.samples) {
    samples.push_back({{"subject", s.subject}, {"cube", s.cube_path}, {"session", s.session}});
  }
  j["samples"] = samples;
  std::ofstream out(path);
  if (!out) fail("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open manifest: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("manifest is not valid JSON: " + std::string(e.what()));
  }
  DatasetManifest manifest;
  try {
    manifest.subjects = j.at("subjects").get<std::vector<std::string>>();
    manifest.band_exclusion.drop_first = j.at("band_exclusion").at("drop_first").get<int>();
    manifest.band_exclusion.drop_last = j.at("band_exclusion").at("drop_last").get<int>();
    for (const auto& s : j.at("samples")) {
      SampleEntry e;
      e.subject = s.at("subject").get<std::string>();
      e.cube_path = s.at("cube").get<std::string>();
      e.session = s.value("session", 0);
      manifest.samples.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    fail("manifest schema error: " + std::string(e.what()));
  }
  manifest.base_dir = path.parent_path();
  manifest.validate();
  return manifest;
}

}  // namespace bandvote
