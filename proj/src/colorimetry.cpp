#include "bandvote/colorimetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace bandvote {

namespace {

struct Curve {
  std::vector<double> wl, value;
};

Curve load_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file: " + path.string());
  Curve c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double wl, v;
    if (row >> wl >> v) {
      if (!c.wl.empty() && wl <= c.wl.back()) {
        throw std::runtime_error("curve wavelengths must increase: " + path.string());
      }
      c.wl.push_back(wl);
      c.value.push_back(v);
    }
  }
  if (c.wl.size() < 2) throw std::runtime_error("curve needs at least two samples: " + path.string());
  return c;
}

double interp_curve(const Curve& c, double wl) {
  if (wl <= c.wl.front()) return c.value.front();
  if (wl >= c.wl.back()) return c.value.back();
  const auto it = std::upper_bound(c.wl.begin(), c.wl.end(), wl);
  const std::size_t i = static_cast<std::size_t>(it - c.wl.begin()) - 1;
  const double f = (wl - c.wl[i]) / (c.wl[i + 1] - c.wl[i]);
  return c.value[i] + f * (c.value[i + 1] - c.value[i]);
}

// Trapezoidal integration weights over an increasing wavelength list.
std::vector<double> trapezoid_weights(const std::vector<double>& wl) {
  const std::size_t n = wl.size();
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  w[0] = 0.5 * (wl[1] - wl[0]);
  w[n - 1] = 0.5 * (wl[n - 1] - wl[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (wl[i + 1] - wl[i - 1]);
  return w;
}

struct ProjectionRows {
  std::vector<double> x, y, z;  // per-band integration coefficients, white-normalized
  bool clipped = false;
};

ProjectionRows xyz_rows(const HyperspectralCube& cube, const SpectralResponse& response) {
  const auto weights = trapezoid_weights(cube.wavelengths_nm);
  ProjectionRows rows;
  rows.x.resize(cube.bands);
  rows.y.resize(cube.bands);
  rows.z.resize(cube.bands);
  double norm_y = 0;
  for (int b = 0; b < cube.bands; ++b) {
    const double wl = cube.wavelengths_nm[b];
    if (wl < response.wavelengths.front() || wl > response.wavelengths.back()) {
      rows.clipped = true;
      continue;  // coefficients stay zero outside the curve coverage
    }
    const double common =
        response.sample(response.illuminant, wl) * response.sample(response.sensor, wl) *
        weights[b];
    rows.x[b] = common * response.sample(response.xbar, wl);
    rows.y[b] = common * response.sample(response.ybar, wl);
    rows.z[b] = common * response.sample(response.zbar, wl);
    norm_y += rows.y[b];
  }
  if (norm_y <= 0) {
    throw std::runtime_error("hsi_to_rgb: cube wavelengths do not overlap the response curves");
  }
  const double inv = 1.0 / norm_y;
  for (int b = 0; b < cube.bands; ++b) {
    rows.x[b] *= inv;
    rows.y[b] *= inv;
    rows.z[b] *= inv;
  }
  return rows;
}

}  // namespace

double SpectralResponse::sample(const std::vector<double>& curve, double wavelength) const {
  if (wavelength <= wavelengths.front()) {
    return wavelength == wavelengths.front() ? curve.front() : 0.0;
  }
  if (wavelength >= wavelengths.back()) {
    return wavelength == wavelengths.back() ? curve.back() : 0.0;
  }
  const auto it = std::upper_bound(wavelengths.begin(), wavelengths.end(), wavelength);
  const std::size_t i = static_cast<std::size_t>(it - wavelengths.begin()) - 1;
  const double f = (wavelength - wavelengths[i]) / (wavelengths[i + 1] - wavelengths[i]);
  return curve[i] + f * (curve[i + 1] - curve[i]);
}

void SpectralResponse::validate() const {
  const std::size_t n = wavelengths.size();
  if (n < 2) throw std::runtime_error("spectral response: need at least two grid points");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(wavelengths[i] > wavelengths[i - 1])) {
      throw std::runtime_error("spectral response: grid must be strictly increasing");
    }
  }
  for (const auto* curve : {&xbar, &ybar, &zbar, &illuminant, &sensor}) {
    if (curve->size() != n) throw std::runtime_error("spectral response: curve/grid size mismatch");
    for (double v : *curve) {
      if (!(v >= 0) || !std::isfinite(v)) {
        throw std::runtime_error("spectral response: curves must be non-negative and finite");
      }
    }
  }
  double y_integral = 0;
  const auto w = trapezoid_weights(wavelengths);
  for (std::size_t i = 0; i < n; ++i) y_integral += w[i] * ybar[i];
  if (y_integral <= 0) throw std::runtime_error("spectral response: ybar must have positive integral");
}

SpectralResponse SpectralResponse::from_csv_files(const std::filesystem::path& cmf_x_path,
                                                  const std::filesystem::path& cmf_y_path,
                                                  const std::filesystem::path& cmf_z_path,
                                                  const std::filesystem::path& illuminant_path,
                                                  const std::filesystem::path& sensor_path) {
  const Curve cx = load_curve_csv(cmf_x_path);
  const Curve cy = load_curve_csv(cmf_y_path);
  const Curve cz = load_curve_csv(cmf_z_path);
  const Curve il = load_curve_csv(illuminant_path);
  const Curve se = load_curve_csv(sensor_path);

  double lo = cx.wl.front(), hi = cx.wl.back();
  for (const Curve* c : {&cy, &cz, &il, &se}) {
    lo = std::max(lo, c->wl.front());
    hi = std::min(hi, c->wl.back());
  }
  if (hi - lo < 2.0) {
    throw std::runtime_error("spectral response: curves share too little wavelength coverage");
  }

  SpectralResponse r;
  for (double wl = std::ceil(lo); wl <= std::floor(hi); wl += 1.0) {
    r.wavelengths.push_back(wl);
    r.xbar.push_back(std::max(interp_curve(cx, wl), 0.0));
    r.ybar.push_back(std::max(interp_curve(cy, wl), 0.0));
    r.zbar.push_back(std::max(interp_curve(cz, wl), 0.0));
    r.illuminant.push_back(std::max(interp_curve(il, wl), 0.0));
    r.sensor.push_back(std::max(interp_curve(se, wl), 0.0));
  }
  r.validate();
  return r;
}

SpectralResponse SpectralResponse::from_csv_dir(const std::filesystem::path& dir) {
  return from_csv_files(dir / "cmf_x.csv", dir / "cmf_y.csv", dir / "cmf_z.csv",
                        dir / "illuminant.csv", dir / "sensor.csv");
}

void SpectralResponse::dump_csv_dir(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  const auto dump = [&](const char* name, const std::vector<double>& curve) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write curve file in " + dir.string());
    out << "# wavelength_nm,value\n";
    out.precision(10);
    for (std::size_t i = 0; i < wavelengths.size(); ++i) {
      out << wavelengths[i] << "," << curve[i] << "\n";
    }
  };
  dump("cmf_x.csv", xbar);
  dump("cmf_y.csv", ybar);
  dump("cmf_z.csv", zbar);
  dump("illuminant.csv", illuminant);
  dump("sensor.csv", sensor);
}

LinearRgbImage hsi_to_xyz(const HyperspectralCube& cube, const SpectralResponse& response) {
  cube.validate();
  response.validate();
  const ProjectionRows rows = xyz_rows(cube, response);

  LinearRgbImage out;
  out.height = cube.height;
  out.width = cube.width;
  out.clipped_wavelengths = rows.clipped;
  const std::size_t plane = cube.plane_size();
  out.r.assign(plane, 0.0);
  out.g.assign(plane, 0.0);
  out.b.assign(plane, 0.0);
  for (int band = 0; band < cube.bands; ++band) {
    const float* src = cube.data.data() + static_cast<std::size_t>(band) * plane;
    const double cx = rows.x[band], cy = rows.y[band], cz = rows.z[band];
    for (std::size_t i = 0; i < plane; ++i) {
      out.r[i] += cx * src[i];
      out.g[i] += cy * src[i];
      out.b[i] += cz * src[i];
    }
  }
  return out;
}

LinearRgbImage hsi_to_linear_rgb(const HyperspectralCube& cube,
                                 const SpectralResponse& response) {
  LinearRgbImage xyz = hsi_to_xyz(cube, response);
  const std::size_t plane = xyz.r.size();
  LinearRgbImage out;
  out.height = xyz.height;
  out.width = xyz.width;
  out.clipped_wavelengths = xyz.clipped_wavelengths;
  out.r.resize(plane);
  out.g.resize(plane);
  out.b.resize(plane);
  const auto& m = kXyzToLinearSrgb;
  for (std::size_t i = 0; i < plane; ++i) {
    const double x = xyz.r[i], y = xyz.g[i], z = xyz.b[i];
    out.r[i] = m[0] * x + m[1] * y + m[2] * z;
    out.g[i] = m[3] * x + m[4] * y + m[5] * z;
    out.b[i] = m[6] * x + m[7] * y + m[8] * z;
  }
  return out;
}

HyperspectralCube hsi_to_rgb(const HyperspectralCube& cube, const SpectralResponse& response) {
  LinearRgbImage rgb = hsi_to_linear_rgb(cube, response);
  if (rgb.clipped_wavelengths) {
    std::cerr << "hsi_to_rgb: some cube wavelengths fall outside the response curves; "
                 "their bands were ignored\n";
  }

  const std::size_t plane = rgb.r.size();
  double max_value = 0;
  for (const auto* chan : {&rgb.r, &rgb.g, &rgb.b}) {
    for (double v : *chan) max_value = std::max(max_value, v);
  }
  const double scale = max_value > 1.0 ? 1.0 / max_value : 1.0;

  HyperspectralCube out;
  out.height = cube.height;
  out.width = cube.width;
  out.bands = 3;
  out.wavelengths_nm = {450.0, 550.0, 600.0};  // blue, green, red
  out.data.resize(plane * 3);
  for (std::size_t i = 0; i < plane; ++i) {
    out.data[i] = static_cast<float>(std::max(rgb.b[i], 0.0) * scale);
    out.data[plane + i] = static_cast<float>(std::max(rgb.g[i], 0.0) * scale);
    out.data[2 * plane + i] = static_cast<float>(std::max(rgb.r[i], 0.0) * scale);
  }
  out.validate();
  return out;
}

void apply_srgb_gamma(HyperspectralCube& rgb) {
  for (float& v : rgb.data) {
    const double u = std::clamp(static_cast<double>(v), 0.0, 1.0);
    v = static_cast<float>(u <= 0.0031308 ? 12.92 * u
                                          : 1.055 * std::pow(u, 1.0 / 2.4) - 0.055);
  }
}

}  // namespace bandvote
