#include "bandvote/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bandvote/rng.hpp"

namespace bandvote {

namespace {

constexpr std::uint64_t kStreamSubjects = 1;
constexpr std::uint64_t kStreamNoise = 2;

struct Bump {
  double center = 0, width = 1, amplitude = 0;
};

// Subject-specific smooth spectral signature in [-1, 1].
struct SubjectSpectrum {
  std::vector<Bump> bumps;

  double eval(double wavelength) const {
    double v = 0;
    for (const auto& b : bumps) {
      const double t = (wavelength - b.center) / b.width;
      v += b.amplitude * std::exp(-0.5 * t * t);
    }
    return std::clamp(v, -1.0, 1.0);
  }
};

// Subject-specific arrangement of signed Gaussian blobs in [-1, 1],
// evaluated over normalized image coordinates.
struct SubjectLayout {
  struct Blob {
    double u = 0, v = 0, radius = 0.1, amplitude = 0;
  };
  std::vector<Blob> blobs;

  double eval(double u, double v) const {
    double s = 0;
    for (const auto& b : blobs) {
      const double du = (u - b.u) / b.radius;
      const double dv = (v - b.v) / b.radius;
      s += b.amplitude * std::exp(-0.5 * (du * du + dv * dv));
    }
    return std::clamp(s, -1.0, 1.0);
  }
};

SubjectSpectrum make_spectrum(CounterRng rng, double wl_min, double wl_max) {
  SubjectSpectrum s;
  const double span = wl_max - wl_min;
  for (int i = 0; i < 3; ++i) {
    Bump b;
    b.center = rng.next_uniform(wl_min, wl_max);
    b.width = rng.next_uniform(span / 20.0, span / 6.0);
    b.amplitude = rng.next_uniform(-1.0, 1.0);
    s.bumps.push_back(b);
  }
  return s;
}

SubjectLayout make_layout(CounterRng rng) {
  SubjectLayout l;
  for (int i = 0; i < 4; ++i) {
    SubjectLayout::Blob b;
    b.u = rng.next_uniform(-0.35, 0.35);
    b.v = rng.next_uniform(-0.35, 0.35);
    b.radius = rng.next_uniform(0.06, 0.18);
    b.amplitude = rng.next_uniform(0.5, 1.0) * (rng.next_below(2) ? 1.0 : -1.0);
    l.blobs.push_back(b);
  }
  return l;
}

// Shared face-like base: a bright centered lobe plus a mild horizontal wave,
// identical for all subjects.
double base_pattern(double u, double v) {
  const double e = (u / 0.33) * (u / 0.33) + (v / 0.40) * (v / 0.40);
  return 0.30 + 0.50 * std::exp(-e) + 0.06 * std::cos(2.0 * std::numbers::pi * u * 3.0);
}

double base_spectrum(double wavelength, double wl_min, double wl_max) {
  const double t = (wavelength - wl_min) / std::max(wl_max - wl_min, 1.0);
  return 0.75 + 0.20 * std::sin(2.0 * std::numbers::pi * t * 0.5);
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_subjects < 1) throw std::invalid_argument("synthetic: n_subjects must be >= 1");
  if (samples_per_subject < 3) {
    throw std::invalid_argument("synthetic: samples_per_subject must be >= 3");
  }
  if (height < 1 || width < 1 || bands < 1) {
    throw std::invalid_argument("synthetic: dimensions must be >= 1");
  }
  if (spectral_contrast < 0 || spectral_contrast > 1 || spatial_contrast < 0 ||
      spatial_contrast > 1) {
    throw std::invalid_argument("synthetic: contrasts must lie in [0, 1]");
  }
  if (noise_sigma < 0) throw std::invalid_argument("synthetic: noise_sigma must be >= 0");
}

DatasetManifest generate_synthetic(const SyntheticSpec& spec,
                                   const std::filesystem::path& out_dir) {
  spec.validate();
  std::filesystem::create_directories(out_dir);

  const double wl_min = 400.0;
  const double wl_step = 10.0;
  std::vector<double> wavelengths(spec.bands);
  for (int b = 0; b < spec.bands; ++b) wavelengths[b] = wl_min + wl_step * b;
  const double wl_max = wavelengths.back();

  CounterRng subject_root = make_rng(spec.seed, kStreamSubjects);
  CounterRng noise_root = make_rng(spec.seed, kStreamNoise);

  DatasetManifest manifest;
  manifest.band_exclusion = {0, 0};
  manifest.base_dir = out_dir;

  for (int s = 0; s < spec.n_subjects; ++s) {
    char subject_id[16];
    std::snprintf(subject_id, sizeof(subject_id), "subj%03d", s);
    manifest.subjects.emplace_back(subject_id);

    const SubjectSpectrum spectrum =
        make_spectrum(subject_root.fork(2 * static_cast<std::uint64_t>(s)), wl_min,
                      std::max(wl_max, wl_min + 1.0));
    const SubjectLayout layout =
        make_layout(subject_root.fork(2 * static_cast<std::uint64_t>(s) + 1));

    // Per-band subject signature and base spectrum, precomputed.
    std::vector<double> sig(spec.bands), base_spec(spec.bands);
    for (int b = 0; b < spec.bands; ++b) {
      sig[b] = spectrum.eval(wavelengths[b]);
      base_spec[b] = base_spectrum(wavelengths[b], wl_min, wl_max);
    }

    for (int j = 0; j < spec.samples_per_subject; ++j) {
      HyperspectralCube cube;
      cube.height = spec.height;
      cube.width = spec.width;
      cube.bands = spec.bands;
      cube.wavelengths_nm = wavelengths;
      cube.data.resize(cube.plane_size() * spec.bands);

      CounterRng noise = noise_root.fork(static_cast<std::uint64_t>(s) *
                                             spec.samples_per_subject +
                                         j);
      for (int b = 0; b < spec.bands; ++b) {
        for (int y = 0; y < spec.height; ++y) {
          const double v = (y + 0.5) / spec.height - 0.5;
          for (int x = 0; x < spec.width; ++x) {
            const double u = (x + 0.5) / spec.width - 0.5;
            const double common = base_pattern(u, v) * base_spec[b];
            const double spatial = 1.0 + 0.6 * spec.spatial_contrast * layout.eval(u, v);
            double value = common * spatial +
                           0.35 * spec.spectral_contrast * sig[b] * base_pattern(u, v);
            if (spec.noise_sigma > 0) value += spec.noise_sigma * noise.next_gaussian();
            cube.at(b, y, x) = static_cast<float>(std::clamp(value, 0.0, 1.0));
          }
        }
      }

      char name[48];
      std::snprintf(name, sizeof(name), "%s_%02d.cube", subject_id, j);
      write_cube(cube, out_dir / name);
      manifest.samples.push_back({subject_id, name, j});
    }
  }

  save_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace bandvote
