// Bundled spectral tables for the default conversion. The XYZ color matching
// functions use the piecewise-Gaussian analytic fits of Wyman, Sloan and
// Shirley (JCGT 2013); the illuminant is the CIE D65 daylight table at 10 nm;
// the sensor curve is a generic normalized silicon photodiode responsivity.

#include <algorithm>
#include <cmath>

#include "bandvote/colorimetry.hpp"

namespace bandvote {

namespace {

double piecewise_gaussian(double x, double mu, double sigma_l, double sigma_r) {
  const double s = (x < mu) ? sigma_l : sigma_r;
  const double t = (x - mu) / s;
  return std::exp(-0.5 * t * t);
}

double cmf_x(double wl) {
  return 1.056 * piecewise_gaussian(wl, 599.8, 37.9, 31.0) +
         0.362 * piecewise_gaussian(wl, 442.0, 16.0, 26.7) -
         0.065 * piecewise_gaussian(wl, 501.1, 20.4, 26.2);
}

double cmf_y(double wl) {
  return 0.821 * piecewise_gaussian(wl, 568.8, 46.9, 40.5) +
         0.286 * piecewise_gaussian(wl, 530.9, 16.3, 31.1);
}

double cmf_z(double wl) {
  return 1.217 * piecewise_gaussian(wl, 437.0, 11.8, 36.0) +
         0.681 * piecewise_gaussian(wl, 459.0, 26.0, 13.8);
}

// CIE D65 relative spectral power, 380-830 nm at 10 nm.
constexpr double kD65Start = 380.0;
constexpr double kD65Step = 10.0;
constexpr double kD65[] = {
    49.9755, 54.6482, 82.7549, 91.486,  93.4318, 86.6823, 104.865, 117.008, 117.812, 114.861,
    115.923, 108.811, 109.354, 107.802, 104.790, 107.689, 104.405, 104.046, 100.000, 96.3342,
    95.788,  88.6856, 90.0062, 89.5991, 87.6987, 83.2886, 83.6992, 80.0268, 80.2146, 82.2778,
    78.2842, 69.7213, 71.6091, 74.349,  61.604,  69.8856, 75.087,  63.5927, 46.4182, 66.8054,
    63.3828, 64.304,  59.4519, 51.959,  57.4406, 60.3125,
};

// Generic silicon photodiode relative responsivity, 350-1100 nm at 50 nm,
// normalized to its near-infrared peak.
constexpr double kSiliconStart = 350.0;
constexpr double kSiliconStep = 50.0;
constexpr double kSilicon[] = {
    0.08, 0.18, 0.28, 0.38, 0.47, 0.56, 0.65, 0.73,
    0.80, 0.87, 0.92, 0.97, 1.00, 0.95, 0.70, 0.25,
};

// Linear interpolation of a uniformly spaced table, clamped at its ends.
template <std::size_t N>
double table_lookup(const double (&table)[N], double start, double step, double wl) {
  const double pos = (wl - start) / step;
  if (pos <= 0) return table[0];
  if (pos >= static_cast<double>(N - 1)) return table[N - 1];
  const std::size_t i = static_cast<std::size_t>(pos);
  const double f = pos - static_cast<double>(i);
  return table[i] + f * (table[i + 1] - table[i]);
}

}  // namespace

SpectralResponse SpectralResponse::standard() {
  SpectralResponse r;
  for (int wl = 360; wl <= 1100; ++wl) {
    const double w = wl;
    r.wavelengths.push_back(w);
    r.xbar.push_back(std::max(cmf_x(w), 0.0));
    r.ybar.push_back(std::max(cmf_y(w), 0.0));
    r.zbar.push_back(std::max(cmf_z(w), 0.0));
    r.illuminant.push_back(table_lookup(kD65, kD65Start, kD65Step, w));
    r.sensor.push_back(table_lookup(kSilicon, kSiliconStart, kSiliconStep, w));
  }
  r.validate();
  return r;
}

}  // namespace bandvote
