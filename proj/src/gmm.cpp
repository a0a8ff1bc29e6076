#include "bandvote/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "bandvote/cube.hpp"
#include "bandvote/parallel.hpp"
#include "bandvote/rng.hpp"

namespace bandvote {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

// Marks components that ended up numerically identical; with k >= 2 this
// means the data could not support k distinct Gaussians.
bool has_collapsed_components(const GmmModel& m) {
  for (int i = 0; i < m.k; ++i) {
    for (int j = i + 1; j < m.k; ++j) {
      bool same = true;
      for (int d = 0; d < m.dim && same; ++d) {
        if (std::abs(m.means[i * m.dim + d] - m.means[j * m.dim + d]) > 1e-9 ||
            std::abs(m.variances[i * m.dim + d] - m.variances[j * m.dim + d]) > 1e-9) {
          same = false;
        }
      }
      if (same) return true;
    }
  }
  return false;
}

struct Expectation {
  // Per-component accumulators plus the data log-likelihood.
  std::vector<double> nk;      // k
  std::vector<double> sum_x;   // k x dim
  std::vector<double> sum_x2;  // k x dim
  double total_ll = 0;
};

// Log-densities of one point for all components, written into logp.
void component_log_densities(const GmmModel& m, const std::vector<double>& log_const,
                             const std::vector<double>& inv_var, const float* x, double* logp) {
  for (int c = 0; c < m.k; ++c) {
    const double* mu = m.means.data() + static_cast<std::size_t>(c) * m.dim;
    const double* iv = inv_var.data() + static_cast<std::size_t>(c) * m.dim;
    double quad = 0;
    for (int d = 0; d < m.dim; ++d) {
      const double diff = x[d] - mu[d];
      quad += diff * diff * iv[d];
    }
    logp[c] = log_const[c] - 0.5 * quad;
  }
}

double log_sum_exp(const double* v, int n) {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) m = std::max(m, v[i]);
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (int i = 0; i < n; ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

}  // namespace

void GmmModel::validate() const {
  if (k < 1 || dim < 1) throw std::runtime_error("gmm: k and dim must be >= 1");
  if (static_cast<int>(weights.size()) != k ||
      static_cast<int>(means.size()) != k * dim ||
      static_cast<int>(variances.size()) != k * dim) {
    throw std::runtime_error("gmm: parameter array sizes do not match k and dim");
  }
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw std::runtime_error("gmm: weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::runtime_error("gmm: weights must sum to 1");
  for (double v : variances) {
    if (!(v >= variance_floor)) throw std::runtime_error("gmm: variance below floor");
  }
  for (double v : means) {
    if (!std::isfinite(v)) throw std::runtime_error("gmm: non-finite mean");
  }
}

double gmm_posteriors(const GmmModel& model, const float* x, double* gamma) {
  std::vector<double> inv_var(model.variances.size());
  std::vector<double> log_const(model.k);
  for (int c = 0; c < model.k; ++c) {
    double ld = 0;
    for (int d = 0; d < model.dim; ++d) {
      const double var = model.variances[c * model.dim + d];
      inv_var[c * model.dim + d] = 1.0 / var;
      ld += std::log(var);
    }
    log_const[c] = std::log(std::max(model.weights[c], 1e-300)) -
                   0.5 * (model.dim * kLog2Pi + ld);
  }
  std::vector<double> logp(model.k);
  component_log_densities(model, log_const, inv_var, x, logp.data());
  const double lse = log_sum_exp(logp.data(), model.k);
  for (int c = 0; c < model.k; ++c) gamma[c] = std::exp(logp[c] - lse);
  return lse;
}

GmmFit fit_gmm(const std::vector<float>& data, int dim, int k, const EmConfig& config) {
  if (dim < 1 || data.size() % dim != 0) {
    throw std::invalid_argument("fit_gmm: data size is not a multiple of dim");
  }
  return fit_gmm(data.data(), static_cast<int>(data.size() / dim), dim, k, config);
}

GmmFit fit_gmm(const float* data, int n, int dim, int k, const EmConfig& config) {
  if (k < 1) throw std::invalid_argument("fit_gmm: k must be >= 1");
  if (n < k) throw std::invalid_argument("fit_gmm: need at least k points");
  if (config.max_iters < 1 || config.rel_tol <= 0) {
    throw std::invalid_argument("fit_gmm: invalid EM configuration");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * dim; ++i) {
    if (!std::isfinite(data[i])) throw std::invalid_argument("fit_gmm: non-finite descriptor");
  }

  const double floor = config.variance_floor;
  GmmModel model;
  model.k = k;
  model.dim = dim;
  model.variance_floor = floor;
  model.weights.assign(k, 0.0);
  model.means.assign(static_cast<std::size_t>(k) * dim, 0.0);
  model.variances.assign(static_cast<std::size_t>(k) * dim, 0.0);

  // k-means++ seeding.
  CounterRng rng = make_rng(config.seed, 0);
  std::vector<int> centers(k);
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  centers[0] = static_cast<int>(rng.next_below(n));
  for (int c = 1; c < k; ++c) {
    const float* prev = data + static_cast<std::size_t>(centers[c - 1]) * dim;
    double total = 0;
    for (int i = 0; i < n; ++i) {
      const float* x = data + static_cast<std::size_t>(i) * dim;
      double d2 = 0;
      for (int d = 0; d < dim; ++d) {
        const double diff = x[d] - prev[d];
        d2 += diff * diff;
      }
      dist2[i] = std::min(dist2[i], d2);
      total += dist2[i];
    }
    if (total <= 0) {
      centers[c] = static_cast<int>(rng.next_below(n));
      continue;
    }
    double u = rng.next_double() * total;
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      u -= dist2[i];
      if (u <= 0) {
        chosen = i;
        break;
      }
    }
    centers[c] = chosen;
  }

  // One hard assignment to the seeded centers gives the moment estimates.
  {
    std::vector<int> assign(n, 0);
    for (int i = 0; i < n; ++i) {
      const float* x = data + static_cast<std::size_t>(i) * dim;
      double best = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const float* ctr = data + static_cast<std::size_t>(centers[c]) * dim;
        double d2 = 0;
        for (int d = 0; d < dim; ++d) {
          const double diff = x[d] - ctr[d];
          d2 += diff * diff;
        }
        if (d2 < best) {
          best = d2;
          assign[i] = c;
        }
      }
    }
    std::vector<double> count(k, 0.0);
    for (int i = 0; i < n; ++i) {
      const float* x = data + static_cast<std::size_t>(i) * dim;
      const int c = assign[i];
      count[c] += 1;
      for (int d = 0; d < dim; ++d) {
        model.means[c * dim + d] += x[d];
        model.variances[c * dim + d] += static_cast<double>(x[d]) * x[d];
      }
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) {
        for (int d = 0; d < dim; ++d) {
          const double mu = model.means[c * dim + d] / count[c];
          model.means[c * dim + d] = mu;
          model.variances[c * dim + d] =
              std::max(model.variances[c * dim + d] / count[c] - mu * mu, floor);
        }
      } else {
        // Empty cluster: keep its seed point with floored variance.
        const float* ctr = data + static_cast<std::size_t>(centers[c]) * dim;
        for (int d = 0; d < dim; ++d) {
          model.means[c * dim + d] = ctr[d];
          model.variances[c * dim + d] = floor;
        }
      }
      model.weights[c] = std::max(count[c], 1.0) / n;
    }
    double wsum = 0;
    for (double w : model.weights) wsum += w;
    for (double& w : model.weights) w /= wsum;
  }

  GmmFit fit;
  std::vector<double> inv_var(static_cast<std::size_t>(k) * dim);
  std::vector<double> log_const(k);

  // Fixed-size blocks combined in index order keep the reduction
  // deterministic for any thread count.
  constexpr int kBlock = 1024;
  const int n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<Expectation> blocks(n_blocks);

  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < config.max_iters; ++iter) {
    for (int c = 0; c < k; ++c) {
      double ld = 0;
      for (int d = 0; d < dim; ++d) {
        const double var = model.variances[c * dim + d];
        inv_var[c * dim + d] = 1.0 / var;
        ld += std::log(var);
      }
      log_const[c] = std::log(std::max(model.weights[c], 1e-300)) -
                     0.5 * (dim * kLog2Pi + ld);
    }

    parallel_for(static_cast<std::size_t>(n_blocks), [&](std::size_t bi) {
      Expectation& e = blocks[bi];
      e.nk.assign(k, 0.0);
      e.sum_x.assign(static_cast<std::size_t>(k) * dim, 0.0);
      e.sum_x2.assign(static_cast<std::size_t>(k) * dim, 0.0);
      e.total_ll = 0;
      std::vector<double> logp(k);
      const int lo = static_cast<int>(bi) * kBlock;
      const int hi = std::min(lo + kBlock, n);
      for (int i = lo; i < hi; ++i) {
        const float* x = data + static_cast<std::size_t>(i) * dim;
        component_log_densities(model, log_const, inv_var, x, logp.data());
        const double lse = log_sum_exp(logp.data(), k);
        e.total_ll += lse;
        for (int c = 0; c < k; ++c) {
          const double g = std::exp(logp[c] - lse);
          if (g < 1e-12) continue;
          e.nk[c] += g;
          double* sx = e.sum_x.data() + static_cast<std::size_t>(c) * dim;
          double* sx2 = e.sum_x2.data() + static_cast<std::size_t>(c) * dim;
          for (int d = 0; d < dim; ++d) {
            sx[d] += g * x[d];
            sx2[d] += g * static_cast<double>(x[d]) * x[d];
          }
        }
      }
    });

    Expectation total;
    total.nk.assign(k, 0.0);
    total.sum_x.assign(static_cast<std::size_t>(k) * dim, 0.0);
    total.sum_x2.assign(static_cast<std::size_t>(k) * dim, 0.0);
    for (const auto& e : blocks) {
      total.total_ll += e.total_ll;
      for (int c = 0; c < k; ++c) total.nk[c] += e.nk[c];
      for (std::size_t i = 0; i < total.sum_x.size(); ++i) {
        total.sum_x[i] += e.sum_x[i];
        total.sum_x2[i] += e.sum_x2[i];
      }
    }

    const double avg_ll = total.total_ll / n;
    fit.log_likelihood.push_back(avg_ll);
    fit.iterations = iter + 1;

    // M-step.
    for (int c = 0; c < k; ++c) {
      if (total.nk[c] > 1e-10) {
        for (int d = 0; d < dim; ++d) {
          const double mu = total.sum_x[c * dim + d] / total.nk[c];
          model.means[c * dim + d] = mu;
          model.variances[c * dim + d] =
              std::max(total.sum_x2[c * dim + d] / total.nk[c] - mu * mu, floor);
        }
      }
      model.weights[c] = total.nk[c] / n;
    }
    double wsum = 0;
    for (double w : model.weights) wsum += w;
    if (wsum <= 0) throw std::runtime_error("fit_gmm: all responsibilities vanished");
    for (double& w : model.weights) w /= wsum;

    if (iter > 0) {
      const double rel = (avg_ll - prev_ll) / std::max(std::abs(prev_ll), 1e-12);
      if (rel < config.rel_tol) {
        fit.converged = true;
        prev_ll = avg_ll;
        break;
      }
    }
    prev_ll = avg_ll;
  }

  if (k >= 2 && has_collapsed_components(model)) {
    throw std::runtime_error(
        "fit_gmm: singular fit, components collapsed (data cannot support k clusters)");
  }
  model.validate();
  fit.model = std::move(model);
  return fit;
}

void save_gmm(const GmmModel& model, const std::filesystem::path& path) {
  model.validate();
  std::ofstream header(path);
  if (!header) throw std::runtime_error("cannot open for writing: " + path.string());
  header << "k: " << model.k << "\n";
  header << "dim: " << model.dim << "\n";
  header << "variance_floor: " << model.variance_floor << "\n";
  header << "dtype: float32le\n";
  header.close();

  std::vector<float> payload;
  payload.reserve(model.weights.size() + model.means.size() + model.variances.size());
  for (double v : model.weights) payload.push_back(static_cast<float>(v));
  for (double v : model.means) payload.push_back(static_cast<float>(v));
  for (double v : model.variances) payload.push_back(static_cast<float>(v));
  write_f32_le(payload, cube_payload_path(path));
}

GmmModel load_gmm(const std::filesystem::path& path) {
  std::ifstream header(path);
  if (!header) throw std::runtime_error("cannot open gmm header: " + path.string());
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(header, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    const auto a = value.find_first_not_of(" \t\r");
    value = (a == std::string::npos) ? std::string() : value.substr(a);
    fields[key] = value;
  }
  GmmModel model;
  model.k = std::stoi(fields.at("k"));
  model.dim = std::stoi(fields.at("dim"));
  model.variance_floor = std::stod(fields.at("variance_floor"));

  const std::vector<float> payload = read_f32_le(cube_payload_path(path));
  const std::size_t kd = static_cast<std::size_t>(model.k) * model.dim;
  if (payload.size() != model.k + 2 * kd) {
    throw std::runtime_error("gmm payload size does not match header: " + path.string());
  }
  model.weights.assign(payload.begin(), payload.begin() + model.k);
  model.means.assign(payload.begin() + model.k, payload.begin() + model.k + kd);
  model.variances.assign(payload.begin() + model.k + kd, payload.end());

  double wsum = 0;
  for (double w : model.weights) wsum += w;
  if (wsum <= 0) throw std::runtime_error("gmm: non-positive weight sum in " + path.string());
  for (double& w : model.weights) w /= wsum;
  for (double& v : model.variances) v = std::max(v, model.variance_floor);
  model.validate();
  return model;
}

}  // namespace bandvote
