#include "pom/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pom/lattice.hpp"
#include "pom/parallel.hpp"
#include "pom/rng.hpp"

namespace pom {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * kPi);

// Streaming log-sum-exp of log-weights, plus the second moment for the ESS.
struct WeightAccumulator {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;     // sum exp(w - max)
  double sum_sq = 0.0;  // sum exp(2 (w - max))
  long long count = 0;

  void add(double w) {
    if (w > max) {
      const double scale = std::exp(max - w);
      sum *= scale;
      sum_sq *= scale * scale;
      max = w;
    }
    const double e = std::exp(w - max);
    sum += e;
    sum_sq += e * e;
    ++count;
  }

  [[nodiscard]] double log_sum() const { return max + std::log(sum); }
};

double log_sum_exp(const std::vector<double>& values) {
  const double m = *std::max_element(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

// Samples angles uniformly on (center - half_width, center + half_width) at
// every site and averages exp(-beta (H + offset)).
LogZEstimate sample_log_z(int n, double j1, double j2, double beta, double offset, double center,
                          double half_width, double log_mass_per_site, long long samples,
                          std::uint64_t seed, int threads) {
  if (samples <= 0) throw std::invalid_argument("sample count must be positive");
  const TorusLattice lattice(n);
  const int sites = lattice.site_count();
  std::vector<int> right(sites), up(sites);
  std::vector<char> right_x(sites), up_x(sites);
  for (int i = 0; i < sites; ++i) {
    right[i] = lattice.right(i);
    up[i] = lattice.up(i);
    right_x[i] = lattice.right_type(i) == EdgeType::X;
    up_x[i] = lattice.up_type(i) == EdgeType::X;
  }

  std::array<WeightAccumulator, kOracleBatches> batches{};
  parallel_for(kOracleBatches, threads, [&](int b) {
    const long long count =
        samples / kOracleBatches + (b < samples % kOracleBatches ? 1 : 0);
    Rng rng(seed, static_cast<std::uint64_t>(b));
    std::vector<double> sx(sites), sz(sites);
    WeightAccumulator acc;
    for (long long s = 0; s < count; ++s) {
      for (int i = 0; i < sites; ++i) {
        const double a = center + half_width * (2.0 * rng.uniform() - 1.0);
        sx[i] = std::cos(a);
        sz[i] = std::sin(a);
      }
      double xb = 0.0;
      double zb = 0.0;
      for (int i = 0; i < sites; ++i) {
        if (right_x[i]) {
          xb += sx[i] * sx[right[i]];
        } else {
          zb += sz[i] * sz[right[i]];
        }
        if (up_x[i]) {
          xb += sx[i] * sx[up[i]];
        } else {
          zb += sz[i] * sz[up[i]];
        }
      }
      const double h = -j1 * xb - j2 * zb;
      acc.add(-beta * (h + offset));
    }
    batches[b] = acc;
  });

  LogZEstimate out;
  out.samples = samples;
  std::vector<double> logs;  // log sum of weights per non-empty batch
  std::vector<long long> counts;
  double total_sum = 0.0;
  double total_sq = 0.0;
  double global_max = -std::numeric_limits<double>::infinity();
  for (const auto& b : batches) {
    if (b.count == 0) continue;
    logs.push_back(b.log_sum());
    counts.push_back(b.count);
    global_max = std::max(global_max, b.max);
  }
  for (const auto& b : batches) {
    if (b.count == 0) continue;
    const double scale = std::exp(b.max - global_max);
    total_sum += b.sum * scale;
    total_sq += b.sum_sq * scale * scale;
  }
  out.effective_samples = total_sum * total_sum / total_sq;

  const double log_mean = log_sum_exp(logs) - std::log(static_cast<double>(samples));
  const double norm = static_cast<double>(sites);
  out.estimate = log_mass_per_site + log_mean / norm;

  const int nb = static_cast<int>(logs.size());
  if (nb < kOracleBatches || samples < 2LL * kOracleBatches) {
    out.std_error = std::numeric_limits<double>::infinity();
    out.reliable = false;
    return out;
  }
  std::vector<double> loo(nb);
  double loo_mean = 0.0;
  for (int b = 0; b < nb; ++b) {
    std::vector<double> rest;
    rest.reserve(nb - 1);
    for (int c = 0; c < nb; ++c) {
      if (c != b) rest.push_back(logs[c]);
    }
    loo[b] = log_sum_exp(rest) - std::log(static_cast<double>(samples - counts[b]));
    loo_mean += loo[b] / nb;
  }
  double var = 0.0;
  for (double v : loo) var += (v - loo_mean) * (v - loo_mean);
  var *= static_cast<double>(nb - 1) / nb;
  out.std_error = std::sqrt(var) / norm;
  out.reliable = out.effective_samples >= 1000.0 && std::isfinite(out.std_error);
  return out;
}

}  // namespace

double ConstrainedEnsemble::delta_prime() const { return 2.0 * std::asin(0.5 * delta); }

void ConstrainedEnsemble::validate() const {
  if (n != 2 && n != 4) {
    throw std::invalid_argument("constrained oracle supports lattice size 2 or 4, got " +
                                std::to_string(n));
  }
  if (!(delta > 0.0) || delta > 2.0) throw std::invalid_argument("Delta must lie in (0, 2]");
  if (!(beta_j >= 0.0) || !std::isfinite(beta_j)) {
    throw std::invalid_argument("beta J must be finite and >= 0");
  }
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
}

LogZEstimate constrained_log_z(const ConstrainedEnsemble& ensemble, long long samples,
                               std::uint64_t seed, int threads) {
  ensemble.validate();
  const double dp = ensemble.delta_prime();
  const double log_mass = kLogSqrt2Pi + std::log(dp / kPi);
  const double offset = static_cast<double>(ensemble.n) * ensemble.n;  // J N^2 with J = 1
  return sample_log_z(ensemble.n, 1.0, 1.0, ensemble.beta_j, offset, ensemble.theta, dp, log_mass,
                      samples, seed, threads);
}

LogZEstimate full_log_z(int n, const Couplings& couplings, long long samples, std::uint64_t seed,
                        int threads) {
  if (n != 2) throw std::invalid_argument("full partition function oracle supports N = 2 only");
  couplings.validate();
  return sample_log_z(n, couplings.j1, couplings.j2, couplings.beta, 0.0, 0.0, kPi, kLogSqrt2Pi,
                      samples, seed, threads);
}

double admissible_delta_floor(double beta_j, double delta) {
  return std::max(1.0 / (beta_j * delta * delta), beta_j * delta * delta * delta);
}

}  // namespace pom
