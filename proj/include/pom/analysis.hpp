#pragma once

#include <span>
#include <string>
#include <vector>

#include "pom/lattice.hpp"
#include "pom/observables.hpp"
#include "pom/spin_config.hpp"

namespace pom {

struct AutocorrelationTime {
  double tau_int = 0.5;
  int window = 0;
  // tau_int is only a lower bound: the window criterion W >= c tau(W) was not
  // met for W <= n/2, the series is shorter than 50 tau, or it has no variance.
  bool lower_bound = false;
  bool degenerate = false;  // zero variance
};

/**
 * Integrated autocorrelation time with automatic windowing: the smallest W
 * W <= n/2 with W >= c * tau(W), tau(W) = 1/2 + sum_{t=1..W} rho(t). Autocovariances
 * come from an FFT. Throws std::domain_error for fewer than 100 points.
 * A constant series is flagged degenerate and reported as tau >= length.
 */
[[nodiscard]] AutocorrelationTime autocorrelation_time(std::span<const double> series,
                                                       double c = 6.0);

struct MeanError {
  double mean = 0.0;
  double error = 0.0;  // blocking estimate
  int levels = 0;      // blocking levels with >= 32 blocks
};

/// Mean with a blocking error bar (pairwise block averaging, max over levels
/// that still have at least 32 blocks).
[[nodiscard]] MeanError blocking_mean(std::span<const double> series);

/// Column of a record stream by CSV name (e.g. "q_x", "n_up").
[[nodiscard]] std::vector<double> column(const std::vector<ObservableRecord>& records,
                                         const std::string& name);

/// Throws std::domain_error unless q_x + q_z = 1 (to 1e-12) in every record.
void check_records(const std::vector<ObservableRecord>& records);

struct NeelReport {
  MeanError e_pure_x, e_pure_z, e_mixed;
  MeanError en_pure_x, en_pure_z, en_mixed;
  MeanError staggered;
  double e_separation = 0.0;   // max - min of the E_r class means
  double en_separation = 0.0;  // max - min of the normalized class means
  // Largest |class mean - target| for the best assignment of {0, -2, -4}
  // to the three classes.
  double e_target_deviation = 0.0;
  double en_max = 0.0;  // largest normalized class mean
  // Largest pairwise difference of normalized class means in units of the
  // combined error bar.
  double en_separation_sigma = 0.0;
};

[[nodiscard]] NeelReport neel_report(const std::vector<ObservableRecord>& records);

/// C(n, k) / 2^n.
[[nodiscard]] double binomial_half_pmf(int n, int k);

struct BinomialTest {
  double p_value = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  int samples = 0;  // after thinning
  int stride = 1;   // thinning stride
  double tau_int = 0.0;
  bool tau_lower_bound = false;
  bool stride_capped = false;  // stride limited so that >= 20 samples remain
  bool inconclusive = false;  // too few decorrelated samples or bins
  std::vector<int> histogram;  // counts of n_up = 0..plaquette_count after thinning
};

/// Chi-square goodness of fit of n_up against Binomial(plaquette_count, 1/2)
/// after thinning at stride ceil(2 tau_int); bins merged until every
/// expected count is >= 5. For a frozen series the stride is capped at
/// length / 20 (flagged), so a stuck chain yields a tiny p-value rather than
/// an empty test.
[[nodiscard]] BinomialTest binomial_symmetry_test(const std::vector<ObservableRecord>& records,
                                                  int plaquette_count);

/**
 * Truncated two-point function of [S^x]^2 at even distances d = 2, 4, ...,
 * N/2 along both lattice axes, accumulated over configurations.
 */
class CorrelationAccumulator {
public:
  explicit CorrelationAccumulator(const TorusLattice& lattice);
  void add(const SpinConfig& config);
  [[nodiscard]] std::vector<int> distances() const;
  /// <q_r q_{r+d}> - <q>^2 per distance.
  [[nodiscard]] std::vector<double> truncated() const;
  [[nodiscard]] long long samples() const noexcept { return samples_; }

private:
  const TorusLattice* lattice_;
  std::vector<int> distances_;
  std::vector<double> pair_sums_;  // per distance, sum over samples of mean q_r q_{r+d}
  double q_sum_ = 0.0;
  long long samples_ = 0;
};

struct CorrelationFit {
  double xi = 0.0;           // decay length, C(d) ~ A exp(-d / xi)
  double amplitude = 0.0;
  double fit_quality = 0.0;  // R^2 of the log-linear fit
  bool fitted = false;
  std::string flag;  // reason when not fitted
};

/// Log-linear least squares on the strictly positive prefix of C(d) that
/// exceeds `noise_floor`; needs at least two points.
[[nodiscard]] CorrelationFit correlation_decay(const std::vector<int>& distances,
                                               const std::vector<double>& correlations,
                                               double noise_floor = 0.0);

struct ObservableMixing {
  std::string observable;
  AutocorrelationTime tau;
  double effective_samples = 0.0;
};

struct MixingReport {
  std::vector<ObservableMixing> enhanced;
  std::vector<ObservableMixing> metropolis;
  // tau(enhanced) / tau(metropolis) per observable, same order.
  std::vector<double> ratio;
};

[[nodiscard]] ObservableMixing mixing(const std::vector<ObservableRecord>& records,
                                      const std::string& observable);
[[nodiscard]] MixingReport mixing_report(const std::vector<ObservableRecord>& enhanced,
                                         const std::vector<ObservableRecord>& metropolis,
                                         const std::vector<std::string>& observables);

}  // namespace pom
