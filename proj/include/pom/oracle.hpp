#pragma once

#include <cstdint>

#include "pom/spin_model.hpp"

namespace pom {

/// Configurations within chord distance Delta of the tilted constant state e(theta).
struct ConstrainedEnsemble {
  double theta = 0.0;
  double delta = 0.5;   // Delta, chord radius, in (0, 2]
  int n = 2;            // lattice size, 2 or 4
  double beta_j = 1.0;  // beta J with J1 = J2 = J

  /// Delta' = 2 asin(Delta / 2), the angular half-width of the allowed arc.
  [[nodiscard]] double delta_prime() const;
  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

struct LogZEstimate {
  double estimate = 0.0;   // (1/N^2) log Z
  double std_error = 0.0;  // jackknife over batches; +inf if too few samples
  long long samples = 0;
  double effective_samples = 0.0;  // Kish effective sample size of the weights
  bool reliable = false;           // enough samples and effective samples
};

/// Number of fixed sample batches; batch b uses RNG substream b.
inline constexpr int kOracleBatches = 64;

/**
 * Importance-sampled (1/N^2) log Z_N(theta, Delta) with the a-priori measure
 * of total mass sqrt(2 pi) per site and the exp(-beta J N^2) prefactor.
 * Angles are drawn uniformly on the allowed arc. Bit-identical for a given
 * seed regardless of `threads` (<= 0 means all hardware threads).
 */
[[nodiscard]] LogZEstimate constrained_log_z(const ConstrainedEnsemble& ensemble,
                                             long long samples, std::uint64_t seed,
                                             int threads = 1);

/// Plain Monte Carlo (1/N^2) log Z_{N,beta} with uniform angles; N = 2 only.
[[nodiscard]] LogZEstimate full_log_z(int n, const Couplings& couplings, long long samples,
                                      std::uint64_t seed, int threads = 1);

/// Smallest delta for which beta J Delta^2 > 1/delta and beta J Delta^3 < delta.
[[nodiscard]] double admissible_delta_floor(double beta_j, double delta);

}  // namespace pom
