#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pom/lattice.hpp"
#include "pom/observables.hpp"
#include "pom/rng.hpp"
#include "pom/spin_config.hpp"
#include "pom/spin_model.hpp"

namespace pom {

enum class SamplerKind { Metropolis, Enhanced };

[[nodiscard]] std::string to_string(SamplerKind kind);
/// Accepts "metropolis" or "enhanced"; throws std::invalid_argument otherwise.
[[nodiscard]] SamplerKind parse_sampler_kind(const std::string& text);

struct SamplerSpec {
  SamplerKind kind = SamplerKind::Enhanced;
  double proposal_width = 0.5;  // initial max angular step w (radians)
  bool tune_width = true;       // adapt w toward 50% acceptance during thermalization only
  double flip_fraction = 0.5;   // Enhanced: ceil(f N^2 / 4) plaquette flips per sweep
  long long sweeps = 1000;      // measured phase
  long long thermalization = 100;
  long long measure_every = 1;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;  // substream for independent chains sharing a seed

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

struct MoveStats {
  long long metropolis_proposed = 0;
  long long metropolis_accepted = 0;
  long long flips = 0;  // plaquette flips are always accepted

  [[nodiscard]] double acceptance() const {
    return metropolis_proposed == 0 ? 0.0
                                    : static_cast<double>(metropolis_accepted) / metropolis_proposed;
  }
};

struct ChainState {
  SpinConfig config;
  Rng rng;
  long long sweep_index = 0;
  double proposal_width = 0.5;
  MoveStats stats;
};

[[nodiscard]] ChainState make_chain(const SamplerSpec& spec, SpinConfig initial);

/// N^2 single-site Metropolis moves in raster order with steps uniform in (-w, w).
void metropolis_sweep(ChainState& state, const TorusLattice& lattice, const Couplings& couplings);

/// Applies one uniformly chosen pure-plaquette flip. Throws std::logic_error
/// if the local energy around the plaquette is not exactly preserved.
void plaquette_flip_move(ChainState& state, const TorusLattice& lattice);

/// One sweep of the kind in `spec` (Metropolis, or Metropolis plus flips).
void sweep(ChainState& state, const TorusLattice& lattice, const Couplings& couplings,
           const SamplerSpec& spec);

using RecordSink = std::function<void(const ObservableRecord&, const SpinConfig&)>;

struct ChainSummary {
  MoveStats thermalization_stats;
  MoveStats measurement_stats;
  double proposal_width = 0.0;  // frozen width used in the measured phase
  SpinConfig final_config;
  long long records = 0;
};

/// Thermalizes, then emits a record every measure_every sweeps.
ChainSummary run_chain(const TorusLattice& lattice, const Couplings& couplings,
                       const SamplerSpec& spec, const SpinConfig& initial, const RecordSink& sink);

/// Convenience overload collecting all records.
[[nodiscard]] std::vector<ObservableRecord> run_chain(const TorusLattice& lattice,
                                                      const Couplings& couplings,
                                                      const SamplerSpec& spec,
                                                      const SpinConfig& initial);

/// Independent uniform angles at every site.
[[nodiscard]] SpinConfig random_config(int site_count, Rng& rng);

}  // namespace pom
