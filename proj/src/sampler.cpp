#include "pom/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pom/symmetry.hpp"

namespace pom {

namespace {

constexpr double kMinWidth = 1e-4;
constexpr double kMaxWidth = 3.141592653589793;

// Sum of the bond energies touching the four plaquette sites (each bond once).
double local_energy(const TorusLattice& lattice, const SpinConfig& config,
                    const std::array<int, 4>& sites) {
  double e = 0.0;
  auto term = [&](int a, int b, EdgeType type) {
    e -= type == EdgeType::X ? config.sx(a) * config.sx(b) : config.sz(a) * config.sz(b);
  };
  for (int s : sites) {
    term(s, lattice.right(s), lattice.right_type(s));
    term(s, lattice.up(s), lattice.up_type(s));
    const int l = lattice.left(s);
    const int d = lattice.down(s);
    if (std::find(sites.begin(), sites.end(), l) == sites.end()) term(l, s, lattice.right_type(l));
    if (std::find(sites.begin(), sites.end(), d) == sites.end()) term(d, s, lattice.up_type(d));
  }
  return e;
}

long long flips_per_sweep(const TorusLattice& lattice, double fraction) {
  return static_cast<long long>(std::ceil(fraction * lattice.site_count() / 4.0));
}

}  // namespace

std::string to_string(SamplerKind kind) {
  return kind == SamplerKind::Metropolis ? "metropolis" : "enhanced";
}

SamplerKind parse_sampler_kind(const std::string& text) {
  if (text == "metropolis") return SamplerKind::Metropolis;
  if (text == "enhanced") return SamplerKind::Enhanced;
  throw std::invalid_argument("sampler kind must be 'metropolis' or 'enhanced', got '" + text + "'");
}

void SamplerSpec::validate() const {
  if (!(proposal_width > 0.0) || proposal_width > kMaxWidth) {
    throw std::invalid_argument("proposal width must lie in (0, pi]");
  }
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) {
    throw std::invalid_argument("flip fraction must lie in [0, 1]");
  }
  if (sweeps < 0 || thermalization < 0) throw std::invalid_argument("sweep counts must be >= 0");
  if (measure_every < 1) throw std::invalid_argument("measure_every must be >= 1");
}

ChainState make_chain(const SamplerSpec& spec, SpinConfig initial) {
  spec.validate();
  return ChainState{std::move(initial), Rng(spec.seed, spec.stream), 0, spec.proposal_width, {}};
}

void metropolis_sweep(ChainState& state, const TorusLattice& lattice, const Couplings& couplings) {
  SpinConfig& config = state.config;
  const double w = state.proposal_width;
  for (int i = 0; i < lattice.site_count(); ++i) {
    const phase::Phase step = phase::from_rotation(state.rng.uniform(-w, w));
    const phase::Phase proposal = phase::add(config.phase(i), step);
    const double de =
        delta_energy(lattice, config, couplings, i, phase::unit_vector(proposal));
    ++state.stats.metropolis_proposed;
    const double u = state.rng.uniform();
    if (de <= 0.0 || u < std::exp(-couplings.beta * de)) {
      config.set_phase(i, proposal);
      ++state.stats.metropolis_accepted;
    }
  }
}

void plaquette_flip_move(ChainState& state, const TorusLattice& lattice) {
  const auto& corners = lattice.pure_corners();
  const Site corner = corners[state.rng.below(corners.size())];
  const PlaquetteFlip flip(lattice, corner);
  const auto sites = lattice.plaquette_sites(corner);
  const double before = local_energy(lattice, state.config, sites);
  flip.apply(lattice, state.config);
  const double after = local_energy(lattice, state.config, sites);
  if (before != after) throw std::logic_error("plaquette flip changed the energy");
  ++state.stats.flips;
}

void sweep(ChainState& state, const TorusLattice& lattice, const Couplings& couplings,
           const SamplerSpec& spec) {
  metropolis_sweep(state, lattice, couplings);
  if (spec.kind == SamplerKind::Enhanced) {
    const long long flips = flips_per_sweep(lattice, spec.flip_fraction);
    for (long long f = 0; f < flips; ++f) plaquette_flip_move(state, lattice);
  }
  ++state.sweep_index;
}

ChainSummary run_chain(const TorusLattice& lattice, const Couplings& couplings,
                       const SamplerSpec& spec, const SpinConfig& initial, const RecordSink& sink) {
  couplings.validate();
  if (initial.size() != lattice.site_count()) {
    throw std::invalid_argument("initial configuration does not match lattice size");
  }
  ChainState state = make_chain(spec, initial);
  ChainSummary summary;

  for (long long t = 0; t < spec.thermalization; ++t) {
    const MoveStats before = state.stats;
    sweep(state, lattice, couplings, spec);
    if (spec.tune_width) {
      const double rate =
          static_cast<double>(state.stats.metropolis_accepted - before.metropolis_accepted) /
          static_cast<double>(state.stats.metropolis_proposed - before.metropolis_proposed);
      state.proposal_width =
          std::clamp(state.proposal_width * std::exp(rate - 0.5), kMinWidth, kMaxWidth);
    }
  }
  summary.thermalization_stats = state.stats;
  summary.proposal_width = state.proposal_width;
  state.stats = {};
  state.sweep_index = 0;

  for (long long t = 1; t <= spec.sweeps; ++t) {
    sweep(state, lattice, couplings, spec);
    if (t % spec.measure_every == 0) {
      sink(measure(lattice, state.config, couplings, t), state.config);
      ++summary.records;
    }
  }
  summary.measurement_stats = state.stats;
  summary.final_config = std::move(state.config);
  return summary;
}

std::vector<ObservableRecord> run_chain(const TorusLattice& lattice, const Couplings& couplings,
                                        const SamplerSpec& spec, const SpinConfig& initial) {
  std::vector<ObservableRecord> out;
  run_chain(lattice, couplings, spec, initial,
            [&](const ObservableRecord& r, const SpinConfig&) { out.push_back(r); });
  return out;
}

SpinConfig random_config(int site_count, Rng& rng) {
  SpinConfig config(site_count);
  for (int i = 0; i < site_count; ++i) {
    config.set_phase(i, rng.next() & phase::kMask);
  }
  return config;
}

}  // namespace pom
