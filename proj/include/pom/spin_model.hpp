#pragma once

#include <span>
#include <vector>

#include "pom/lattice.hpp"
#include "pom/spin_config.hpp"

namespace pom {

/// J1 couples S^x over x-edges, J2 couples S^z over z-edges.
struct Couplings {
  double j1 = 1.0;
  double j2 = 1.0;
  double beta = 1.0;

  /// Throws std::invalid_argument unless j1, j2 > 0 and beta >= 0.
  void validate() const;
  [[nodiscard]] double j_max() const noexcept { return j1 > j2 ? j1 : j2; }
  [[nodiscard]] double coupling(EdgeType t) const noexcept { return t == EdgeType::X ? j1 : j2; }
};

/// -J1 sum_x S^x S^x' - J2 sum_z S^z S^z', each edge counted once.
[[nodiscard]] double hamiltonian(const TorusLattice& lattice, const SpinConfig& config,
                                 const Couplings& couplings);

/// Same energy as a sum of squared component gradients minus an on-site term.
/// Agrees with hamiltonian() up to rounding on every configuration.
[[nodiscard]] double hamiltonian_rewrite(const TorusLattice& lattice, const SpinConfig& config,
                                         const Couplings& couplings);

/// Hamiltonian evaluated directly on component arrays (no phase bookkeeping).
[[nodiscard]] double hamiltonian_components(const TorusLattice& lattice, std::span<const double> sx,
                                            std::span<const double> sz, const Couplings& couplings);

/// H(after) - H(before) for moving one spin to `new_spin`; O(1).
[[nodiscard]] double delta_energy(const TorusLattice& lattice, const SpinConfig& config,
                                  const Couplings& couplings, int site, Vec2 new_spin);
[[nodiscard]] double delta_energy(const TorusLattice& lattice, const SpinConfig& config,
                                  const Couplings& couplings, int site, double new_angle);

/// Unnormalized plaquette energy E_r (minus the four bond products) or, with
/// normalized = true, the sum of the four squared component differences,
/// which vanishes on every ground state.
[[nodiscard]] double plaquette_energy(const TorusLattice& lattice, const SpinConfig& config,
                                      Site corner, bool normalized);

struct PlaquetteEnergyField {
  std::vector<double> values;        // indexed by corner site index
  std::vector<PlaquetteKind> kinds;  // same indexing
  bool normalized = false;
};

[[nodiscard]] PlaquetteEnergyField plaquette_energies(const TorusLattice& lattice,
                                                      const SpinConfig& config, bool normalized);

[[nodiscard]] Vec2 magnetization(const SpinConfig& config);

struct OrientationOrder {
  double q_x = 0.0;
  double q_z = 0.0;
};

/// q_alpha = mean of [S^alpha]^2 over sites.
[[nodiscard]] OrientationOrder orientation_order(const SpinConfig& config);

}  // namespace pom
