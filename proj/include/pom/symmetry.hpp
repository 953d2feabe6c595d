#pragma once

#include <iosfwd>
#include <vector>

#include "pom/lattice.hpp"
#include "pom/spin_config.hpp"
#include "pom/spin_model.hpp"

namespace pom {

/// Component reflection on the four sites of a pure plaquette. A corner with
/// both coordinates even negates S^x, both odd negates S^z.
class PlaquetteFlip {
public:
  /// Throws std::domain_error if the corner is not a pure-plaquette corner.
  PlaquetteFlip(const TorusLattice& lattice, Site corner);

  [[nodiscard]] Site corner() const noexcept { return corner_; }
  [[nodiscard]] EdgeType component() const noexcept { return component_; }

  void apply(const TorusLattice& lattice, SpinConfig& config) const;

  friend bool operator==(const PlaquetteFlip&, const PlaquetteFlip&) = default;

private:
  Site corner_;
  EdgeType component_;
};

/// A set of commuting plaquette flips; order of application is immaterial.
using FlipSet = std::vector<PlaquetteFlip>;

[[nodiscard]] SpinConfig apply_flip(const TorusLattice& lattice, SpinConfig config,
                                    const PlaquetteFlip& flip);
[[nodiscard]] SpinConfig apply_flips(const TorusLattice& lattice, SpinConfig config,
                                     const FlipSet& flips);

/**
 * Constant configuration at `base_angle` with `flips` applied.
 *
 * For J1 > J2 the base must be +-e1, for J2 > J1 it must be +-e2 (within
 * 1e-12 rad); otherwise the result would not be a ground state and
 * std::domain_error is thrown.
 */
[[nodiscard]] SpinConfig ground_state(const TorusLattice& lattice, const Couplings& couplings,
                                      double base_angle, const FlipSet& flips = {});
/// Same, with the base given as a unit vector (|v| = 1 within 1e-12).
[[nodiscard]] SpinConfig ground_state(const TorusLattice& lattice, const Couplings& couplings,
                                      Vec2 base_direction, const FlipSet& flips = {});

struct GroundStateCheck {
  double energy_excess = 0.0;  // H + max(J1,J2) N^2, >= 0 up to rounding
  double worst_bond_gap = 0.0;  // max over alpha-edges of (J_alpha/2)(S^a_r - S^a_r')^2
  double worst_site_deficit = 0.0;  // max over sites of max(J) - (J1 Sx^2 + J2 Sz^2)
  bool by_energy = false;
  bool by_structure = false;
};

/// Evaluates both the energy criterion and the edge/site structural
/// conditions with the same tolerance.
[[nodiscard]] GroundStateCheck check_ground_state(const TorusLattice& lattice,
                                                  const SpinConfig& config,
                                                  const Couplings& couplings, double tol);

/// True iff both criteria of check_ground_state() hold.
[[nodiscard]] bool is_ground_state(const TorusLattice& lattice, const SpinConfig& config,
                                   const Couplings& couplings, double tol);

/// CSV with header "x,y" and one flip corner per row.
void write_flip_set(std::ostream& out, const FlipSet& flips);
[[nodiscard]] FlipSet read_flip_set(std::istream& in, const TorusLattice& lattice);

}  // namespace pom
