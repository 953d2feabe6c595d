#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pom/lattice.hpp"
#include "pom/spin_config.hpp"
#include "pom/spin_model.hpp"

namespace pom {

/// One measurement along a chain.
struct ObservableRecord {
  long long sweep = 0;
  double q_x = 0.0;
  double q_z = 0.0;
  double m_x = 0.0;
  double m_z = 0.0;
  // Class means of the plaquette energy E_r.
  double e_pure_x = 0.0;
  double e_pure_z = 0.0;
  double e_mixed = 0.0;
  // Half the mean over pure plaquettes of +E_r (pure-x) and -E_r (pure-z).
  double staggered = 0.0;
  // Pure-z plaquettes whose summed S^z is >= 0.
  int n_up = 0;
  // Class means of the normalized energy (squared component differences).
  double en_pure_x = 0.0;
  double en_pure_z = 0.0;
  double en_mixed = 0.0;
  double energy = 0.0;  // H / N^2
  // '+' or '-' per pure-z plaquette, in pure_corners() order.
  std::string z_orientation;

  friend bool operator==(const ObservableRecord&, const ObservableRecord&) = default;
};

[[nodiscard]] ObservableRecord measure(const TorusLattice& lattice, const SpinConfig& config,
                                       const Couplings& couplings, long long sweep);

/// Class means of a plaquette energy field: {pure-x, pure-z, mixed}.
struct ClassMeans {
  double pure_x = 0.0;
  double pure_z = 0.0;
  double mixed = 0.0;
};
[[nodiscard]] ClassMeans class_means(const PlaquetteEnergyField& field);

}  // namespace pom
