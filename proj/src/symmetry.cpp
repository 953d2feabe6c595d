#include "pom/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pom {

PlaquetteFlip::PlaquetteFlip(const TorusLattice& lattice, Site corner) : corner_(corner) {
  switch (lattice.plaquette_kind(corner)) {
    case PlaquetteKind::PureX: component_ = EdgeType::X; break;
    case PlaquetteKind::PureZ: component_ = EdgeType::Z; break;
    case PlaquetteKind::Mixed:
      throw std::domain_error("plaquette flip corner (" + std::to_string(corner.x) + "," +
                              std::to_string(corner.y) + ") is not a pure plaquette");
  }
}

void PlaquetteFlip::apply(const TorusLattice& lattice, SpinConfig& config) const {
  for (int i : lattice.plaquette_sites(corner_)) {
    if (component_ == EdgeType::X) {
      config.reflect_x(i);
    } else {
      config.reflect_z(i);
    }
  }
}

SpinConfig apply_flip(const TorusLattice& lattice, SpinConfig config, const PlaquetteFlip& flip) {
  flip.apply(lattice, config);
  return config;
}

SpinConfig apply_flips(const TorusLattice& lattice, SpinConfig config, const FlipSet& flips) {
  for (const auto& flip : flips) flip.apply(lattice, config);
  return config;
}

SpinConfig ground_state(const TorusLattice& lattice, const Couplings& couplings,
                        double base_angle, const FlipSet& flips) {
  couplings.validate();
  constexpr double kAxisTol = 1e-12;
  if (couplings.j1 > couplings.j2 && std::abs(std::sin(base_angle)) > kAxisTol) {
    throw std::domain_error("J1 > J2: ground states arise only from S = +-e1");
  }
  if (couplings.j2 > couplings.j1 && std::abs(std::cos(base_angle)) > kAxisTol) {
    throw std::domain_error("J2 > J1: ground states arise only from S = +-e2");
  }
  return apply_flips(lattice, SpinConfig(lattice.site_count(), base_angle), flips);
}

SpinConfig ground_state(const TorusLattice& lattice, const Couplings& couplings,
                        Vec2 base_direction, const FlipSet& flips) {
  const double norm = std::hypot(base_direction.x, base_direction.z);
  if (std::abs(norm - 1.0) > 1e-12) throw std::domain_error("base direction must be a unit vector");
  return ground_state(lattice, couplings, std::atan2(base_direction.z, base_direction.x), flips);
}

GroundStateCheck check_ground_state(const TorusLattice& lattice, const SpinConfig& config,
                                    const Couplings& couplings, double tol) {
  GroundStateCheck check;
  const double j_max = couplings.j_max();
  check.energy_excess =
      hamiltonian(lattice, config, couplings) + j_max * static_cast<double>(lattice.site_count());

  for (int i = 0; i < lattice.site_count(); ++i) {
    const Vec2 s = config.spin(i);
    for (auto [j, type] : {std::pair{lattice.right(i), lattice.right_type(i)},
                           std::pair{lattice.up(i), lattice.up_type(i)}}) {
      const Vec2 t = config.spin(j);
      const double d = type == EdgeType::X ? s.x - t.x : s.z - t.z;
      check.worst_bond_gap = std::max(check.worst_bond_gap, 0.5 * couplings.coupling(type) * d * d);
    }
    const double deficit = j_max - (couplings.j1 * s.x * s.x + couplings.j2 * s.z * s.z);
    check.worst_site_deficit = std::max(check.worst_site_deficit, deficit);
  }
  check.by_energy = check.energy_excess <= tol;
  check.by_structure = check.worst_bond_gap <= tol && check.worst_site_deficit <= tol;
  return check;
}

bool is_ground_state(const TorusLattice& lattice, const SpinConfig& config,
                     const Couplings& couplings, double tol) {
  const GroundStateCheck check = check_ground_state(lattice, config, couplings, tol);
  return check.by_energy && check.by_structure;
}

void write_flip_set(std::ostream& out, const FlipSet& flips) {
  out << "x,y\n";
  for (const auto& flip : flips) out << flip.corner().x << ',' << flip.corner().y << '\n';
}

FlipSet read_flip_set(std::istream& in, const TorusLattice& lattice) {
  FlipSet flips;
  std::string line;
  if (!std::getline(in, line) || line != "x,y") {
    throw std::runtime_error("flip set CSV must start with header 'x,y'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int x = 0;
    int y = 0;
    char comma = 0;
    if (!(row >> x >> comma >> y) || comma != ',') {
      throw std::runtime_error("malformed flip set row: " + line);
    }
    flips.emplace_back(lattice, Site{x, y});
  }
  return flips;
}

}  // namespace pom
