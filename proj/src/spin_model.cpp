#include "pom/spin_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "pom/summation.hpp"

namespace pom {

namespace {

void require_matching(const TorusLattice& lattice, int config_size) {
  if (config_size != lattice.site_count()) {
    throw std::invalid_argument("configuration has " + std::to_string(config_size) +
                                " sites, lattice has " + std::to_string(lattice.site_count()));
  }
}

double bond(EdgeType type, Vec2 a, Vec2 b) noexcept {
  return type == EdgeType::X ? a.x * b.x : a.z * b.z;
}

double bond_gap(EdgeType type, Vec2 a, Vec2 b) noexcept {
  const double d = type == EdgeType::X ? a.x - b.x : a.z - b.z;
  return d * d;
}

}  // namespace

void Couplings::validate() const {
  if (!(j1 > 0.0) || !(j2 > 0.0)) throw std::invalid_argument("couplings J1, J2 must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("inverse temperature beta must be finite and >= 0");
  }
}

double hamiltonian_components(const TorusLattice& lattice, std::span<const double> sx,
                              std::span<const double> sz, const Couplings& couplings) {
  require_matching(lattice, static_cast<int>(sx.size()));
  require_matching(lattice, static_cast<int>(sz.size()));
  CompensatedSum x_bonds;
  CompensatedSum z_bonds;
  const int count = lattice.site_count();
  for (int i = 0; i < count; ++i) {
    const int r = lattice.right(i);
    const int u = lattice.up(i);
    if (lattice.right_type(i) == EdgeType::X) {
      x_bonds += sx[i] * sx[r];
    } else {
      z_bonds += sz[i] * sz[r];
    }
    if (lattice.up_type(i) == EdgeType::X) {
      x_bonds += sx[i] * sx[u];
    } else {
      z_bonds += sz[i] * sz[u];
    }
  }
  return -couplings.j1 * x_bonds.value() - couplings.j2 * z_bonds.value();
}

double hamiltonian(const TorusLattice& lattice, const SpinConfig& config,
                   const Couplings& couplings) {
  return hamiltonian_components(lattice, config.sx_values(), config.sz_values(), couplings);
}

double hamiltonian_rewrite(const TorusLattice& lattice, const SpinConfig& config,
                           const Couplings& couplings) {
  require_matching(lattice, config.size());
  // Gradient and on-site sums are O(N^2) each while H can be O(N) or smaller,
  // so the terms are accumulated in long double.
  long double x_gradient = 0.0L;
  long double z_gradient = 0.0L;
  long double onsite = 0.0L;
  const auto gap = [](EdgeType type, Vec2 a, Vec2 b) {
    const long double d = type == EdgeType::X ? static_cast<long double>(a.x) - b.x
                                              : static_cast<long double>(a.z) - b.z;
    return d * d;
  };
  for (int i = 0; i < config.size(); ++i) {
    const Vec2 s = config.spin(i);
    for (auto [j, type] : {std::pair{lattice.right(i), lattice.right_type(i)},
                           std::pair{lattice.up(i), lattice.up_type(i)}}) {
      (type == EdgeType::X ? x_gradient : z_gradient) += gap(type, s, config.spin(j));
    }
    onsite += static_cast<long double>(couplings.j1) * s.x * s.x;
    onsite += static_cast<long double>(couplings.j2) * s.z * s.z;
  }
  return static_cast<double>(0.5L * couplings.j1 * x_gradient + 0.5L * couplings.j2 * z_gradient -
                             onsite);
}

double delta_energy(const TorusLattice& lattice, const SpinConfig& config,
                    const Couplings& couplings, int site, Vec2 new_spin) {
  const Vec2 old_spin = config.spin(site);
  const double dx = new_spin.x - old_spin.x;
  const double dz = new_spin.z - old_spin.z;
  // Every site has two x-edges and two z-edges; sum the partner components.
  double x_partners = 0.0;
  double z_partners = 0.0;
  const int r = lattice.right(site);
  const int l = lattice.left(site);
  const int u = lattice.up(site);
  const int d = lattice.down(site);
  const auto add_partner = [&](EdgeType type, int partner) {
    if (type == EdgeType::X) {
      x_partners += config.sx(partner);
    } else {
      z_partners += config.sz(partner);
    }
  };
  add_partner(lattice.right_type(site), r);
  add_partner(lattice.right_type(l), l);
  add_partner(lattice.up_type(site), u);
  add_partner(lattice.up_type(d), d);
  return -couplings.j1 * dx * x_partners - couplings.j2 * dz * z_partners;
}

double delta_energy(const TorusLattice& lattice, const SpinConfig& config,
                    const Couplings& couplings, int site, double new_angle) {
  return delta_energy(lattice, config, couplings, site,
                      phase::unit_vector(phase::from_angle(new_angle)));
}

double plaquette_energy(const TorusLattice& lattice, const SpinConfig& config, Site corner,
                        bool normalized) {
  require_matching(lattice, config.size());
  const auto [r, r1, r2, r12] = lattice.plaquette_sites(corner);
  const Site c1 = lattice.site(r1);
  const Site c2 = lattice.site(r2);
  const EdgeType bottom = lattice.edge_type(corner, Axis::Horizontal);
  const EdgeType left = lattice.edge_type(corner, Axis::Vertical);
  const EdgeType right = lattice.edge_type(c1, Axis::Vertical);
  const EdgeType top = lattice.edge_type(c2, Axis::Horizontal);
  const Vec2 s = config.spin(r);
  const Vec2 s1 = config.spin(r1);
  const Vec2 s2 = config.spin(r2);
  const Vec2 s12 = config.spin(r12);
  if (normalized) {
    return bond_gap(bottom, s, s1) + bond_gap(left, s, s2) + bond_gap(right, s1, s12) +
           bond_gap(top, s2, s12);
  }
  return -(bond(bottom, s, s1) + bond(left, s, s2) + bond(right, s1, s12) + bond(top, s2, s12));
}

PlaquetteEnergyField plaquette_energies(const TorusLattice& lattice, const SpinConfig& config,
                                        bool normalized) {
  PlaquetteEnergyField field;
  field.normalized = normalized;
  field.values.resize(lattice.plaquette_count());
  field.kinds.resize(lattice.plaquette_count());
  for (int i = 0; i < lattice.plaquette_count(); ++i) {
    const Site corner = lattice.site(i);
    field.values[i] = plaquette_energy(lattice, config, corner, normalized);
    field.kinds[i] = lattice.plaquette_kind(corner);
  }
  return field;
}

Vec2 magnetization(const SpinConfig& config) {
  if (config.size() == 0) return {};
  CompensatedSum mx;
  CompensatedSum mz;
  for (int i = 0; i < config.size(); ++i) {
    mx += config.sx(i);
    mz += config.sz(i);
  }
  const double n = config.size();
  return {mx.value() / n, mz.value() / n};
}

OrientationOrder orientation_order(const SpinConfig& config) {
  if (config.size() == 0) return {};
  CompensatedSum qx;
  CompensatedSum qz;
  for (int i = 0; i < config.size(); ++i) {
    qx += config.sx(i) * config.sx(i);
    qz += config.sz(i) * config.sz(i);
  }
  const double n = config.size();
  return {qx.value() / n, qz.value() / n};
}

}  // namespace pom
