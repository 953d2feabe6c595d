#include "pom/observables.hpp"

#include "pom/summation.hpp"

namespace pom {

ClassMeans class_means(const PlaquetteEnergyField& field) {
  CompensatedSum sums[3];
  int counts[3] = {0, 0, 0};
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const int k = static_cast<int>(field.kinds[i]);
    sums[k] += field.values[i];
    ++counts[k];
  }
  auto mean = [&](PlaquetteKind kind) {
    const int k = static_cast<int>(kind);
    return counts[k] == 0 ? 0.0 : sums[k].value() / counts[k];
  };
  return {mean(PlaquetteKind::PureX), mean(PlaquetteKind::PureZ), mean(PlaquetteKind::Mixed)};
}

ObservableRecord measure(const TorusLattice& lattice, const SpinConfig& config,
                         const Couplings& couplings, long long sweep) {
  ObservableRecord rec;
  rec.sweep = sweep;
  const OrientationOrder q = orientation_order(config);
  rec.q_x = q.q_x;
  rec.q_z = q.q_z;
  const Vec2 m = magnetization(config);
  rec.m_x = m.x;
  rec.m_z = m.z;

  const PlaquetteEnergyField raw = plaquette_energies(lattice, config, false);
  const ClassMeans e = class_means(raw);
  rec.e_pure_x = e.pure_x;
  rec.e_pure_z = e.pure_z;
  rec.e_mixed = e.mixed;
  // Equal numbers of pure-x and pure-z plaquettes, so the mean of the signed
  // values is the average of the two class means.
  rec.staggered = 0.5 * (0.5 * (e.pure_x - e.pure_z));

  const ClassMeans en = class_means(plaquette_energies(lattice, config, true));
  rec.en_pure_x = en.pure_x;
  rec.en_pure_z = en.pure_z;
  rec.en_mixed = en.mixed;

  for (const Site& corner : lattice.pure_corners()) {
    if (lattice.plaquette_kind(corner) != PlaquetteKind::PureZ) continue;
    double sum = 0.0;
    for (int s : lattice.plaquette_sites(corner)) sum += config.sz(s);
    const bool up = sum >= 0.0;
    rec.n_up += up ? 1 : 0;
    rec.z_orientation.push_back(up ? '+' : '-');
  }
  rec.energy = hamiltonian(lattice, config, couplings) / lattice.site_count();
  return rec;
}

}  // namespace pom
