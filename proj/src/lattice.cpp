#include "pom/lattice.hpp"

#include <stdexcept>
#include <string>

namespace pom {

TorusLattice::TorusLattice(int n) : n_(n) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("lattice size must be even and >= 2, got " + std::to_string(n));
  }
  const int count = n * n;
  right_.resize(count);
  left_.resize(count);
  up_.resize(count);
  down_.resize(count);
  for (int i = 0; i < count; ++i) {
    const int x = i % n;
    const int y = i / n;
    right_[i] = y * n + (x + 1) % n;
    left_[i] = y * n + (x + n - 1) % n;
    up_[i] = ((y + 1) % n) * n + x;
    down_[i] = ((y + n - 1) % n) * n + x;
  }
  pure_corners_.reserve(count / 2);
  for (int parity : {0, 1}) {
    for (int y = parity; y < n; y += 2) {
      for (int x = parity; x < n; x += 2) {
        pure_corners_.push_back({x, y});
      }
    }
  }
}

bool TorusLattice::contains(Site s) const noexcept {
  return s.x >= 0 && s.x < n_ && s.y >= 0 && s.y < n_;
}

void TorusLattice::require_site(Site s) const {
  if (!contains(s)) {
    throw std::out_of_range("site (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                            ") outside torus of size " + std::to_string(n_));
  }
}

int TorusLattice::index(Site s) const {
  require_site(s);
  return s.y * n_ + s.x;
}

Site TorusLattice::site(int index) const {
  if (index < 0 || index >= site_count()) {
    throw std::out_of_range("site index " + std::to_string(index) + " out of range");
  }
  return {index % n_, index / n_};
}

Site TorusLattice::wrap(int x, int y) const noexcept {
  return {((x % n_) + n_) % n_, ((y % n_) + n_) % n_};
}

EdgeType TorusLattice::edge_type(Site s, Axis direction) const {
  require_site(s);
  const int coord = direction == Axis::Horizontal ? s.x : s.y;
  return coord % 2 == 0 ? EdgeType::X : EdgeType::Z;
}

PlaquetteKind TorusLattice::plaquette_kind(Site corner) const {
  require_site(corner);
  const bool x_even = corner.x % 2 == 0;
  const bool y_even = corner.y % 2 == 0;
  if (x_even && y_even) return PlaquetteKind::PureX;
  if (!x_even && !y_even) return PlaquetteKind::PureZ;
  return PlaquetteKind::Mixed;
}

std::array<Neighbor, 4> TorusLattice::neighbors(Site s) const {
  require_site(s);
  const Site r = wrap(s.x + 1, s.y);
  const Site l = wrap(s.x - 1, s.y);
  const Site u = wrap(s.x, s.y + 1);
  const Site d = wrap(s.x, s.y - 1);
  return {{{r, edge_type(s, Axis::Horizontal)},
           {l, edge_type(l, Axis::Horizontal)},
           {u, edge_type(s, Axis::Vertical)},
           {d, edge_type(d, Axis::Vertical)}}};
}

std::array<int, 4> TorusLattice::plaquette_sites(Site corner) const {
  const int r = index(corner);
  return {r, right_[r], up_[r], up_[right_[r]]};
}

}  // namespace pom
