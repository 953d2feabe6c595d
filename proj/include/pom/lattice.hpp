#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace pom {

/// Integer lattice coordinate. Components are taken mod N by the lattice.
struct Site {
  int x = 0;
  int y = 0;

  friend bool operator==(const Site&, const Site&) = default;
};

enum class Axis : std::uint8_t { Horizontal, Vertical };

/// Which spin component an edge couples.
enum class EdgeType : std::uint8_t { X, Z };

enum class PlaquetteKind : std::uint8_t { PureX, PureZ, Mixed };

struct Neighbor {
  Site site;
  EdgeType type;
};

/**
 * N x N torus with the plaquette-orbital edge pattern.
 *
 * Edge typing convention: the horizontal edge (x,y)-(x+1,y) is an x-edge iff
 * x is even, the vertical edge (x,y)-(x,y+1) is an x-edge iff y is even. With
 * this choice every plaquette whose lower-left corner has both coordinates
 * even is made of x-edges only, both odd gives z-edges only, and the mixed
 * plaquettes carry two of each. N must be even for the pattern to close up.
 *
 * Sites are indexed row-major, index = y * N + x. The object is immutable
 * after construction.
 */
class TorusLattice {
public:
  explicit TorusLattice(int n);

  [[nodiscard]] int size() const noexcept { return n_; }
  [[nodiscard]] int site_count() const noexcept { return n_ * n_; }
  [[nodiscard]] int plaquette_count() const noexcept { return n_ * n_; }

  [[nodiscard]] int index(Site s) const;
  [[nodiscard]] Site site(int index) const;
  /// Reduce arbitrary integer coordinates onto the torus.
  [[nodiscard]] Site wrap(int x, int y) const noexcept;
  [[nodiscard]] bool contains(Site s) const noexcept;

  [[nodiscard]] EdgeType edge_type(Site s, Axis direction) const;
  [[nodiscard]] PlaquetteKind plaquette_kind(Site corner) const;
  [[nodiscard]] std::array<Neighbor, 4> neighbors(Site s) const;

  /// Sites of the plaquette with the given lower-left corner, in the order
  /// r, r+e1, r+e2, r+e1+e2.
  [[nodiscard]] std::array<int, 4> plaquette_sites(Site corner) const;

  // Hot-path neighbor tables (indices), valid for any site index.
  [[nodiscard]] int right(int i) const noexcept { return right_[i]; }
  [[nodiscard]] int left(int i) const noexcept { return left_[i]; }
  [[nodiscard]] int up(int i) const noexcept { return up_[i]; }
  [[nodiscard]] int down(int i) const noexcept { return down_[i]; }
  /// Type of the edge from i to right(i) / up(i).
  [[nodiscard]] EdgeType right_type(int i) const noexcept {
    return (i % n_) % 2 == 0 ? EdgeType::X : EdgeType::Z;
  }
  [[nodiscard]] EdgeType up_type(int i) const noexcept {
    return (i / n_) % 2 == 0 ? EdgeType::X : EdgeType::Z;
  }

  /// Corners of all pure plaquettes: the N^2/4 x-plaquettes first, then the
  /// N^2/4 z-plaquettes.
  [[nodiscard]] const std::vector<Site>& pure_corners() const noexcept { return pure_corners_; }

private:
  void require_site(Site s) const;

  int n_;
  std::vector<int> right_, left_, up_, down_;
  std::vector<Site> pure_corners_;
};

}  // namespace pom
