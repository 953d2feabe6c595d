#include <doctest.h>

#include <set>
#include <stdexcept>

#include "oracles.hpp"
#include "pom/lattice.hpp"

using namespace pom;

TEST_SUITE("lattice") {
  TEST_CASE("edge types at the documented sites") {
    const TorusLattice l(4);
    CHECK(l.edge_type({0, 0}, Axis::Horizontal) == EdgeType::X);
    CHECK(l.edge_type({1, 0}, Axis::Horizontal) == EdgeType::Z);
    CHECK(l.edge_type({1, 1}, Axis::Vertical) == EdgeType::Z);
  }

  TEST_CASE("plaquette kinds") {
    const TorusLattice l(4);
    CHECK(l.plaquette_kind({0, 0}) == PlaquetteKind::PureX);
    CHECK(l.plaquette_kind({1, 1}) == PlaquetteKind::PureZ);
    CHECK(l.plaquette_kind({1, 0}) == PlaquetteKind::Mixed);
    CHECK(l.plaquette_kind({0, 3}) == PlaquetteKind::Mixed);
  }

  TEST_CASE("neighbors of the origin on N=4") {
    const TorusLattice l(4);
    const auto nb = l.neighbors({0, 0});
    std::set<std::pair<int, int>> x_sites, z_sites;
    for (const auto& e : nb) (e.type == EdgeType::X ? x_sites : z_sites).insert({e.site.x, e.site.y});
    CHECK(x_sites == std::set<std::pair<int, int>>{{1, 0}, {0, 1}});
    CHECK(z_sites == std::set<std::pair<int, int>>{{3, 0}, {0, 3}});
  }

  TEST_CASE("N=2 wraps onto the same neighbor twice") {
    const TorusLattice l(2);
    const auto nb = l.neighbors({0, 0});
    int to_10 = 0, to_01 = 0;
    for (const auto& e : nb) {
      if (e.site == Site{1, 0}) ++to_10;
      if (e.site == Site{0, 1}) ++to_01;
    }
    CHECK(to_10 == 2);
    CHECK(to_01 == 2);
  }

  TEST_CASE("invariants: two edges of each type per site, pure plaquettes are pure") {
    for (int n : {2, 4, 6, 10}) {
      const TorusLattice l(n);
      for (int i = 0; i < l.site_count(); ++i) {
        const Site s = l.site(i);
        CHECK(l.index(s) == i);
        int xs = 0;
        for (const auto& e : l.neighbors(s)) xs += e.type == EdgeType::X;
        CHECK(xs == 2);
        CHECK(l.right_type(i) == l.edge_type(s, Axis::Horizontal));
        CHECK(l.up_type(i) == l.edge_type(s, Axis::Vertical));
        CHECK(l.left(l.right(i)) == i);
        CHECK(l.down(l.up(i)) == i);
        // Edge types against the independent parity oracle.
        CHECK((l.edge_type(s, Axis::Horizontal) == EdgeType::X) == test::horizontal_is_x(s.x, s.y));
        CHECK((l.edge_type(s, Axis::Vertical) == EdgeType::X) == test::vertical_is_x(s.x, s.y));
        const Site up = l.wrap(s.x, s.y + 1);
        const Site right = l.wrap(s.x + 1, s.y);
        int x_edges = (l.edge_type(s, Axis::Horizontal) == EdgeType::X) +
                      (l.edge_type(s, Axis::Vertical) == EdgeType::X) +
                      (l.edge_type(right, Axis::Vertical) == EdgeType::X) +
                      (l.edge_type(up, Axis::Horizontal) == EdgeType::X);
        switch (l.plaquette_kind(s)) {
          case PlaquetteKind::PureX: CHECK(x_edges == 4); break;
          case PlaquetteKind::PureZ: CHECK(x_edges == 0); break;
          case PlaquetteKind::Mixed: CHECK(x_edges == 2); break;
        }
      }
      const auto& pc = l.pure_corners();
      REQUIRE(pc.size() == static_cast<std::size_t>(n * n / 2));
      for (std::size_t k = 0; k < pc.size(); ++k) {
        CHECK(l.plaquette_kind(pc[k]) ==
              (k < pc.size() / 2 ? PlaquetteKind::PureX : PlaquetteKind::PureZ));
      }
    }
  }

  TEST_CASE("plaquette_sites order and wraparound") {
    const TorusLattice l(4);
    const auto p = l.plaquette_sites({3, 3});
    CHECK(p[0] == l.index({3, 3}));
    CHECK(p[1] == l.index({0, 3}));
    CHECK(p[2] == l.index({3, 0}));
    CHECK(p[3] == l.index({0, 0}));
  }

  TEST_CASE("rejects odd or tiny sizes and foreign sites") {
    CHECK_THROWS_AS(TorusLattice(5), std::invalid_argument);
    CHECK_THROWS_AS(TorusLattice(0), std::invalid_argument);
    const TorusLattice l(4);
    CHECK_FALSE(l.contains({4, 0}));
    CHECK_THROWS((void)l.index({4, 0}));
    CHECK(l.wrap(-1, 5) == Site{3, 1});
  }
}
