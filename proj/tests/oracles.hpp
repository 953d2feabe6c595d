#pragma once

// Test-only reference implementations, written independently of src/.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "pom/rng.hpp"

namespace pom::test {

// Edge type straight from the parity rule: horizontal edge at (x, y) is an
// x-edge iff x is even, vertical iff y is even.
inline bool horizontal_is_x(int x, int /*y*/) { return x % 2 == 0; }
inline bool vertical_is_x(int /*x*/, int y) { return y % 2 == 0; }

// Brute-force -sum_edges J S.S over an angle array, row-major, by explicit loops.
inline double brute_energy(int n, const std::vector<double>& angles, double j1, double j2) {
  auto at = [&](int x, int y) { return angles[((y + n) % n) * n + (x + n) % n]; };
  double h = 0.0;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double a = at(x, y);
      const double r = at(x + 1, y);
      const double u = at(x, y + 1);
      h -= horizontal_is_x(x, y) ? j1 * std::cos(a) * std::cos(r) : j2 * std::sin(a) * std::sin(r);
      h -= vertical_is_x(x, y) ? j1 * std::cos(a) * std::cos(u) : j2 * std::sin(a) * std::sin(u);
    }
  }
  return h;
}

// Plaquette energy at corner (x, y): minus the four bond products.
inline double brute_plaquette(int n, const std::vector<double>& angles, int x, int y,
                              bool normalized) {
  auto ang = [&](int px, int py) { return angles[((py + n) % n) * n + (px + n) % n]; };
  auto term = [&](bool is_x, double a, double b) {
    if (normalized) {
      const double d = is_x ? std::cos(a) - std::cos(b) : std::sin(a) - std::sin(b);
      return d * d;
    }
    return -(is_x ? std::cos(a) * std::cos(b) : std::sin(a) * std::sin(b));
  };
  const double s = ang(x, y), s1 = ang(x + 1, y), s2 = ang(x, y + 1), s12 = ang(x + 1, y + 1);
  return term(horizontal_is_x(x, y), s, s1) + term(vertical_is_x(x, y), s, s2) +
         term(vertical_is_x(x + 1, y), s1, s12) + term(horizontal_is_x(x, y + 1), s2, s12);
}

// Gibbs expectations at N = 2 by a G^4 periodic trapezoid rule over the four
// angles (spectrally accurate for the smooth periodic integrand).
struct GibbsMeans {
  double energy = 0.0;     // H / 4
  double q_x = 0.0;
  double e_pure_x = 0.0;   // E at corner (0,0)
  double e_pure_z = 0.0;   // E at corner (1,1)
  double en_mixed = 0.0;   // mean normalized E over the two mixed corners
};

inline GibbsMeans gibbs_n2(double beta, double j1, double j2, int grid) {
  std::vector<double> angle(grid);
  for (int g = 0; g < grid; ++g) angle[g] = 2.0 * std::numbers::pi * g / grid;
  double z = 0.0;
  GibbsMeans m;
  std::vector<double> a(4);
  for (int i0 = 0; i0 < grid; ++i0) {
    a[0] = angle[i0];
    for (int i1 = 0; i1 < grid; ++i1) {
      a[1] = angle[i1];
      for (int i2 = 0; i2 < grid; ++i2) {
        a[2] = angle[i2];
        for (int i3 = 0; i3 < grid; ++i3) {
          a[3] = angle[i3];
          const double h = brute_energy(2, a, j1, j2);
          const double w = std::exp(-beta * (h + 4.0));
          z += w;
          double qx = 0.0;
          for (double t : a) qx += std::cos(t) * std::cos(t);
          m.energy += w * h / 4.0;
          m.q_x += w * qx / 4.0;
          m.e_pure_x += w * brute_plaquette(2, a, 0, 0, false);
          m.e_pure_z += w * brute_plaquette(2, a, 1, 1, false);
          m.en_mixed +=
              w * 0.5 * (brute_plaquette(2, a, 1, 0, true) + brute_plaquette(2, a, 0, 1, true));
        }
      }
    }
  }
  m.energy /= z;
  m.q_x /= z;
  m.e_pure_x /= z;
  m.e_pure_z /= z;
  m.en_mixed /= z;
  return m;
}

// x_t = rho x_{t-1} + sqrt(1 - rho^2) eps_t, stationary start.
inline std::vector<double> ar1_series(std::size_t length, double rho, std::uint64_t seed) {
  Rng rng(seed);
  auto gauss = [&] {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  std::vector<double> x(length);
  x[0] = gauss();
  const double s = std::sqrt(1.0 - rho * rho);
  for (std::size_t t = 1; t < length; ++t) x[t] = rho * x[t - 1] + s * gauss();
  return x;
}

inline double ar1_tau(double rho) { return (1.0 + rho) / (2.0 * (1.0 - rho)); }

}  // namespace pom::test
