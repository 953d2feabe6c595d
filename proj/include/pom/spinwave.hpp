#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>

#include "pom/lattice.hpp"

namespace pom {

using Complex = std::complex<double>;
using Matrix4c = std::array<std::array<Complex, 4>, 4>;
// Extended-precision copy of M, used only by the determinant oracle.
using ComplexX = std::complex<long double>;
using Matrix4x = std::array<std::array<ComplexX, 4>, 4>;

struct Momentum {
  double k1 = 0.0;
  double k2 = 0.0;
};

/**
 * 4x4 Hermitian block of the spin-wave quadratic form at momentum k and tilt
 * theta. Rows/columns index k, k + pi e1, k + pi e2, k + pi (e1 + e2).
 */
struct SpinWaveMatrix {
  Momentum k;
  double theta = 0.0;
  double rho = 0.0;  // -cos(2 theta)
  Complex a_plus, a_minus, b_plus, b_minus;
  Matrix4c entries{};
};

[[nodiscard]] SpinWaveMatrix build_matrix(Momentum k, double theta);

/// (1 - rho^2)(A - rho^2 C), the production determinant.
[[nodiscard]] double det_closed_form(Momentum k, double theta);

/// Determinant by complex LU with partial pivoting (independent check).
[[nodiscard]] Complex det_direct(const Matrix4c& m);
/// Same LU in long double. Near rho = +-1 the determinant is ill-conditioned
/// in the entries (it scales like 1 - rho^2), so a double-precision M cannot
/// confirm the closed form to 1e-10; the oracle builds M in long double.
[[nodiscard]] ComplexX det_direct(const Matrix4x& m);

[[nodiscard]] bool is_hermitian(const Matrix4c& m, double tol = 0.0);
[[nodiscard]] bool is_hermitian(const Matrix4x& m, long double tol = 0.0L);

struct QuadratureOptions {
  int initial_grid = 256;  // points per axis on the quadrant (0, pi)^2
  int max_doublings = 3;
  double tolerance = 1e-9;  // on successive extrapolated values
};

struct QuadratureResult {
  double value = 0.0;           // Richardson-extrapolated
  double error_estimate = 0.0;  // change between last two extrapolations
  int grid = 0;                 // finest grid used
};

/// Midpoint average of log det M(k, theta) over the quadrant at a fixed grid
/// (equal to the full-square average by symmetry of the integrand).
[[nodiscard]] double mean_log_det(double theta, int grid);

/// Converged (1/(2 pi)^2) * integral of log det M over [-pi, pi]^2.
/// Throws std::domain_error if sin(2 theta) == 0 and std::runtime_error
/// if the doubling sequence does not meet the tolerance.
[[nodiscard]] QuadratureResult integrate_log_det(double theta, const QuadratureOptions& opts = {});

/// Spin-wave free energy F(theta) = (1/2) log(beta J) + (1/8) <log det M>.
[[nodiscard]] double free_energy_f(double theta, double beta_j, const QuadratureOptions& opts = {});

/// F at a fixed quadrature grid (Richardson from grid/2 and grid). Used for
/// tables where every theta must share the same discretisation.
[[nodiscard]] double free_energy_f_fixed(double theta, double beta_j, int grid);

/**
 * Finite-volume Gaussian free energy
 *   F_N(theta, lambda) = (1/2) log(beta J) + (1/(2 N^2)) sum log det(lambda + M(k))
 * over the first quadrant of the reciprocal torus, k = 2 pi n / N in [0, pi)^2.
 * Throws std::domain_error when a summand determinant is not positive.
 */
[[nodiscard]] double free_energy_fn(double theta, double lambda, double beta_j, int n);

/// Real-space G(theta-dev) = 1/2 sum_x (d_r - d_r')^2 sin^2 + 1/2 sum_z (d_r - d_r')^2 cos^2.
[[nodiscard]] double gaussian_form_direct(const TorusLattice& lattice, double theta,
                                          std::span<const double> deviations);

/// Same quadratic form evaluated block by block in momentum space.
[[nodiscard]] double gaussian_form_fourier(const TorusLattice& lattice, double theta,
                                           std::span<const double> deviations);

/// build_matrix(k, theta).entries.
[[nodiscard]] Matrix4c spin_wave_entries(Momentum k, double theta);
/// The same entries evaluated in long double.
[[nodiscard]] Matrix4x spin_wave_entries_extended(Momentum k, double theta);

/// Source of M for the determinant oracle (replaceable to inject faults).
using MatrixBuilder = std::function<Matrix4x(Momentum, double)>;

}  // namespace pom
