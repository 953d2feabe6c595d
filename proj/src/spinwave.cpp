#include "pom/spinwave.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pom/summation.hpp"

namespace pom {

namespace {

constexpr double kPi = std::numbers::pi;

// |a_-|^2, |a_+|^2 for one momentum component, via half-angle forms.
struct ModuliPair {
  double minus;
  double plus;
};

ModuliPair moduli(double k) {
  const double s = std::sin(0.5 * k);
  const double c = std::cos(0.5 * k);
  return {4.0 * s * s, 4.0 * c * c};
}

// log det M given the squared moduli and sin^2(2 theta), cos^2(2 theta).
double log_det_from_moduli(ModuliPair a, ModuliPair b, double sin2_sq, double rho_sq) {
  const double big_a =
      (a.minus + b.minus) * (a.plus + b.minus) * (a.minus + b.plus) * (a.plus + b.plus) / 16.0;
  const double gap = a.minus * a.plus - b.minus * b.plus;
  const double big_c = gap * gap / 16.0;
  return std::log(sin2_sq) + std::log(big_a - rho_sq * big_c);
}

void require_regular(double theta) {
  if (std::abs(std::sin(2.0 * theta)) < 1e-14) {
    throw std::domain_error("spin-wave free energy is singular where sin(2 theta) = 0 (theta = " +
                            std::to_string(theta) + ")");
  }
}

template <class Real>
std::array<std::array<std::complex<Real>, 4>, 4> entries_in(Momentum k, double theta,
                                                            std::complex<Real>* a_plus = nullptr,
                                                            std::complex<Real>* a_minus = nullptr,
                                                            std::complex<Real>* b_plus = nullptr,
                                                            std::complex<Real>* b_minus = nullptr) {
  using C = std::complex<Real>;
  const Real rho = -std::cos(Real{2} * static_cast<Real>(theta));
  const C e1 = std::polar(Real{1}, -static_cast<Real>(k.k1));
  const C e2 = std::polar(Real{1}, -static_cast<Real>(k.k2));
  const C ap = Real{1} + e1;
  const C am = Real{1} - e1;
  const C bp = Real{1} + e2;
  const C bm = Real{1} - e2;
  if (a_plus) *a_plus = ap;
  if (a_minus) *a_minus = am;
  if (b_plus) *b_plus = bp;
  if (b_minus) *b_minus = bm;

  const Real nam = std::norm(am);
  const Real nap = std::norm(ap);
  const Real nbm = std::norm(bm);
  const Real nbp = std::norm(bp);
  const C ax = rho * am * std::conj(ap);
  const C bx = rho * bm * std::conj(bp);
  const C zero{};

  std::array<std::array<C, 4>, 4> e;
  e[0] = {C(nam + nbm), ax, bx, zero};
  e[1] = {std::conj(ax), C(nap + nbm), zero, bx};
  e[2] = {std::conj(bx), zero, C(nam + nbp), ax};
  e[3] = {zero, std::conj(bx), std::conj(ax), C(nap + nbp)};
  for (auto& row : e) {
    for (auto& v : row) v *= Real{0.5};
  }
  return e;
}

template <class Real>
std::complex<Real> lu_det(std::array<std::array<std::complex<Real>, 4>, 4> lu) {
  using C = std::complex<Real>;
  C det{1, 0};
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 4; ++row) {
      if (std::abs(lu[row][col]) > std::abs(lu[pivot][col])) pivot = row;
    }
    if (lu[pivot][col] == C{}) return {};
    if (pivot != col) {
      std::swap(lu[pivot], lu[col]);
      det = -det;
    }
    det *= lu[col][col];
    for (int row = col + 1; row < 4; ++row) {
      const C factor = lu[row][col] / lu[col][col];
      for (int j = col + 1; j < 4; ++j) lu[row][j] -= factor * lu[col][j];
    }
  }
  return det;
}

template <class M, class Real>
bool hermitian(const M& m, Real tol) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (std::abs(m[i][j] - std::conj(m[j][i])) > tol) return false;
    }
  }
  return true;
}

}  // namespace

SpinWaveMatrix build_matrix(Momentum k, double theta) {
  SpinWaveMatrix m;
  m.k = k;
  m.theta = theta;
  m.rho = -std::cos(2.0 * theta);
  m.entries = entries_in<double>(k, theta, &m.a_plus, &m.a_minus, &m.b_plus, &m.b_minus);
  return m;
}

Matrix4c spin_wave_entries(Momentum k, double theta) { return entries_in<double>(k, theta); }

Matrix4x spin_wave_entries_extended(Momentum k, double theta) {
  return entries_in<long double>(k, theta);
}

double det_closed_form(Momentum k, double theta) {
  const ModuliPair a = moduli(k.k1);
  const ModuliPair b = moduli(k.k2);
  const double s2 = std::sin(2.0 * theta);
  const double c2 = std::cos(2.0 * theta);
  const double big_a =
      (a.minus + b.minus) * (a.plus + b.minus) * (a.minus + b.plus) * (a.plus + b.plus) / 16.0;
  const double gap = a.minus * a.plus - b.minus * b.plus;
  const double big_c = gap * gap / 16.0;
  return s2 * s2 * (big_a - c2 * c2 * big_c);
}

Complex det_direct(const Matrix4c& m) { return lu_det(m); }

ComplexX det_direct(const Matrix4x& m) { return lu_det(m); }

bool is_hermitian(const Matrix4c& m, double tol) { return hermitian(m, tol); }

bool is_hermitian(const Matrix4x& m, long double tol) { return hermitian(m, tol); }

double mean_log_det(double theta, int grid) {
  require_regular(theta);
  if (grid < 1) throw std::invalid_argument("quadrature grid must be positive");
  std::vector<ModuliPair> axis(grid);
  for (int j = 0; j < grid; ++j) axis[j] = moduli(kPi * (j + 0.5) / grid);
  const double s2 = std::sin(2.0 * theta);
  const double c2 = std::cos(2.0 * theta);
  const double sin2_sq = s2 * s2;
  const double rho_sq = c2 * c2;
  CompensatedSum total;
  for (int i = 0; i < grid; ++i) {
    double row = 0.0;
    for (int j = 0; j < grid; ++j) row += log_det_from_moduli(axis[i], axis[j], sin2_sq, rho_sq);
    total += row;
  }
  return total.value() / (static_cast<double>(grid) * grid);
}

QuadratureResult integrate_log_det(double theta, const QuadratureOptions& opts) {
  require_regular(theta);
  if (opts.initial_grid < 2 || opts.max_doublings < 2) {
    throw std::invalid_argument("quadrature needs initial_grid >= 2 and max_doublings >= 2");
  }
  int grid = opts.initial_grid;
  double coarse = mean_log_det(theta, grid);
  double previous_extrapolation = 0.0;
  for (int d = 1; d <= opts.max_doublings; ++d) {
    grid *= 2;
    const double fine = mean_log_det(theta, grid);
    const double extrapolation = fine + (fine - coarse) / 3.0;
    if (d >= 2) {
      const double err = std::abs(extrapolation - previous_extrapolation);
      if (err < opts.tolerance) return {extrapolation, err, grid};
    }
    previous_extrapolation = extrapolation;
    coarse = fine;
  }
  throw std::runtime_error("log det quadrature did not converge to " +
                           std::to_string(opts.tolerance) + " within " +
                           std::to_string(opts.max_doublings) + " grid doublings");
}

double free_energy_f(double theta, double beta_j, const QuadratureOptions& opts) {
  if (!(beta_j > 0.0)) throw std::domain_error("beta J must be positive");
  return 0.5 * std::log(beta_j) + integrate_log_det(theta, opts).value / 8.0;
}

double free_energy_f_fixed(double theta, double beta_j, int grid) {
  if (!(beta_j > 0.0)) throw std::domain_error("beta J must be positive");
  if (grid < 2 || grid % 2 != 0) throw std::invalid_argument("fixed grid must be even and >= 2");
  const double coarse = mean_log_det(theta, grid / 2);
  const double fine = mean_log_det(theta, grid);
  return 0.5 * std::log(beta_j) + (fine + (fine - coarse) / 3.0) / 8.0;
}

double free_energy_fn(double theta, double lambda, double beta_j, int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("lattice size must be even and >= 2");
  if (!(beta_j > 0.0)) throw std::domain_error("beta J must be positive");
  if (!(lambda >= 0.0)) throw std::domain_error("regulator lambda must be >= 0");
  CompensatedSum total;
  for (int n1 = 0; n1 < n / 2; ++n1) {
    for (int n2 = 0; n2 < n / 2; ++n2) {
      const Momentum k{2.0 * kPi * n1 / n, 2.0 * kPi * n2 / n};
      Matrix4c m = spin_wave_entries(k, theta);
      for (int i = 0; i < 4; ++i) m[i][i] += lambda;
      const double det = det_direct(m).real();
      if (!(det > 0.0)) {
        throw std::domain_error("singular summand det(lambda + M) at k = (" +
                                std::to_string(k.k1) + ", " + std::to_string(k.k2) + ")");
      }
      total += std::log(det);
    }
  }
  return 0.5 * std::log(beta_j) + 0.5 * total.value() / (static_cast<double>(n) * n);
}

double gaussian_form_direct(const TorusLattice& lattice, double theta,
                            std::span<const double> deviations) {
  if (static_cast<int>(deviations.size()) != lattice.site_count()) {
    throw std::invalid_argument("deviation field size does not match lattice");
  }
  const double sin_sq = std::sin(theta) * std::sin(theta);
  const double cos_sq = std::cos(theta) * std::cos(theta);
  CompensatedSum total;
  for (int i = 0; i < lattice.site_count(); ++i) {
    for (auto [j, type] : {std::pair{lattice.right(i), lattice.right_type(i)},
                           std::pair{lattice.up(i), lattice.up_type(i)}}) {
      const double d = deviations[i] - deviations[j];
      total += 0.5 * d * d * (type == EdgeType::X ? sin_sq : cos_sq);
    }
  }
  return total.value();
}

double gaussian_form_fourier(const TorusLattice& lattice, double theta,
                             std::span<const double> deviations) {
  const int n = lattice.size();
  if (static_cast<int>(deviations.size()) != lattice.site_count()) {
    throw std::invalid_argument("deviation field size does not match lattice");
  }
  // hat(k) = (1/N) sum_r d_r exp(+i k.r), done separably: x first, then y.
  std::vector<Complex> phases(n);
  for (int j = 0; j < n; ++j) phases[j] = std::polar(1.0, 2.0 * kPi * j / n);
  std::vector<Complex> partial(static_cast<std::size_t>(n) * n);  // [y][n1]
  for (int y = 0; y < n; ++y) {
    for (int n1 = 0; n1 < n; ++n1) {
      Complex acc{};
      for (int x = 0; x < n; ++x) acc += deviations[y * n + x] * phases[(n1 * x) % n];
      partial[y * n + n1] = acc;
    }
  }
  std::vector<Complex> hat(static_cast<std::size_t>(n) * n);  // [n2][n1]
  for (int n2 = 0; n2 < n; ++n2) {
    for (int n1 = 0; n1 < n; ++n1) {
      Complex acc{};
      for (int y = 0; y < n; ++y) acc += partial[y * n + n1] * phases[(n2 * y) % n];
      hat[n2 * n + n1] = acc / static_cast<double>(n);
    }
  }

  const int h = n / 2;
  CompensatedSum total;
  for (int n1 = 0; n1 < h; ++n1) {
    for (int n2 = 0; n2 < h; ++n2) {
      const Momentum k{2.0 * kPi * n1 / n, 2.0 * kPi * n2 / n};
      const Matrix4c m = spin_wave_entries(k, theta);
      const std::array<Complex, 4> v = {hat[n2 * n + n1], hat[n2 * n + n1 + h],
                                        hat[(n2 + h) * n + n1], hat[(n2 + h) * n + n1 + h]};
      Complex block{};
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) block += v[i] * m[i][j] * std::conj(v[j]);
      }
      total += block.real();
    }
  }
  return 0.5 * total.value();
}

}  // namespace pom
