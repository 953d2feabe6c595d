#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pom/spinwave.hpp"

namespace pom::cli {

struct SimulateParams {
  int n = 10;
  double beta = 8.0;
  double j1 = 1.0;
  double j2 = 1.0;
  std::string kind = "enhanced";
  long long sweeps = 10000;
  long long thermalization = 1000;
  long long measure_every = 1;
  double width = 0.5;
  bool tune = true;
  double flip_fraction = 0.5;
  std::uint64_t seed = 1;
  int chains = 1;
  std::string init = "random";  // random | x | z | path to an x,y,angle CSV
};

struct SpinwaveParams {
  double theta_min = 0.01;
  double theta_max = 1.5607963267948966;  // pi/2 - 0.01
  int points = 200;
  double beta_j = 1.0;
  int grid = 1024;
  int n = 0;  // > 0 adds the finite-volume column
  double lambda = 0.0;
};

struct OracleParams {
  double theta = 0.7853981633974483;
  double delta = 0.0;  // <= 0 selects beta^(-5/12)
  double beta_j = 50.0;
  int n = 4;
  double samples = 1e6;
  std::uint64_t seed = 1;
  bool full = false;  // unconstrained Z at N = 2 with j1, j2, beta
  double j1 = 1.0;
  double j2 = 1.0;
  double beta = 1.0;
};

struct VerifyParams {
  int n = 2;
  double beta = 4.0;
  double delta = 0.0;  // <= 0 selects beta^(-5/12)
  double tau = 0.1;
  double samples = 1e6;
  std::uint64_t seed = 1;
};

struct AnalyzeParams {
  std::vector<std::string> records;
  std::string compare;  // optional Metropolis records for the mixing comparison
  int plaquettes = 0;   // pure-z plaquette count; 0 infers it from the records
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// The check suite behind `verify`. `builder` supplies M(k, theta) to the
/// determinant and Hermiticity checks, so tests can inject a broken matrix.
[[nodiscard]] std::vector<CheckResult> run_checks(const VerifyParams& params, int threads,
                                                  const MatrixBuilder& builder = spin_wave_entries_extended);

/// Entry point shared by the executable and the tests. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pom::cli
