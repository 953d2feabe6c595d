#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "pom/analysis.hpp"
#include "pom/io.hpp"
#include "pom/lattice.hpp"
#include "pom/oracle.hpp"
#include "pom/parallel.hpp"
#include "pom/rng.hpp"
#include "pom/sampler.hpp"
#include "pom/spin_model.hpp"
#include "pom/symmetry.hpp"

namespace pom::cli {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SimulateParams, n, beta, j1, j2, kind, sweeps,
                                                thermalization, measure_every, width, tune,
                                                flip_fraction, seed, chains, init)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SpinwaveParams, theta_min, theta_max, points,
                                                beta_j, grid, n, lambda)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OracleParams, theta, delta, beta_j, n, samples,
                                                seed, full, j1, j2, beta)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VerifyParams, n, beta, delta, tau, samples, seed)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(AnalyzeParams, records, compare, plaquettes)

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

long long sample_count(double samples) {
  if (!(samples >= 1.0) || samples != std::floor(samples) || samples > 9e15) {
    throw UsageError("sample count must be a positive integer, got " + fmt(samples));
  }
  return static_cast<long long>(samples);
}

double default_delta(double delta, double beta) {
  return delta > 0.0 ? delta : std::pow(beta, -5.0 / 12.0);
}

// Output directory handling: outputs are never overwritten.
class OutputDir {
public:
  explicit OutputDir(std::string dir) : dir_(std::move(dir)) {}

  fs::path claim(const std::string& name) {
    const fs::path p = fs::path(dir_) / name;
    if (fs::exists(p)) throw UsageError("refusing to overwrite existing output " + p.string());
    claimed_.push_back(name);
    return p;
  }

  void create() const { fs::create_directories(dir_); }
  [[nodiscard]] const std::vector<std::string>& files() const { return claimed_; }

private:
  std::string dir_;
  std::vector<std::string> claimed_;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return f;
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  return json::parse(f);
}

template <class Params>
Params params_from_manifest(const std::string& path, const std::string& command) {
  const json m = read_json(path);
  if (m.value("command", "") != command) {
    throw UsageError("manifest " + path + " is not a '" + command + "' manifest");
  }
  return m.at("parameters").get<Params>();
}

void write_manifest(const fs::path& path, const std::string& command, const json& parameters,
                    const json& extra, const std::vector<std::string>& outputs, double seconds) {
  json m;
  m["tool"] = "pom";
  m["command"] = command;
  m["parameters"] = parameters;
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  m["outputs"] = outputs;
  m["wall_time_seconds"] = seconds;
  auto f = open_out(path);
  f << m.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json mean_error_json(const MeanError& m) {
  return {{"mean", m.mean}, {"error", m.error}, {"blocking_levels", m.levels}};
}

json tau_json(const AutocorrelationTime& t) {
  return {{"tau_int", t.tau_int},
          {"window", t.window},
          {"lower_bound", t.lower_bound},
          {"degenerate", t.degenerate}};
}

// ---------------------------------------------------------------- simulate

SpinConfig initial_config(const SimulateParams& p, const TorusLattice& lattice, int chain) {
  if (p.init == "random") {
    Rng rng(p.seed, (std::uint64_t{1} << 32) + static_cast<std::uint64_t>(chain));
    return random_config(lattice.site_count(), rng);
  }
  if (p.init == "x") return SpinConfig(lattice.site_count(), 0.0);
  if (p.init == "z") return SpinConfig(lattice.site_count(), kPi / 2);
  std::ifstream f(p.init);
  if (!f) throw UsageError("init must be random, x, z or a readable x,y,angle file: " + p.init);
  return read_config_csv(f, lattice);
}

int cmd_simulate(const SimulateParams& p, const std::string& out_dir, int threads,
                 std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const TorusLattice lattice(p.n);
  const Couplings couplings{p.j1, p.j2, p.beta};
  couplings.validate();
  SamplerSpec spec;
  spec.kind = parse_sampler_kind(p.kind);
  spec.proposal_width = p.width;
  spec.tune_width = p.tune;
  spec.flip_fraction = p.flip_fraction;
  spec.sweeps = p.sweeps;
  spec.thermalization = p.thermalization;
  spec.measure_every = p.measure_every;
  spec.seed = p.seed;
  spec.validate();
  if (p.chains < 1) throw UsageError("chains must be >= 1");
  if (out_dir.empty()) throw UsageError("simulate needs --out DIR");

  OutputDir dir(out_dir);
  auto suffix = [&](int c) { return p.chains == 1 ? std::string() : "_" + std::to_string(c); };
  std::vector<fs::path> records_path, corr_path, final_path;
  for (int c = 0; c < p.chains; ++c) {
    records_path.push_back(dir.claim("records" + suffix(c) + ".csv"));
    corr_path.push_back(dir.claim("correlation" + suffix(c) + ".csv"));
    final_path.push_back(dir.claim("final" + suffix(c) + ".csv"));
  }
  const fs::path manifest_path = dir.claim("manifest.json");
  std::vector<SpinConfig> initial;
  for (int c = 0; c < p.chains; ++c) initial.push_back(initial_config(p, lattice, c));
  dir.create();

  std::vector<ChainSummary> summaries(p.chains);
  parallel_for(p.chains, threads, [&](int c) {
    SamplerSpec chain_spec = spec;
    chain_spec.stream = static_cast<std::uint64_t>(c);
    auto records = open_out(records_path[c]);
    write_record_header(records);
    CorrelationAccumulator corr(lattice);
    summaries[c] = run_chain(lattice, couplings, chain_spec, initial[c],
                             [&](const ObservableRecord& r, const SpinConfig& config) {
                               write_record(records, r);
                               corr.add(config);
                             });
    auto corr_file = open_out(corr_path[c]);
    corr_file << "distance,truncated\n";
    const auto d = corr.distances();
    const auto v = corr.truncated();
    for (std::size_t i = 0; i < d.size(); ++i) corr_file << d[i] << ',' << format_double(v[i]) << '\n';
    auto final_file = open_out(final_path[c]);
    write_config_csv(final_file, lattice, summaries[c].final_config);
  });

  json chains = json::array();
  for (int c = 0; c < p.chains; ++c) {
    const auto& s = summaries[c];
    chains.push_back({{"stream", c},
                      {"records", s.records},
                      {"proposal_width", s.proposal_width},
                      {"thermalization_acceptance", s.thermalization_stats.acceptance()},
                      {"acceptance", s.measurement_stats.acceptance()},
                      {"plaquette_flips", s.measurement_stats.flips}});
  }
  const json extra = {{"lattice", {{"n", p.n}, {"sites", lattice.site_count()}}},
                      {"couplings", {{"j1", p.j1}, {"j2", p.j2}, {"beta", p.beta}}},
                      {"chains", chains}};
  write_manifest(manifest_path, "simulate", json(p), extra, dir.files(), seconds_since(start));
  out << "simulate: " << p.chains << " chain(s), " << summaries[0].records
      << " records each, written to " << out_dir << '\n';
  return 0;
}

// ---------------------------------------------------------------- spinwave

int cmd_spinwave(const SpinwaveParams& p, const std::string& out_dir, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (p.points < 2) throw UsageError("points must be >= 2");
  if (!(p.theta_max > p.theta_min)) throw UsageError("theta-max must exceed theta-min");
  std::ostringstream csv;
  csv << (p.n > 0 ? "theta,f,f_n\n" : "theta,f\n");
  for (int i = 0; i < p.points; ++i) {
    const double theta = p.theta_min + (p.theta_max - p.theta_min) * i / (p.points - 1);
    csv << format_double(theta) << ',' << format_double(free_energy_f_fixed(theta, p.beta_j, p.grid));
    if (p.n > 0) csv << ',' << format_double(free_energy_fn(theta, p.lambda, p.beta_j, p.n));
    csv << '\n';
  }
  if (out_dir.empty()) {
    out << csv.str();
    return 0;
  }
  OutputDir dir(out_dir);
  const auto table = dir.claim("ftheta.csv");
  const auto manifest = dir.claim("manifest.json");
  dir.create();
  open_out(table) << csv.str();
  write_manifest(manifest, "spinwave", json(p), json::object(), dir.files(), seconds_since(start));
  out << "spinwave: " << p.points << " points written to " << table.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const OracleParams& p, const std::string& out_dir, int threads, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const long long samples = sample_count(p.samples);
  json report;
  if (p.full) {
    const Couplings c{p.j1, p.j2, p.beta};
    const LogZEstimate z = full_log_z(p.n, c, samples, p.seed, threads);
    report = {{"kind", "full"}, {"n", p.n}, {"j1", p.j1}, {"j2", p.j2}, {"beta", p.beta},
              {"estimate", z.estimate}, {"std_error", z.std_error}, {"samples", z.samples},
              {"effective_samples", z.effective_samples}, {"reliable", z.reliable},
              {"seed", p.seed}};
  } else {
    ConstrainedEnsemble e{p.theta, default_delta(p.delta, p.beta_j), p.n, p.beta_j};
    const LogZEstimate z = constrained_log_z(e, samples, p.seed, threads);
    report = {{"kind", "constrained"}, {"theta", p.theta}, {"delta", e.delta},
              {"delta_prime", e.delta_prime()}, {"beta_j", p.beta_j}, {"n", p.n},
              {"estimate", z.estimate}, {"std_error", z.std_error}, {"samples", z.samples},
              {"effective_samples", z.effective_samples}, {"reliable", z.reliable},
              {"seed", p.seed}};
    if (p.beta_j > 0.0 && std::abs(std::sin(2.0 * p.theta)) >= 1e-14) {
      const double f = free_energy_f(p.theta, p.beta_j);
      report["spin_wave_f"] = f;
      report["estimate_plus_f"] = z.estimate + f;
      report["admissible_delta_floor"] = admissible_delta_floor(p.beta_j, e.delta);
    }
  }
  out << report.dump(2) << '\n';
  if (!out_dir.empty()) {
    OutputDir dir(out_dir);
    const auto path = dir.claim("report.json");
    const auto manifest = dir.claim("manifest.json");
    dir.create();
    open_out(path) << report.dump(2) << '\n';
    write_manifest(manifest, "oracle", json(p), json::object(), dir.files(), seconds_since(start));
  }
  return 0;
}

// ---------------------------------------------------------------- analyze

json analyze_one(const std::vector<ObservableRecord>& records, int plaquettes) {
  check_records(records);
  json r;
  r["records"] = records.size();
  const auto qmax = column(records, "q_max");
  double ordered = 0.0;
  for (double q : qmax) ordered += q >= 0.9 ? 1.0 : 0.0;
  r["q_x"] = mean_error_json(blocking_mean(column(records, "q_x")));
  r["q_z"] = mean_error_json(blocking_mean(column(records, "q_z")));
  r["fraction_q_max_ge_0.9"] = records.empty() ? 0.0 : ordered / records.size();
  r["m_x"] = mean_error_json(blocking_mean(column(records, "m_x")));
  r["m_z"] = mean_error_json(blocking_mean(column(records, "m_z")));
  const NeelReport neel = neel_report(records);
  r["neel"] = {{"e_pure_x", mean_error_json(neel.e_pure_x)},
               {"e_pure_z", mean_error_json(neel.e_pure_z)},
               {"e_mixed", mean_error_json(neel.e_mixed)},
               {"en_pure_x", mean_error_json(neel.en_pure_x)},
               {"en_pure_z", mean_error_json(neel.en_pure_z)},
               {"en_mixed", mean_error_json(neel.en_mixed)},
               {"staggered", mean_error_json(neel.staggered)},
               {"e_separation", neel.e_separation},
               {"e_target_deviation", neel.e_target_deviation},
               {"en_max", neel.en_max},
               {"en_separation", neel.en_separation},
               {"en_separation_sigma", neel.en_separation_sigma}};
  if (records.size() >= 100) {
    json taus;
    for (const char* name : {"q_max", "n_up", "energy", "m_x", "m_z"}) {
      taus[name] = tau_json(autocorrelation_time(column(records, name)));
    }
    r["autocorrelation"] = taus;
    const BinomialTest b = binomial_symmetry_test(records, plaquettes);
    r["binomial"] = {{"plaquettes", plaquettes}, {"p_value", b.p_value}, {"chi2", b.chi2},
                     {"dof", b.dof}, {"samples", b.samples}, {"stride", b.stride},
                     {"tau_int", b.tau_int}, {"tau_lower_bound", b.tau_lower_bound},
                     {"stride_capped", b.stride_capped}, {"inconclusive", b.inconclusive},
                     {"histogram", b.histogram},
                     {"reference_p_7_of_25", binomial_half_pmf(25, 7)}};
  }
  return r;
}

int cmd_analyze(const AnalyzeParams& p, const std::string& out_dir, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (p.records.empty()) throw UsageError("analyze needs at least one --records file");
  auto load = [](const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    return read_records_csv(f);
  };
  json report;
  report["files"] = json::array();
  std::vector<ObservableRecord> first;
  std::vector<std::vector<int>> histograms;
  int plaquettes = p.plaquettes;
  for (const auto& path : p.records) {
    auto records = load(path);
    if (plaquettes == 0 && !records.empty()) {
      plaquettes = static_cast<int>(records.front().z_orientation.size());
    }
    json one = analyze_one(records, plaquettes);
    one["path"] = path;
    if (one.contains("binomial")) histograms.push_back(one["binomial"]["histogram"]);
    report["files"].push_back(one);
    if (first.empty()) first = std::move(records);
  }
  if (!p.compare.empty()) {
    const auto other = load(p.compare);
    const MixingReport mix = mixing_report(first, other, {"n_up", "q_max", "energy"});
    json m = json::array();
    for (std::size_t i = 0; i < mix.ratio.size(); ++i) {
      m.push_back({{"observable", mix.enhanced[i].observable},
                   {"tau_records", tau_json(mix.enhanced[i].tau)},
                   {"tau_compare", tau_json(mix.metropolis[i].tau)},
                   {"effective_samples_records", mix.enhanced[i].effective_samples},
                   {"effective_samples_compare", mix.metropolis[i].effective_samples},
                   {"ratio", mix.ratio[i]}});
    }
    report["mixing"] = m;
    report["compare"] = p.compare;
  }
  out << report.dump(2) << '\n';
  if (!out_dir.empty()) {
    OutputDir dir(out_dir);
    const auto path = dir.claim("report.json");
    const auto hist = dir.claim("nup_hist.csv");
    const auto manifest = dir.claim("manifest.json");
    dir.create();
    open_out(path) << report.dump(2) << '\n';
    auto h = open_out(hist);
    h << "n_up,count,expected_fraction\n";
    if (!histograms.empty()) {
      for (std::size_t k = 0; k < histograms.front().size(); ++k) {
        h << k << ',' << histograms.front()[k] << ','
          << format_double(binomial_half_pmf(plaquettes, static_cast<int>(k))) << '\n';
      }
    }
    write_manifest(manifest, "analyze", json(p), json::object(), dir.files(), seconds_since(start));
  }
  return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const VerifyParams& p, int threads, std::ostream& out) {
  const auto results = run_checks(p, threads);
  bool ok = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  " << r.detail << '\n';
    ok = ok && r.passed;
  }
  out << (ok ? "all checks passed\n" : "some checks FAILED\n");
  return ok ? 0 : 1;
}

FlipSet random_flips(const TorusLattice& lattice, Rng& rng) {
  FlipSet flips;
  for (const Site& c : lattice.pure_corners()) {
    if (rng.below(2) == 1) flips.emplace_back(lattice, c);
  }
  return flips;
}

}  // namespace

std::vector<CheckResult> run_checks(const VerifyParams& p, int threads,
                                    const MatrixBuilder& builder) {
  std::vector<CheckResult> results;
  Rng rng(p.seed, 7001);

  {  // ground states
    double worst = 0.0;
    bool structural = true;
    for (int n : {2, 4, 8}) {
      const TorusLattice lattice(n);
      for (int t = 0; t < 200; ++t) {
        const Couplings sym{1.0, 1.0, 1.0};
        const SpinConfig g = ground_state(lattice, sym, rng.uniform(-kPi, kPi), random_flips(lattice, rng));
        worst = std::max(worst, std::abs(hamiltonian(lattice, g, sym) + n * n) / (n * n));
        structural = structural && is_ground_state(lattice, g, sym, 1e-9);
        const Couplings asym{2.0, 1.0, 1.0};
        const SpinConfig a = ground_state(lattice, asym, t % 2 == 0 ? 0.0 : kPi, random_flips(lattice, rng));
        worst = std::max(worst, std::abs(hamiltonian(lattice, a, asym) + 2.0 * n * n) / (2.0 * n * n));
        structural = structural && is_ground_state(lattice, a, asym, 1e-9);
      }
    }
    results.push_back({"ground-state energy = -max(J1,J2) N^2", worst <= 1e-12 && structural,
                       "max rel dev " + fmt(worst)});
  }
  {  // flip invariance
    const TorusLattice lattice(8);
    const Couplings c{1.0, 1.0, 1.0};
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const SpinConfig s = random_config(lattice.site_count(), rng);
      const auto& corners = lattice.pure_corners();
      const PlaquetteFlip flip(lattice, corners[rng.below(corners.size())]);
      const double before = hamiltonian(lattice, s, c);
      const double after = hamiltonian(lattice, apply_flip(lattice, s, flip), c);
      worst = std::max(worst, std::abs(after - before) / std::max(1.0, std::abs(before)));
    }
    results.push_back({"plaquette-flip energy invariance", worst <= 1e-12, "max rel change " + fmt(worst)});
  }
  {  // rewrite identity
    double worst = 0.0;
    const int sizes[] = {4, 8, 16, 32};
    for (int t = 0; t < 1000; ++t) {
      const TorusLattice lattice(sizes[t % 4]);
      const Couplings c{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), 1.0};
      const SpinConfig s = random_config(lattice.site_count(), rng);
      const double h = hamiltonian(lattice, s, c);
      const double r = hamiltonian_rewrite(lattice, s, c);
      worst = std::max(worst, std::abs(h - r) / std::max(1.0, std::abs(h)));
    }
    results.push_back({"energy rewrite identity", worst <= 1e-12, "max rel dev " + fmt(worst)});
  }
  {  // determinant oracle and Hermiticity
    double worst = 0.0;
    double worst_herm = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const Momentum k{rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
      const double theta = rng.uniform(0.0, 2.0 * kPi);
      const Matrix4x m = builder(k, theta);
      const ComplexX direct = det_direct(m);
      const double closed = det_closed_form(k, theta);
      worst = std::max(worst, static_cast<double>(std::abs(direct - static_cast<long double>(closed)) /
                                                  std::abs(closed)));
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          worst_herm = std::max(worst_herm, static_cast<double>(std::abs(m[i][j] - std::conj(m[j][i]))));
        }
      }
    }
    results.push_back({"det closed form vs LU (1e4 random k, theta)", worst <= 1e-10,
                       "max rel dev " + fmt(worst)});
    results.push_back({"M(k, theta) Hermitian", worst_herm <= 1e-14, "max |M - M^H| " + fmt(worst_herm)});
  }
  {  // determinant bounds on a grid
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      for (int j = 0; j < 200; ++j) {
        const Momentum k{-kPi + 2.0 * kPi * i / 199, -kPi + 2.0 * kPi * j / 199};
        for (int l = 0; l < 50; ++l) {
          const double theta = 0.5 * kPi * l / 49;
          const double s2 = std::sin(2.0 * theta);
          const double det = det_closed_form(k, theta);
          const double lower = s2 * s2 * std::pow(std::sin(k.k1) * std::sin(k.k2), 2);
          const double upper = 16.0 * s2 * s2;
          worst = std::max({worst, lower - det, det - upper});
        }
      }
    }
    results.push_back({"det bounds on 200x200x50 grid", worst <= 1e-12, "max violation " + fmt(worst)});
  }
  {  // Fourier identity for the quadratic form
    double worst = 0.0;
    for (int n : {2, 4, 8}) {
      const TorusLattice lattice(n);
      for (int t = 0; t < 100; ++t) {
        std::vector<double> d(lattice.site_count());
        for (double& v : d) v = rng.uniform(-1.0, 1.0);
        const double theta = rng.uniform(0.0, kPi);
        const double direct = gaussian_form_direct(lattice, theta, d);
        const double fourier = gaussian_form_fourier(lattice, theta, d);
        worst = std::max(worst, std::abs(direct - fourier) / std::abs(direct));
      }
    }
    results.push_back({"quadratic form: real space vs Fourier blocks", worst <= 1e-10,
                       "max rel dev " + fmt(worst)});
  }
  {  // F structure at a shared grid
    constexpr int grid = 512;
    double period = 0.0;
    double symmetry = 0.0;
    bool monotone = true;
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 40; ++i) {
      const double theta = (kPi / 4) * i / 41.0;
      const double f = free_energy_f_fixed(theta, 1.0, grid);
      period = std::max(period, std::abs(f - free_energy_f_fixed(theta + kPi / 2, 1.0, grid)));
      symmetry = std::max(symmetry, std::abs(f - free_energy_f_fixed(kPi / 2 - theta, 1.0, grid)));
      monotone = monotone && f > prev;
      prev = f;
    }
    results.push_back({"F(theta): period pi/2, symmetric about pi/4, increasing on (0, pi/4)",
                       period <= 1e-8 && symmetry <= 1e-8 && monotone,
                       "period dev " + fmt(period) + ", symmetry dev " + fmt(symmetry) +
                           (monotone ? ", monotone" : ", NOT monotone")});
  }
  {  // finite-volume sum vs integral
    const int n = 128;
    const double lambda = 1e-6;
    const double fn = free_energy_fn(kPi / 4, lambda, 1.0, n);
    const double f = free_energy_f(kPi / 4, 1.0);
    const double ratio = fn / f;
    results.push_back({"F_N(pi/4, lambda) -> F(pi/4) at N = 128", std::abs(fn - f) <= 1e-2,
                       "F_N " + fmt(fn) + ", F " + fmt(f) + ", ratio " + fmt(ratio)});
  }
  {  // Gaussian approximation at desk scale
    const double delta = default_delta(p.delta, p.beta);
    const ConstrainedEnsemble e{kPi / 4, delta, p.n, p.beta};
    const LogZEstimate z = constrained_log_z(e, sample_count(p.samples), p.seed, threads);
    const double f = free_energy_f(kPi / 4, p.beta);
    const double gap = std::abs(z.estimate + f);
    results.push_back({"constrained log Z + F(pi/4) within 3 tau (N=" + std::to_string(p.n) +
                           ", beta J=" + fmt(p.beta) + ", Delta=" + fmt(delta) + ")",
                       gap < 3.0 * p.tau && z.std_error < p.tau / 3.0,
                       "|est + F| " + fmt(gap) + ", std err " + fmt(z.std_error) + ", tau " +
                           fmt(p.tau)});
  }
  return results;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plaquette orbital model toolkit: ground states, Monte Carlo, spin-wave free energy"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all hardware threads)")
      ->capture_default_str();

  std::string out_dir;
  std::string manifest;
  std::optional<int> rc;

  SimulateParams sim;
  auto* s = app.add_subcommand("simulate", "run Metropolis or enhanced Monte Carlo chains");
  s->set_config("--config", "", "key=value parameter file (flags override)");
  s->add_option("--n", sim.n, "lattice size N (even, >= 2)")->capture_default_str();
  s->add_option("--beta", sim.beta, "inverse temperature beta (β)")->capture_default_str();
  s->add_option("--j1", sim.j1, "x-edge coupling J1")->capture_default_str();
  s->add_option("--j2", sim.j2, "z-edge coupling J2")->capture_default_str();
  s->add_option("--kind", sim.kind, "sampler: metropolis | enhanced")->capture_default_str();
  s->add_option("--sweeps", sim.sweeps, "measured sweeps")->capture_default_str();
  s->add_option("--thermalization", sim.thermalization, "discarded sweeps")->capture_default_str();
  s->add_option("--measure-every", sim.measure_every, "sweeps between records")->capture_default_str();
  s->add_option("--width", sim.width, "initial proposal width w (rad)")->capture_default_str();
  s->add_option("--tune", sim.tune, "tune w toward 50% acceptance during thermalization")
      ->capture_default_str();
  s->add_option("--flip-fraction", sim.flip_fraction,
                "enhanced: ceil(f N^2/4) plaquette flips per sweep")
      ->capture_default_str();
  s->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  s->add_option("--chains", sim.chains, "independent chains (substreams of the seed)")
      ->capture_default_str();
  s->add_option("--init", sim.init, "initial state: random | x | z | x,y,angle CSV path")
      ->capture_default_str();
  s->add_option("--out", out_dir, "output directory (existing files are never overwritten)");
  s->add_option("--manifest", manifest, "rerun with the parameters of a previous manifest.json");
  s->callback([&] {
    if (!manifest.empty()) sim = params_from_manifest<SimulateParams>(manifest, "simulate");
    rc = cmd_simulate(sim, out_dir, threads, out);
  });

  SpinwaveParams sw;
  auto* w = app.add_subcommand("spinwave", "tabulate the spin-wave free energy F(θ)");
  w->set_config("--config", "", "key=value parameter file (flags override)");
  w->add_option("--theta-min", sw.theta_min, "first tilt angle θ")->capture_default_str();
  w->add_option("--theta-max", sw.theta_max, "last tilt angle θ")->capture_default_str();
  w->add_option("--points", sw.points, "number of θ values")->capture_default_str();
  w->add_option("--beta-j", sw.beta_j, "βJ (enters F as (1/2) log βJ)")->capture_default_str();
  w->add_option("--grid", sw.grid, "quadrature points per axis on the quadrant (even)")
      ->capture_default_str();
  w->add_option("--n", sw.n, "if > 0, add the finite-volume F_N column for this N")
      ->capture_default_str();
  w->add_option("--lambda", sw.lambda, "regulator λ for F_N")->capture_default_str();
  w->add_option("--out", out_dir, "output directory for ftheta.csv (stdout if omitted)");
  w->add_option("--manifest", manifest, "rerun with the parameters of a previous manifest.json");
  w->callback([&] {
    if (!manifest.empty()) sw = params_from_manifest<SpinwaveParams>(manifest, "spinwave");
    rc = cmd_spinwave(sw, out_dir, out);
  });

  OracleParams orc;
  auto* o = app.add_subcommand("oracle", "Monte Carlo estimate of (1/N^2) log Z on tiny tori");
  o->set_config("--config", "", "key=value parameter file (flags override)");
  o->add_option("--theta", orc.theta, "tilt angle θ of the constraint centre")->capture_default_str();
  o->add_option("--delta", orc.delta, "constraint radius Δ in (0, 2]; <= 0 means β^(-5/12)")
      ->capture_default_str();
  o->add_option("--beta-j", orc.beta_j, "βJ for the constrained ensemble")->capture_default_str();
  o->add_option("--n", orc.n, "lattice size N (2 or 4; full mode: 2)")->capture_default_str();
  o->add_option("--samples", orc.samples, "number of samples (e.g. 1e6)")->capture_default_str();
  o->add_option("--seed", orc.seed, "RNG seed")->capture_default_str();
  o->add_flag("--full", orc.full, "unconstrained partition function with --j1 --j2 --beta");
  o->add_option("--j1", orc.j1, "full mode: coupling J1")->capture_default_str();
  o->add_option("--j2", orc.j2, "full mode: coupling J2")->capture_default_str();
  o->add_option("--beta", orc.beta, "full mode: inverse temperature β")->capture_default_str();
  o->add_option("--out", out_dir, "output directory for report.json");
  o->add_option("--manifest", manifest, "rerun with the parameters of a previous manifest.json");
  o->callback([&] {
    if (!manifest.empty()) orc = params_from_manifest<OracleParams>(manifest, "oracle");
    rc = cmd_oracle(orc, out_dir, threads, out);
  });

  VerifyParams ver;
  auto* v = app.add_subcommand("verify", "run the ground-state, symmetry and Gaussian checks");
  v->set_config("--config", "", "key=value parameter file (flags override)");
  v->add_option("--n", ver.n, "lattice size N for the Gaussian-approximation check (2 or 4)")
      ->capture_default_str();
  v->add_option("--beta", ver.beta, "βJ for the Gaussian-approximation check")->capture_default_str();
  v->add_option("--delta", ver.delta, "constraint radius Δ; <= 0 means β^(-5/12)")
      ->capture_default_str();
  v->add_option("--tau", ver.tau, "approximation tolerance τ (pass if within 3τ)")
      ->capture_default_str();
  v->add_option("--samples", ver.samples, "oracle samples (e.g. 1e6)")->capture_default_str();
  v->add_option("--seed", ver.seed, "RNG seed")->capture_default_str();
  v->callback([&] { rc = cmd_verify(ver, threads, out); });

  AnalyzeParams ana;
  auto* a = app.add_subcommand("analyze", "summarize record files (order, Neel, binomial, mixing)");
  a->set_config("--config", "", "key=value parameter file (flags override)");
  a->add_option("--records", ana.records, "records.csv file(s)")->required();
  a->add_option("--compare", ana.compare, "second records file for the mixing comparison");
  a->add_option("--plaquettes", ana.plaquettes, "pure-z plaquette count (0 = infer)")
      ->capture_default_str();
  a->add_option("--out", out_dir, "output directory for report.json and nup_hist.csv");
  a->callback([&] { rc = cmd_analyze(ana, out_dir, out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return rc.value_or(0);
}

}  // namespace pom::cli
