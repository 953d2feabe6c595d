#include "pom/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "pom/summation.hpp"

namespace pom {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;  // FFTW planning is not thread-safe
  return m;
}

// Biased autocovariances C(t) = (1/n) sum_i d_i d_{i+t}, t = 0..n-1, of the
// mean-subtracted series, via a zero-padded real FFT.
std::vector<double> autocovariance(std::span<const double> series) {
  const std::size_t n = series.size();
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  const std::size_t m = 2 * n;
  std::vector<double> buffer(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) buffer[i] = series[i] - mean;
  std::vector<fftw_complex> spectrum(m / 2 + 1);
  fftw_plan forward;
  fftw_plan backward;
  {
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), buffer.data(), spectrum.data(),
                                   FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(m), spectrum.data(), buffer.data(),
                                    FFTW_ESTIMATE);
  }
  fftw_execute(forward);
  for (auto& c : spectrum) {
    c[0] = c[0] * c[0] + c[1] * c[1];
    c[1] = 0.0;
  }
  fftw_execute(backward);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  std::vector<double> cov(n);
  const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(n));
  for (std::size_t t = 0; t < n; ++t) cov[t] = buffer[t] * scale;
  return cov;
}

const std::map<std::string, std::function<double(const ObservableRecord&)>>& accessors() {
  static const std::map<std::string, std::function<double(const ObservableRecord&)>> table = {
      {"sweep", [](const ObservableRecord& r) { return static_cast<double>(r.sweep); }},
      {"q_x", [](const ObservableRecord& r) { return r.q_x; }},
      {"q_z", [](const ObservableRecord& r) { return r.q_z; }},
      {"q_max", [](const ObservableRecord& r) { return std::max(r.q_x, r.q_z); }},
      {"m_x", [](const ObservableRecord& r) { return r.m_x; }},
      {"m_z", [](const ObservableRecord& r) { return r.m_z; }},
      {"e_pure_x", [](const ObservableRecord& r) { return r.e_pure_x; }},
      {"e_pure_z", [](const ObservableRecord& r) { return r.e_pure_z; }},
      {"e_mixed", [](const ObservableRecord& r) { return r.e_mixed; }},
      {"staggered", [](const ObservableRecord& r) { return r.staggered; }},
      {"n_up", [](const ObservableRecord& r) { return static_cast<double>(r.n_up); }},
      {"en_pure_x", [](const ObservableRecord& r) { return r.en_pure_x; }},
      {"en_pure_z", [](const ObservableRecord& r) { return r.en_pure_z; }},
      {"en_mixed", [](const ObservableRecord& r) { return r.en_mixed; }},
      {"energy", [](const ObservableRecord& r) { return r.energy; }},
  };
  return table;
}

// Estimates from series shorter than this many tau are only lower bounds.
constexpr double kMinLengthPerTau = 50.0;

}  // namespace

AutocorrelationTime autocorrelation_time(std::span<const double> series, double c) {
  if (series.size() < 100) {
    throw std::domain_error("autocorrelation time needs at least 100 points, got " +
                            std::to_string(series.size()));
  }
  const int n = static_cast<int>(series.size());
  AutocorrelationTime out;
  if (std::all_of(series.begin(), series.end(), [&](double v) { return v == series[0]; })) {
    out.tau_int = n;
    out.window = 0;
    out.lower_bound = true;
    out.degenerate = true;
    return out;
  }
  const std::vector<double> cov = autocovariance(series);
  double tau = 0.5;
  double best = tau;
  // Over all lags the biased autocorrelations sum to -1/2, so an unbounded
  // scan always terminates; stop at n/2 instead.
  for (int w = 1; w <= n / 2; ++w) {
    tau += cov[w] / cov[0];
    best = std::max(best, tau);
    if (w >= c * tau) {
      out.tau_int = std::max(tau, 0.5);
      out.window = w;
      out.lower_bound = n < kMinLengthPerTau * out.tau_int;
      return out;
    }
  }
  out.tau_int = best;
  out.window = n / 2;
  out.lower_bound = true;
  return out;
}

MeanError blocking_mean(std::span<const double> series) {
  MeanError out;
  if (series.empty()) return out;
  std::vector<double> blocks(series.begin(), series.end());
  CompensatedSum total;
  for (double v : blocks) total += v;
  out.mean = total.value() / static_cast<double>(blocks.size());
  while (blocks.size() >= 32) {
    const double nb = static_cast<double>(blocks.size());
    double var = 0.0;
    for (double v : blocks) var += (v - out.mean) * (v - out.mean);
    var /= nb - 1.0;
    out.error = std::max(out.error, std::sqrt(var / nb));
    ++out.levels;
    std::vector<double> next(blocks.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = 0.5 * (blocks[2 * i] + blocks[2 * i + 1]);
    blocks = std::move(next);
  }
  return out;
}

std::vector<double> column(const std::vector<ObservableRecord>& records, const std::string& name) {
  const auto it = accessors().find(name);
  if (it == accessors().end()) throw std::invalid_argument("unknown observable '" + name + "'");
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(it->second(r));
  return out;
}

void check_records(const std::vector<ObservableRecord>& records) {
  for (const auto& r : records) {
    if (std::abs(r.q_x + r.q_z - 1.0) > 1e-12) {
      throw std::domain_error("record at sweep " + std::to_string(r.sweep) +
                              " violates q_x + q_z = 1");
    }
  }
}

NeelReport neel_report(const std::vector<ObservableRecord>& records) {
  NeelReport rep;
  auto summary = [&](const char* name) { return blocking_mean(column(records, name)); };
  rep.e_pure_x = summary("e_pure_x");
  rep.e_pure_z = summary("e_pure_z");
  rep.e_mixed = summary("e_mixed");
  rep.en_pure_x = summary("en_pure_x");
  rep.en_pure_z = summary("en_pure_z");
  rep.en_mixed = summary("en_mixed");
  rep.staggered = summary("staggered");

  const std::array<double, 3> e = {rep.e_pure_x.mean, rep.e_pure_z.mean, rep.e_mixed.mean};
  const std::array<MeanError, 3> en = {rep.en_pure_x, rep.en_pure_z, rep.en_mixed};
  rep.e_separation = *std::max_element(e.begin(), e.end()) - *std::min_element(e.begin(), e.end());
  double en_lo = en[0].mean;
  double en_hi = en[0].mean;
  for (const auto& m : en) {
    en_lo = std::min(en_lo, m.mean);
    en_hi = std::max(en_hi, m.mean);
  }
  rep.en_separation = en_hi - en_lo;
  rep.en_max = en_hi;

  std::array<double, 3> targets = {-4.0, -2.0, 0.0};
  rep.e_target_deviation = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(e[i] - targets[i]));
    rep.e_target_deviation = std::min(rep.e_target_deviation, worst);
  } while (std::next_permutation(targets.begin(), targets.end()));

  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double err = std::hypot(en[i].error, en[j].error);
      const double diff = std::abs(en[i].mean - en[j].mean);
      const double sigma = err > 0.0 ? diff / err : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      rep.en_separation_sigma = std::max(rep.en_separation_sigma, sigma);
    }
  }
  return rep;
}

double binomial_half_pmf(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::ldexp(boost::math::binomial_coefficient<double>(n, k), -n);
}

BinomialTest binomial_symmetry_test(const std::vector<ObservableRecord>& records,
                                    int plaquette_count) {
  BinomialTest out;
  out.histogram.assign(plaquette_count + 1, 0);
  const std::vector<double> series = column(records, "n_up");
  if (series.size() < 100) {
    out.inconclusive = true;
    return out;
  }
  const AutocorrelationTime tau = autocorrelation_time(series);
  out.tau_int = tau.tau_int;
  out.tau_lower_bound = tau.lower_bound;
  const int len = static_cast<int>(series.size());
  int stride = std::max(1, static_cast<int>(std::ceil(2.0 * tau.tau_int)));
  if (stride > len / 20) {
    stride = std::max(1, len / 20);
    out.stride_capped = true;
  }
  out.stride = stride;
  for (int i = 0; i < len; i += stride) {
    const int k = static_cast<int>(series[i]);
    if (k < 0 || k > plaquette_count) throw std::domain_error("n_up outside [0, plaquette count]");
    ++out.histogram[k];
    ++out.samples;
  }

  // Merge adjacent bins left to right until each expected count reaches 5;
  // a short remainder joins the last bin.
  std::vector<double> observed;
  std::vector<double> expected;
  double obs_acc = 0.0;
  double exp_acc = 0.0;
  for (int k = 0; k <= plaquette_count; ++k) {
    obs_acc += out.histogram[k];
    exp_acc += out.samples * binomial_half_pmf(plaquette_count, k);
    if (exp_acc >= 5.0) {
      observed.push_back(obs_acc);
      expected.push_back(exp_acc);
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0 || obs_acc > 0.0) {
    if (expected.empty()) {
      observed.push_back(obs_acc);
      expected.push_back(exp_acc);
    } else {
      observed.back() += obs_acc;
      expected.back() += exp_acc;
    }
  }
  out.dof = static_cast<int>(expected.size()) - 1;
  if (out.dof < 1 || out.samples < 20) {
    out.inconclusive = true;
    return out;
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    out.chi2 += d * d / expected[i];
  }
  const boost::math::chi_squared dist(out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.chi2));
  return out;
}

CorrelationAccumulator::CorrelationAccumulator(const TorusLattice& lattice) : lattice_(&lattice) {
  for (int d = 2; d <= lattice.size() / 2; d += 2) distances_.push_back(d);
  pair_sums_.assign(distances_.size(), 0.0);
}

void CorrelationAccumulator::add(const SpinConfig& config) {
  const int n = lattice_->size();
  if (config.size() != lattice_->site_count()) {
    throw std::invalid_argument("configuration does not match lattice");
  }
  std::vector<double> q(config.size());
  double mean = 0.0;
  for (int i = 0; i < config.size(); ++i) {
    q[i] = config.sx(i) * config.sx(i);
    mean += q[i];
  }
  q_sum_ += mean / config.size();
  for (std::size_t k = 0; k < distances_.size(); ++k) {
    const int d = distances_[k];
    double acc = 0.0;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const double v = q[y * n + x];
        acc += v * q[y * n + (x + d) % n];
        acc += v * q[((y + d) % n) * n + x];
      }
    }
    pair_sums_[k] += acc / (2.0 * config.size());
  }
  ++samples_;
}

std::vector<int> CorrelationAccumulator::distances() const { return distances_; }

std::vector<double> CorrelationAccumulator::truncated() const {
  std::vector<double> out(distances_.size(), 0.0);
  if (samples_ == 0) return out;
  const double s = static_cast<double>(samples_);
  const double q = q_sum_ / s;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = pair_sums_[k] / s - q * q;
  return out;
}

CorrelationFit correlation_decay(const std::vector<int>& distances,
                                 const std::vector<double>& correlations, double noise_floor) {
  CorrelationFit fit;
  if (distances.size() != correlations.size()) {
    throw std::invalid_argument("distances and correlations differ in length");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (!(correlations[i] > noise_floor) || !(correlations[i] > 0.0)) break;
    xs.push_back(distances[i]);
    ys.push_back(std::log(correlations[i]));
  }
  if (xs.size() < 2) {
    fit.flag = "fewer than two positive correlations above the noise floor";
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) {
    fit.flag = "correlations do not decay";
    return fit;
  }
  fit.xi = -1.0 / slope;
  fit.amplitude = std::exp(my - slope * mx);
  fit.fit_quality = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.fitted = true;
  return fit;
}

ObservableMixing mixing(const std::vector<ObservableRecord>& records,
                        const std::string& observable) {
  ObservableMixing out;
  out.observable = observable;
  const std::vector<double> series = column(records, observable);
  out.tau = autocorrelation_time(series);
  out.effective_samples = static_cast<double>(series.size()) / (2.0 * out.tau.tau_int);
  return out;
}

MixingReport mixing_report(const std::vector<ObservableRecord>& enhanced,
                           const std::vector<ObservableRecord>& metropolis,
                           const std::vector<std::string>& observables) {
  MixingReport rep;
  for (const auto& name : observables) {
    rep.enhanced.push_back(mixing(enhanced, name));
    rep.metropolis.push_back(mixing(metropolis, name));
    rep.ratio.push_back(rep.enhanced.back().tau.tau_int / rep.metropolis.back().tau.tau_int);
  }
  return rep;
}

}  // namespace pom
