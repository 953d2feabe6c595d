#include "pom/spin_config.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pom {
namespace phase {

namespace {

// Radians per phase unit is pi / 2^(kBits-1); dividing by a power of two is
// exact, so conversions round only once in each direction.
constexpr double kUnitsPerPi = static_cast<double>(kHalfTurn);
constexpr Phase kEighthTurn = kTurn >> 3;
constexpr Phase kQuadrantMask = kQuarterTurn - 1;

}  // namespace

Phase from_angle(double radians) {
  if (!std::isfinite(radians)) {
    throw std::invalid_argument("spin angle must be finite");
  }
  const double turns = std::remainder(radians, 2.0 * std::numbers::pi) / std::numbers::pi;
  const auto units = static_cast<std::int64_t>(std::llround(turns * kUnitsPerPi));
  return static_cast<Phase>(units) & kMask;
}

Phase from_rotation(double radians) { return from_angle(radians); }

double to_angle(Phase p) {
  p &= kMask;
  const auto signed_units =
      p > kHalfTurn ? static_cast<std::int64_t>(p) - static_cast<std::int64_t>(kTurn)
                    : static_cast<std::int64_t>(p);
  return static_cast<double>(signed_units) * std::numbers::pi / kUnitsPerPi;
}

Vec2 unit_vector(Phase p) {
  p &= kMask;
  const Phase quadrant = p >> (kBits - 2);
  const Phase m = p & kQuadrantMask;

  // (c, s) = (cos, sin) of the in-quadrant angle in [0, pi/2], computed on
  // [0, pi/4] and mirrored so that m and quarter-m give swapped pairs exactly.
  double c = 0.0;
  double s = 0.0;
  if (m == kEighthTurn) {
    c = s = std::numbers::sqrt2 / 2.0;
  } else if (m < kEighthTurn) {
    const double a = static_cast<double>(m) * std::numbers::pi / kUnitsPerPi;
    c = std::cos(a);
    s = std::sin(a);
  } else {
    const double a = static_cast<double>(kQuarterTurn - m) * std::numbers::pi / kUnitsPerPi;
    c = std::sin(a);
    s = std::cos(a);
  }
  switch (quadrant) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

}  // namespace phase

SpinConfig::SpinConfig(int site_count, double angle) {
  if (site_count < 0) throw std::invalid_argument("negative site count");
  const phase::Phase p = phase::from_angle(angle);
  const Vec2 v = phase::unit_vector(p);
  phases_.assign(site_count, p);
  sx_.assign(site_count, v.x);
  sz_.assign(site_count, v.z);
}

SpinConfig SpinConfig::from_angles(std::span<const double> angles) {
  SpinConfig config(static_cast<int>(angles.size()));
  for (int i = 0; i < config.size(); ++i) config.set_angle(i, angles[i]);
  return config;
}

std::vector<double> SpinConfig::angles() const {
  std::vector<double> out(phases_.size());
  for (std::size_t i = 0; i < phases_.size(); ++i) out[i] = phase::to_angle(phases_[i]);
  return out;
}

void SpinConfig::set_phase(int i, phase::Phase p) {
  p &= phase::kMask;
  const Vec2 v = phase::unit_vector(p);
  phases_[i] = p;
  sx_[i] = v.x;
  sz_[i] = v.z;
}

}  // namespace pom
