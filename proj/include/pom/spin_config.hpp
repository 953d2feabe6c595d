#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pom {

/// Unit vector (S^x, S^z).
struct Vec2 {
  double x = 0.0;
  double z = 0.0;
};

/**
 * Spin directions as fixed-point phases.
 *
 * A phase is an integer in [0, 2^50) measuring the angle in units of
 * 2*pi / 2^50. Modular integer arithmetic makes the component reflections
 * theta -> pi - theta and theta -> -theta exact involutions, and
 * unit_vector() is evaluated with an octant reduction so that
 * unit_vector(reflect_x(p)) == (-c, s) and unit_vector(reflect_z(p)) == (c, -s)
 * hold bit for bit.
 */
namespace phase {

using Phase = std::uint64_t;

inline constexpr int kBits = 50;
inline constexpr Phase kTurn = Phase{1} << kBits;
inline constexpr Phase kMask = kTurn - 1;
inline constexpr Phase kHalfTurn = kTurn >> 1;
inline constexpr Phase kQuarterTurn = kTurn >> 2;

/// Nearest phase to an angle in radians (any real angle).
[[nodiscard]] Phase from_angle(double radians);
/// Angle in (-pi, pi].
[[nodiscard]] double to_angle(Phase p);
[[nodiscard]] Vec2 unit_vector(Phase p);

[[nodiscard]] constexpr Phase add(Phase p, Phase q) noexcept { return (p + q) & kMask; }
/// theta -> pi - theta (negates S^x).
[[nodiscard]] constexpr Phase reflect_x(Phase p) noexcept { return (kHalfTurn - p) & kMask; }
/// theta -> -theta (negates S^z).
[[nodiscard]] constexpr Phase reflect_z(Phase p) noexcept { return (kTurn - p) & kMask; }
/// Phase increment for a (possibly negative) rotation in radians.
[[nodiscard]] Phase from_rotation(double radians);

}  // namespace phase

/**
 * O(2) spin configuration, one angle per site.
 *
 * Components are cached alongside the phases; every mutation goes through
 * the setters so the cache stays consistent. Equality compares phases.
 */
class SpinConfig {
public:
  explicit SpinConfig(int site_count = 0, double angle = 0.0);

  static SpinConfig from_angles(std::span<const double> angles);

  [[nodiscard]] int size() const noexcept { return static_cast<int>(phases_.size()); }

  [[nodiscard]] double angle(int i) const { return phase::to_angle(phases_[i]); }
  [[nodiscard]] phase::Phase phase(int i) const noexcept { return phases_[i]; }
  [[nodiscard]] double sx(int i) const noexcept { return sx_[i]; }
  [[nodiscard]] double sz(int i) const noexcept { return sz_[i]; }
  [[nodiscard]] Vec2 spin(int i) const noexcept { return {sx_[i], sz_[i]}; }
  [[nodiscard]] std::vector<double> angles() const;

  [[nodiscard]] std::span<const double> sx_values() const noexcept { return sx_; }
  [[nodiscard]] std::span<const double> sz_values() const noexcept { return sz_; }

  void set_angle(int i, double radians) { set_phase(i, phase::from_angle(radians)); }
  void set_phase(int i, phase::Phase p);
  void reflect_x(int i) { set_phase(i, phase::reflect_x(phases_[i])); }
  void reflect_z(int i) { set_phase(i, phase::reflect_z(phases_[i])); }

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) { return a.phases_ == b.phases_; }

private:
  std::vector<phase::Phase> phases_;
  std::vector<double> sx_;
  std::vector<double> sz_;
};

}  // namespace pom
