#pragma once

// Stateless piecewise primitives shared by the load models: saturation,
// deadband, sign split and rate limiting. None of them carry memory.

#include <algorithm>
#include <concepts>
#include <limits>

namespace clm::blocks {

/// Marks an unbounded side of a limiter.
inline constexpr double kNoLimit = std::numeric_limits<double>::infinity();

struct SatLimits {
  double lo = -kNoLimit;
  double hi = kNoLimit;

  static constexpr SatLimits floor(double lo) { return {lo, kNoLimit}; }
  static constexpr SatLimits ceiling(double hi) { return {-kNoLimit, hi}; }
  static constexpr SatLimits symmetric(double mag) { return {-mag, mag}; }

  constexpr bool valid() const { return lo <= hi; }
  constexpr bool contains(double x) const { return lo <= x && x <= hi; }

  friend constexpr bool operator==(const SatLimits&, const SatLimits&) = default;
};

/// Knots of a deadband; lo <= 0 <= hi.
struct DeadbandLimits {
  double lo = 0.0;
  double hi = 0.0;

  constexpr bool valid() const { return lo <= 0.0 && 0.0 <= hi; }
};

template <std::floating_point T>
constexpr T saturate(T x, const SatLimits& lim) {
  return std::min(static_cast<T>(lim.hi), std::max(static_cast<T>(lim.lo), x));
}

/// Zero inside [lo, hi]; offset by the crossed knot outside it.
template <std::floating_point T>
constexpr T deadband(T x, const DeadbandLimits& db) {
  if (x > db.hi) return x - static_cast<T>(db.hi);
  if (x < db.lo) return x - static_cast<T>(db.lo);
  return T{0};
}

/// x for x > 0, else 0.
template <std::floating_point T>
constexpr T pos_part(T x) {
  return x > T{0} ? x : T{0};
}

/// x for x <= 0, else 0.
template <std::floating_point T>
constexpr T neg_part(T x) {
  return x <= T{0} ? x : T{0};
}

/// Clamp a candidate derivative to [ramp-down, ramp-up].
template <std::floating_point T>
constexpr T rate_limit(T candidate_derivative, const SatLimits& lim) {
  return saturate(candidate_derivative, lim);
}

}  // namespace clm::blocks
