#pragma once

// Terminal voltage and frequency seen by every load component.

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "clm/error.hpp"

namespace clm {

/// Scripted voltage dip: fault level a for b cycles (60 Hz) starting at
/// t = 1 s, then a recovery segment ending at t = 1 + c.
struct PlaybackParams {
  double a = 0.8;
  double b = 5.0;
  double c = 1.0;
  double d = 0.9;

  void validate(const std::string& where = "disturbance") const {
    auto fail = [&](const char* what) { throw Error(ErrorCode::ConfigValue, where + ": " + what); };
    if (!(0.0 < a && a < 1.0)) fail("requires 0 < a < 1");
    if (!(b > 0.0)) fail("requires b > 0");
    if (!(c > b / 60.0)) fail("requires c > b/60");
    if (!(0.0 < d && d <= 1.0)) fail("requires 0 < d <= 1");
  }

  friend bool operator==(const PlaybackParams&, const PlaybackParams&) = default;
};

enum class PlaybackShape {
  /// The three-branch reference formula. With a=0.8, b=5, c=1, d=0.9 its
  /// recovery branch starts at 1.1 pu (not at a) and decays to 1 at t = 1 + c.
  Verbatim,
  /// Straight line from a at the end of the fault to 1 at t = 1 + c.
  LinearRamp,
};

inline double playback_voltage(double t, const PlaybackParams& p) {
  const double fault_end = 1.0 + p.b / 60.0;
  if (1.0 <= t && t <= fault_end) return p.a;
  if (fault_end <= t && t <= 1.0 + p.c) {
    return (1.0 - p.d) * (t - p.c - 1.0) / (p.b / 60.0 - p.c) + 1.0;
  }
  return 1.0;
}

inline double playback_voltage_ramp(double t, const PlaybackParams& p) {
  const double fault_end = 1.0 + p.b / 60.0;
  if (1.0 <= t && t <= fault_end) return p.a;
  if (fault_end <= t && t <= 1.0 + p.c) {
    return p.a + (1.0 - p.a) * (t - fault_end) / (1.0 + p.c - fault_end);
  }
  return 1.0;
}

inline double playback_voltage(double t, const PlaybackParams& p, PlaybackShape shape) {
  return shape == PlaybackShape::Verbatim ? playback_voltage(t, p) : playback_voltage_ramp(t, p);
}

/// Sampled (t, V[, F]) series with linear interpolation. Outside the sampled
/// range the end values are held.
struct SampledSeries {
  std::vector<double> t;
  std::vector<double> v;
  std::vector<double> f;  // empty -> nominal frequency

  void validate(const std::string& where = "disturbance") const {
    auto fail = [&](const char* what) { throw Error(ErrorCode::ConfigValue, where + ": " + what); };
    if (t.size() < 2) fail("series needs at least two samples");
    if (v.size() != t.size() || (!f.empty() && f.size() != t.size())) fail("ragged series columns");
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!(t[i] > t[i - 1])) fail("series time must be strictly increasing");
    }
  }

  friend bool operator==(const SampledSeries&, const SampledSeries&) = default;
};

namespace detail {

inline double interp_hold(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace detail

struct ConstantBus {
  double voltage = 1.0;
  double frequency = 1.0;

  friend bool operator==(const ConstantBus&, const ConstantBus&) = default;
};

struct PlaybackBus {
  PlaybackParams params;
  PlaybackShape shape = PlaybackShape::Verbatim;
  double frequency = 1.0;

  friend bool operator==(const PlaybackBus&, const PlaybackBus&) = default;
};

struct SeriesBus {
  SampledSeries series;
  std::string source;  // file the series was read from, if any

  friend bool operator==(const SeriesBus&, const SeriesBus&) = default;
};

/// Voltage magnitude (pu) and frequency (pu) as functions of time. The
/// voltage angle is zero: Vd = |V|, Vq = 0.
class BusSignal {
 public:
  using Source = std::variant<ConstantBus, PlaybackBus, SeriesBus>;

  BusSignal() = default;
  BusSignal(Source source) : source_(std::move(source)) {}  // NOLINT(implicit)
  BusSignal(ConstantBus s) : source_(s) {}                   // NOLINT(implicit)
  BusSignal(PlaybackBus s) : source_(s) {}                   // NOLINT(implicit)
  BusSignal(SeriesBus s) : source_(std::move(s)) {}          // NOLINT(implicit)

  double voltage(double t) const {
    return std::visit(
        [t](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ConstantBus>) {
            return s.voltage;
          } else if constexpr (std::is_same_v<S, PlaybackBus>) {
            return playback_voltage(t, s.params, s.shape);
          } else {
            return detail::interp_hold(s.series.t, s.series.v, t);
          }
        },
        source_);
  }

  double frequency(double t) const {
    return std::visit(
        [t](const auto& s) -> double {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, SeriesBus>) {
            return s.series.f.empty() ? 1.0 : detail::interp_hold(s.series.t, s.series.f, t);
          } else {
            return s.frequency;
          }
        },
        source_);
  }

  /// Times where the signal or its slope may jump, sorted ascending.
  std::vector<double> breakpoints() const {
    return std::visit(
        [](const auto& s) -> std::vector<double> {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, ConstantBus>) {
            return {};
          } else if constexpr (std::is_same_v<S, PlaybackBus>) {
            return {1.0, 1.0 + s.params.b / 60.0, 1.0 + s.params.c};
          } else {
            return s.series.t;
          }
        },
        source_);
  }

  const Source& source() const { return source_; }

  friend bool operator==(const BusSignal&, const BusSignal&) = default;

 private:
  Source source_ = ConstantBus{};
};

}  // namespace clm
