#pragma once

// Memoryless load components: ZIP static load and the electronic load with
// low-voltage disconnection and partial recovery.

#include <algorithm>
#include <cmath>
#include <string>

#include "clm/error.hpp"

namespace clm::loads {

struct ZipParams {
  double P0 = 1.0;
  double Q0 = 0.0;
  double V0 = 1.0;
  double ap = 1.0, bp = 0.0, cp = 0.0;
  double aq = 1.0, bq = 0.0, cq = 0.0;

  void validate(const std::string& where = "zip") const {
    auto fail = [&](const char* what) { throw Error(ErrorCode::ConfigValue, where + ": " + what); };
    for (double v : {P0, Q0, V0, ap, bp, cp, aq, bq, cq}) {
      if (!std::isfinite(v)) fail("non-finite parameter");
    }
    if (!(V0 > 0.0)) fail("requires V0 > 0");
    if (std::abs(ap + bp + cp - 1.0) > 1e-12) fail("ap + bp + cp must equal 1");
    if (std::abs(aq + bq + cq - 1.0) > 1e-12) fail("aq + bq + cq must equal 1");
  }

  friend bool operator==(const ZipParams&, const ZipParams&) = default;
};

struct PQ {
  double P = 0.0;
  double Q = 0.0;

  friend bool operator==(const PQ&, const PQ&) = default;
};

inline PQ zip_power(double V, const ZipParams& z) {
  const double r = V / z.V0;
  return {z.P0 * (z.ap * r * r + z.bp * r + z.cp), z.Q0 * (z.aq * r * r + z.bq * r + z.cq)};
}

struct ElecParams {
  double PE0 = 1.0;
  double QE0 = 0.0;
  double Vd1 = 0.7;  // upper threshold
  double Vd2 = 0.5;  // lower threshold
  double alpha = 0.8;  // recovering fraction

  void validate(const std::string& where = "elec") const {
    auto fail = [&](const char* what) { throw Error(ErrorCode::ConfigValue, where + ": " + what); };
    for (double v : {PE0, QE0, Vd1, Vd2, alpha}) {
      if (!std::isfinite(v)) fail("non-finite parameter");
    }
    if (!(Vd1 > Vd2 && Vd2 > 0.0)) fail("requires Vd1 > Vd2 > 0");
    if (!(0.0 <= alpha && alpha <= 1.0)) fail("requires 0 <= alpha <= 1");
  }

  friend bool operator==(const ElecParams&, const ElecParams&) = default;
};

/// Lowest voltage seen so far, never below Vd2.
struct ElecTracker {
  double vmin = 1.0;

  friend bool operator==(const ElecTracker&, const ElecTracker&) = default;
};

inline ElecTracker elec_tracker_init(double V0, const ElecParams& e) {
  return {std::max(e.Vd2, V0)};
}

inline ElecTracker elec_tracker_update(double Vt, ElecTracker t, const ElecParams& e) {
  t.vmin = std::max(e.Vd2, std::min(Vt, t.vmin));
  return t;
}

struct ElecCoefficient {
  double ct = 0.0;
  int mode = 1;
};

/// Connected fraction of the electronic load. Mode numbering:
///   1  Vt < Vd2                       fully disconnected
///   2  Vd2 <= Vt < Vd1, Vt <= Vmin    linear disconnection
///   3  Vd2 <= Vt < Vd1, Vt >  Vmin    partial reconnection inside the band
///   4  Vt >= Vd1, Vmin >= Vd1         fully connected
///   5  Vt >= Vd1, Vmin <  Vd1         recovered fraction after a dip
inline ElecCoefficient elec_coefficient(double Vt, const ElecTracker& t, const ElecParams& e) {
  const double span = e.Vd1 - e.Vd2;
  const double vmin = t.vmin;
  if (Vt < e.Vd2) return {0.0, 1};
  if (Vt < e.Vd1) {
    if (Vt <= vmin) return {(Vt - e.Vd2) / span, 2};
    return {(vmin - e.Vd2 + e.alpha * (Vt - vmin)) / span, 3};
  }
  if (vmin >= e.Vd1) return {1.0, 4};
  return {(vmin - e.Vd2 + e.alpha * (e.Vd1 - vmin)) / span, 5};
}

inline PQ elec_power(double ct, const ElecParams& e) { return {ct * e.PE0, ct * e.QE0}; }

}  // namespace clm::loads
