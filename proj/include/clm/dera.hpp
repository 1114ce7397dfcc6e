#pragma once

// DER_A aggregate distributed-energy-resource model.
//
// Ten first-order states:
//   v_filt   (S0) filtered terminal voltage
//   p_filt   (S1) filtered power order
//   q_ctrl   (S2) reactive control lag
//   iq       (S3) q-axis current command, filtered
//   v_trip   (S4) voltage-trip multiplier in [0, 1]
//   f_filt   (S5) filtered frequency
//   p_pi     (S6) active-power PI output
//   p_ord_rl (S7) rate-limited power order
//   p_ord    (S8) filtered power order
//   ip       (S9) d-axis current command, filtered
//
// Output powers are P = Vt*ip and Q = Vt*iq (injection positive). Both are
// forced to zero once the frequency trip latches. Xe is carried for
// completeness but no network interface uses it.
//
// Voltage deadband: dbd1 is the lower knot and dbd2 the upper knot, the same
// form as the frequency deadband. Read verbatim, the voltage deadband
// formula swaps its branch conditions relative to the declared signs
// (dbd1 <= 0 <= dbd2); the consistent form is used instead.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "clm/blocks.hpp"
#include "clm/error.hpp"

namespace clm::dera {

using blocks::DeadbandLimits;
using blocks::SatLimits;

struct DerAParams {
  double Trv = 0.02;
  double Tp = 0.02;
  double Tiq = 0.02;
  double Vref0 = 0.0;
  double Kqv = 0.0;
  double Tg = 0.02;
  int PfFlag = 0;
  double Imax = 1.0;
  double dbd1 = 0.0;
  double dbd2 = 0.0;
  double Tv = 0.02;
  double Vl0 = 0.44;
  double Vl1 = 0.49;
  double Vh0 = 1.2;
  double Vh1 = 1.15;
  double tvl0 = 0.16;
  double tvl1 = 0.16;
  double tvh0 = 0.16;
  double tvh1 = 0.16;
  double Vrfrac = 0.0;
  double Trf = 0.02;
  double Kpg = 0.0;
  double Kig = 0.0;
  double Ddn = 0.0;
  double Dup = 0.0;
  double femax = 0.0;
  double femin = 0.0;
  double fdbd1 = 0.0;
  double fdbd2 = 0.0;
  int Freqflag = 0;
  double Pmin = 0.0;
  double Pmax = 1.0;
  double Tpord = 0.02;
  double dPmin = -1.0;
  double dPmax = 1.0;
  int Vtripflag = 0;
  double Iql1 = -1.0;
  double Iqh1 = 1.0;
  double Xe = 0.25;
  int Ftripflag = 0;
  int PQflag = 0;
  int typeflag = 0;
  double Vpr = 0.8;
  // Frequency-trip thresholds (pu) and durations (s). These defaults are
  // conventional values, not part of the reference parameter set.
  double fl = 0.94;
  double fh = 1.03;
  double tfl = 0.16;
  double tfh = 0.16;

  void validate(const std::string& where = "dera") const;

  friend bool operator==(const DerAParams&, const DerAParams&) = default;
};

struct DerAState {
  double v_filt = 0.0;
  double p_filt = 0.0;
  double q_ctrl = 0.0;
  double iq = 0.0;
  double v_trip = 0.0;
  double f_filt = 0.0;
  double p_pi = 0.0;
  double p_ord_rl = 0.0;
  double p_ord = 0.0;
  double ip = 0.0;

  static constexpr std::size_t kSize = 10;
  static constexpr std::array<const char*, kSize> kNames = {
      "v_filt", "p_filt", "q_ctrl", "iq", "v_trip", "f_filt", "p_pi", "p_ord_rl", "p_ord", "ip"};

  std::array<double, kSize> to_array() const {
    return {v_filt, p_filt, q_ctrl, iq, v_trip, f_filt, p_pi, p_ord_rl, p_ord, ip};
  }
  static DerAState from_array(const std::array<double, kSize>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8], a[9]};
  }

  friend bool operator==(const DerAState&, const DerAState&) = default;
};

/// History-dependent bookkeeping advanced once per accepted step.
struct DerATrackers {
  double vmin_seen = 1.0;
  double vmax_seen = 1.0;
  double low_v_timer = 0.0;   // time spent below Vl1 (s)
  double high_v_timer = 0.0;  // time spent above Vh1 (s)
  bool low_v_expired = false;
  bool high_v_expired = false;
  double freq_low_timer = 0.0;
  double freq_high_timer = 0.0;
  bool tripped = false;

  friend bool operator==(const DerATrackers&, const DerATrackers&) = default;
};

struct DerARefs {
  double Pref = 0.0;
  double Qref = 0.0;
  double pfaref = 0.0;  // rad
  double Freqref = 1.0;

  friend bool operator==(const DerARefs&, const DerARefs&) = default;
};

/// Slack applied when an accumulated timer is compared with a duration.
inline constexpr double kTimerSlack = 1e-9;

inline void DerAParams::validate(const std::string& where) const {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::ConfigValue, where + ": " + what);
  };
  for (double v : {Trv, Tp, Tiq, Vref0, Kqv, Tg, Imax, dbd1, dbd2, Tv, Vl0, Vl1, Vh0, Vh1, tvl0,
                   tvl1, tvh0, tvh1, Vrfrac, Trf, Kpg, Kig, Ddn, Dup, femax, femin, fdbd1, fdbd2,
                   Pmin, Pmax, Tpord, dPmin, dPmax, Iql1, Iqh1, Xe, Vpr, fl, fh, tfl, tfh}) {
    if (!std::isfinite(v)) fail("non-finite parameter");
  }
  for (double tau : {Trv, Tp, Tiq, Tg, Tv, Tpord}) {
    if (!(tau > 0.0)) fail("time constants must be > 0");
  }
  if (!(Trf >= 0.02)) fail("Trf must be >= 0.02 s");
  if (!(Vl0 < Vl1 && Vl1 < Vh1 && Vh1 < Vh0)) fail("requires Vl0 < Vl1 < Vh1 < Vh0");
  if (!(dbd1 <= 0.0 && 0.0 <= dbd2)) fail("requires dbd1 <= 0 <= dbd2");
  if (!(fdbd1 <= 0.0 && 0.0 <= fdbd2)) fail("requires fdbd1 <= 0 <= fdbd2");
  if (!(femin <= femax)) fail("requires femin <= femax");
  if (!(Iql1 <= Iqh1)) fail("requires Iql1 <= Iqh1");
  if (!(0.0 <= Vrfrac && Vrfrac <= 1.0)) fail("requires 0 <= Vrfrac <= 1");
  if (!(Pmin <= Pmax)) fail("requires Pmin <= Pmax");
  if (!(dPmin < 0.0 && 0.0 < dPmax)) fail("requires dPmin < 0 < dPmax");
  if (!(Imax > 0.0)) fail("requires Imax > 0");
  if (!(tfl >= 0.0 && tfh >= 0.0 && fl < fh)) fail("requires fl < fh and nonnegative trip times");
  const std::array<std::pair<const char*, int>, 6> flags = {{{"PfFlag", PfFlag},
                                                             {"Freqflag", Freqflag},
                                                             {"Vtripflag", Vtripflag},
                                                             {"Ftripflag", Ftripflag},
                                                             {"PQflag", PQflag},
                                                             {"typeflag", typeflag}}};
  for (const auto& [name, value] : flags) {
    if (value != 0 && value != 1) fail(std::string(name) + " must be 0 or 1");
  }
}

// ---------------------------------------------------------------------------
// Current limits

struct CurrentLimits {
  SatLimits ip;
  SatLimits iq;
};

/// sqrt(Imax^2 - c^2), clamped to 0 once the companion current exceeds Imax.
inline double current_headroom(double imax, double companion) {
  const double r = imax * imax - companion * companion;
  return r > 0.0 ? std::sqrt(r) : 0.0;
}

/// Q priority (PQflag = 0): Iq gets +/-Imax, Ip gets the remaining headroom.
/// P priority (PQflag = 1): the roles swap. The lower limit of the
/// non-priority axis mirrors the upper one only for storage (typeflag = 1).
inline CurrentLimits current_limits(double ipcmd, double iqcmd, const DerAParams& p) {
  CurrentLimits lim;
  if (p.PQflag == 0) {
    lim.iq = SatLimits::symmetric(p.Imax);
    const double ipmax = current_headroom(p.Imax, iqcmd);
    lim.ip = {p.typeflag == 1 ? -ipmax : 0.0, ipmax};
  } else {
    lim.ip = SatLimits::symmetric(p.Imax);
    const double iqmax = current_headroom(p.Imax, ipcmd);
    lim.iq = {p.typeflag == 1 ? -iqmax : 0.0, iqmax};
  }
  return lim;
}

// ---------------------------------------------------------------------------
// Voltage protection

enum class ProtectionBranch {
  LowRampAtMin = 1,
  LowRamp = 2,
  Normal = 3,
  HighRamp = 4,
  LowRecovering = 5,
  LowRecovered = 6,
  HighRecovering = 7,
  HighRampAboveMax = 8,
  Off = 9,
};

struct ProtectionResult {
  double value = 0.0;
  ProtectionBranch branch = ProtectionBranch::Off;
};

/// Nine-branch voltage-trip characteristic evaluated at voltage v. Branches
/// are tested in their defining order and the first match wins. Branches that
/// apply after a dwell use the latched expiry flags in `t`: the low-voltage
/// flag for the low and normal bands, the high-voltage flag for the high band.
/// The two "at the running extreme" ramps only apply inside their ramp bands
/// (v <= Vl1, v >= Vh1); otherwise they would fire in steady state, where the
/// running extremes equal the present voltage.
/// Outside [Vl0, Vh0] the result is 0 regardless of history. The running
/// minimum is clipped to [Vl0, Vl1] and the maximum to [Vh1, Vh0], which keeps
/// every branch inside [0, 1].
inline ProtectionResult evaluate_voltage_protection(double v, const DerATrackers& t,
                                                    const DerAParams& p) {
  const double vmin = std::clamp(t.vmin_seen, p.Vl0, p.Vl1);
  const double vmax = std::clamp(t.vmax_seen, p.Vh1, p.Vh0);
  const double low_span = p.Vl1 - p.Vl0;
  const double high_span = p.Vh0 - p.Vh1;
  using B = ProtectionBranch;

  if (v < p.Vl0 || v > p.Vh0) return {0.0, B::Off};

  if (p.Vl0 <= v && v <= vmin && v <= p.Vl1) return {(v - p.Vl0) / low_span, B::LowRampAtMin};
  if (vmin <= v && v <= p.Vl1 && !t.low_v_expired) return {(v - p.Vl0) / low_span, B::LowRamp};
  if (p.Vl1 < v && v < p.Vh1 && !t.low_v_expired) return {1.0, B::Normal};
  if (p.Vh1 <= v && v <= p.Vh0 && !t.high_v_expired) return {(p.Vh0 - v) / high_span, B::HighRamp};
  if (vmin <= v && v <= p.Vl1 && t.low_v_expired) {
    return {p.Vrfrac * (v - vmin) / low_span, B::LowRecovering};
  }
  if (p.Vl1 < v && v < p.Vh1 && t.low_v_expired) {
    return {p.Vrfrac * (p.Vl1 - vmin) / low_span, B::LowRecovered};
  }
  if (p.Vh1 <= v && v <= vmax && t.high_v_expired) {
    return {p.Vrfrac * (vmax - v) / high_span, B::HighRecovering};
  }
  if (vmax <= v && v <= p.Vh0 && v >= p.Vh1) {
    return {(p.Vh0 - v) / high_span, B::HighRampAboveMax};
  }
  return {0.0, B::Off};
}

inline double voltage_protection(double v, const DerATrackers& t, const DerAParams& p) {
  return evaluate_voltage_protection(v, t, p).value;
}

/// Advances the running voltage extremes and the low/high dwell timers with
/// the end-of-step terminal voltage. A timer restarts when the voltage
/// returns inside the band unless it has already expired; expiry latches.
inline DerATrackers update_voltage_trackers(double vt, DerATrackers t, const DerAParams& p,
                                            double dt) {
  t.vmin_seen = std::min(t.vmin_seen, vt);
  t.vmax_seen = std::max(t.vmax_seen, vt);

  if (!t.low_v_expired) {
    t.low_v_timer = vt < p.Vl1 ? t.low_v_timer + dt : 0.0;
    if (t.low_v_timer + kTimerSlack >= p.tvl1 && t.low_v_timer > 0.0) t.low_v_expired = true;
  }
  if (!t.high_v_expired) {
    t.high_v_timer = vt > p.Vh1 ? t.high_v_timer + dt : 0.0;
    if (t.high_v_timer + kTimerSlack >= p.tvh1 && t.high_v_timer > 0.0) t.high_v_expired = true;
  }
  return t;
}

/// Frequency-trip supervision. Timers run while the frequency stays outside
/// [fl, fh], are frozen while Vt < Vpr, and restart once the frequency is
/// back inside. The trip latches when a timer reaches its duration.
inline DerATrackers frequency_trip(double freq, double vt, DerATrackers t, const DerAParams& p,
                                   double dt) {
  if (p.Ftripflag == 0 || t.tripped) return t;
  if (vt < p.Vpr) return t;

  t.freq_low_timer = freq < p.fl ? t.freq_low_timer + dt : 0.0;
  t.freq_high_timer = freq > p.fh ? t.freq_high_timer + dt : 0.0;
  if ((t.freq_low_timer > 0.0 && t.freq_low_timer + kTimerSlack >= p.tfl) ||
      (t.freq_high_timer > 0.0 && t.freq_high_timer + kTimerSlack >= p.tfh)) {
    t.tripped = true;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Dynamics

/// Intermediate signals of one derivative evaluation; used for diagnostics.
struct DerAAux {
  double iq_raw = 0.0;    // input to the q-axis current limiter
  double iq_cmd = 0.0;    // limited q-axis command (before the trip multiplier)
  double ip_raw = 0.0;
  double ip_cmd = 0.0;
  CurrentLimits limits;
  double v_protect = 1.0;
  double p_order_limited = 0.0;  // power-order clamp applied to p_pi
  bool rate_limited = false;
};

namespace detail {

inline constexpr SatLimits kVoltageFloor = SatLimits::floor(0.01);

inline void require_finite(const DerAState& s, double vt, double freq, const char* where) {
  for (double v : s.to_array()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, std::string(where) + ": non-finite state");
  }
  if (!std::isfinite(vt) || !std::isfinite(freq)) {
    throw Error(ErrorCode::NonFiniteInput, std::string(where) + ": non-finite input");
  }
}

inline double droop_gain_term(double gain, double x, const DerAParams& p, bool want_nonneg) {
  const bool outside = x < p.fdbd1 || x > p.fdbd2;
  const double side = gain / p.Trf * x;
  const bool side_ok = want_nonneg ? side >= 0.0 : side < 0.0;
  return (outside && side_ok) ? -(p.Kpg * gain / p.Trf) * x : 0.0;
}

}  // namespace detail

/// Full derivative evaluation. `rate_tau` is the time constant of the
/// rate-limited power-order tracker; the integrator passes its step size.
inline DerAState dera_derivatives(const DerAState& s, const DerATrackers& trackers, double vt,
                                  double freq, const DerAParams& p, const DerARefs& refs,
                                  double rate_tau, DerAAux* aux = nullptr) {
  using blocks::deadband;
  using blocks::neg_part;
  using blocks::pos_part;
  using blocks::saturate;
  detail::require_finite(s, vt, freq, "dera_derivatives");

  const double v_meas = saturate(s.v_filt, detail::kVoltageFloor);
  DerAState d;

  d.v_filt = (vt - s.v_filt) / p.Trv;
  d.p_filt = (s.p_ord - s.p_filt) / p.Tp;

  const double q_target = p.PfFlag == 0 ? refs.Qref / v_meas
                                        : std::tan(refs.pfaref) * s.p_filt / v_meas;
  d.q_ctrl = -s.q_ctrl / p.Tiq + q_target / p.Tiq;

  // Current commands, priority axis first.
  const double support =
      saturate(deadband(p.Vref0 - s.v_filt, DeadbandLimits{p.dbd1, p.dbd2}) * p.Kqv,
               SatLimits{p.Iql1, p.Iqh1});
  const double iq_raw = s.q_ctrl + support;
  const SatLimits p_limits{p.Pmin, p.Pmax};
  const double ip_raw = saturate(s.p_ord, p_limits) / v_meas;

  const CurrentLimits base = current_limits(0.0, 0.0, p);
  double iq_cmd = 0.0;
  double ip_cmd = 0.0;
  CurrentLimits lim;
  if (p.PQflag == 0) {
    iq_cmd = saturate(iq_raw, base.iq);
    lim = current_limits(0.0, iq_cmd, p);
    ip_cmd = saturate(ip_raw, lim.ip);
  } else {
    ip_cmd = saturate(ip_raw, base.ip);
    lim = current_limits(ip_cmd, 0.0, p);
    iq_cmd = saturate(iq_raw, lim.iq);
  }

  const ProtectionResult vp = evaluate_voltage_protection(s.v_filt, trackers, p);
  const double trip_gain = p.Vtripflag == 1 ? s.v_trip : 1.0;

  d.iq = -(s.iq - iq_cmd * trip_gain) / p.Tg;
  d.v_trip = (vp.value - s.v_trip) / p.Tv;
  d.f_filt = (freq - s.f_filt) / p.Trf;

  const double f_err = deadband(refs.Freqref - s.f_filt, DeadbandLimits{p.fdbd1, p.fdbd2});
  const double pi_input = refs.Pref - s.p_filt + neg_part(p.Ddn * f_err) + pos_part(p.Dup * f_err);
  const double f_dev = freq - s.f_filt;
  d.p_pi = p.Kig * saturate(pi_input, SatLimits{p.femin, p.femax}) + p.Kpg / p.Tp * s.p_filt +
           detail::droop_gain_term(p.Ddn, f_dev, p, true) +
           detail::droop_gain_term(p.Dup, f_dev, p, false) - s.p_ord / p.Tp;

  const double p_clamped = saturate(s.p_pi, p_limits);
  bool rate_limited = false;
  if (p.Freqflag == 0) {
    d.p_ord_rl = 0.0;
  } else {
    const double candidate = (p_clamped - s.p_ord_rl) / rate_tau;
    d.p_ord_rl = blocks::rate_limit(candidate, SatLimits{p.dPmin, p.dPmax});
    rate_limited = d.p_ord_rl != candidate;
  }

  d.p_ord = (s.p_ord_rl - s.p_ord) / p.Tpord;
  d.ip = (ip_cmd * trip_gain - s.ip) / p.Tg;

  if (aux) {
    *aux = DerAAux{iq_raw, iq_cmd, ip_raw, ip_cmd, lim, vp.value, p_clamped, rate_limited};
  }
  return d;
}

struct DerAOutputs {
  double P = 0.0;
  double Q = 0.0;
};

inline DerAOutputs dera_outputs(const DerAState& s, double vt, const DerATrackers& trackers = {}) {
  if (trackers.tripped) return {0.0, 0.0};
  return {vt * s.ip, vt * s.iq};
}

struct DerAEquilibrium {
  DerAState state;
  DerARefs refs;
  DerATrackers trackers;
};

/// Builds the steady state that injects (Pgen0, Qgen0) at (Vt0, Freq0).
/// Throws InfeasibleInit when the operating point violates a current,
/// power-order or frequency-error limit.
inline DerAEquilibrium dera_initialize(double Pgen0, double Qgen0, double Vt0, double Freq0,
                                       const DerAParams& p) {
  using blocks::deadband;
  using blocks::saturate;
  p.validate();
  for (double v : {Pgen0, Qgen0, Vt0, Freq0}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "dera_initialize: non-finite input");
  }
  auto infeasible = [](const std::string& what) {
    throw Error(ErrorCode::InfeasibleInit, "dera_initialize: " + what);
  };
  if (!(Vt0 > 0.01)) infeasible("Vt0 must exceed 0.01 pu");

  DerAEquilibrium eq;
  DerATrackers& t = eq.trackers;
  t.vmin_seen = Vt0;
  t.vmax_seen = Vt0;

  DerAState& s = eq.state;
  s.v_filt = Vt0;
  s.f_filt = Freq0;
  s.v_trip = voltage_protection(Vt0, t, p);
  const double trip_gain = p.Vtripflag == 1 ? s.v_trip : 1.0;

  const double ip = Pgen0 / Vt0;
  const double iq = Qgen0 / Vt0;
  s.ip = ip;
  s.iq = iq;
  if ((ip != 0.0 || iq != 0.0) && trip_gain <= 0.0) infeasible("voltage protection blocks output at Vt0");

  const double ip_cmd = trip_gain > 0.0 ? ip / trip_gain : 0.0;
  const double iq_cmd = trip_gain > 0.0 ? iq / trip_gain : 0.0;
  if (std::hypot(ip_cmd, iq_cmd) > p.Imax * (1.0 + 1e-12)) infeasible("commanded current exceeds Imax");
  const CurrentLimits lim = current_limits(ip_cmd, iq_cmd, p);
  if (!lim.ip.contains(ip_cmd)) infeasible("active current outside its limits");
  if (!lim.iq.contains(iq_cmd)) infeasible("reactive current outside its limits");

  const double p_order = ip_cmd * Vt0;
  if (!(SatLimits{p.Pmin, p.Pmax}.contains(p_order))) infeasible("power order outside [Pmin, Pmax]");
  s.p_ord = p_order;
  s.p_ord_rl = p_order;
  s.p_filt = p_order;
  s.p_pi = p_order;

  const double support =
      saturate(deadband(p.Vref0 - Vt0, DeadbandLimits{p.dbd1, p.dbd2}) * p.Kqv,
               SatLimits{p.Iql1, p.Iqh1});
  s.q_ctrl = iq_cmd - support;

  DerARefs& r = eq.refs;
  r.Freqref = Freq0;
  r.Qref = s.q_ctrl * Vt0;
  if (p.PfFlag == 1) {
    if (s.p_filt == 0.0) {
      if (s.q_ctrl != 0.0) infeasible("constant power factor control needs nonzero active power");
      r.pfaref = 0.0;
    } else {
      r.pfaref = std::atan(s.q_ctrl * Vt0 / s.p_filt);
    }
  }

  // p_pi' = 0 with no frequency deviation fixes the active-power reference.
  const double needed = (s.p_ord - p.Kpg * s.p_filt) / p.Tp;
  if (p.Kig == 0.0) {
    if (needed != 0.0) infeasible("Kig = 0 admits no equilibrium at this power order");
    r.Pref = s.p_filt;
  } else {
    const double err = needed / p.Kig;
    if (!(SatLimits{p.femin, p.femax}.contains(err))) infeasible("frequency-control error limit reached");
    r.Pref = s.p_filt + err;
  }
  return eq;
}

}  // namespace clm::dera
