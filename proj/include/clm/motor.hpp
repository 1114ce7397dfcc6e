#pragma once

// Fifth-order three-phase induction motor (WECC motors A, B and C).
//
// States are the transient and subtransient EMFs on both axes plus rotor
// slip. Stator currents follow I = (V + E'') / (rs + j*Lpp), i.e. the EMF
// enters with a plus sign. Several textbooks write (E'' - V) instead; the
// plus-sign form is kept here because the parameter sets and reference
// trajectories this model is validated against were produced with it. At
// equilibrium E'' therefore sits close to -V.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clm/error.hpp"

namespace clm::motor {

struct MotorParams {
  double rs = 0.0;     // stator resistance (pu)
  double Ls = 0.0;     // synchronous reactance (pu)
  double Lp = 0.0;     // transient reactance (pu)
  double Lpp = 0.0;    // subtransient reactance (pu)
  double Tp0 = 0.0;    // transient rotor time constant (s)
  double Tpp0 = 0.0;   // subtransient rotor time constant (s)
  double H = 0.0;      // inertia constant (s)
  double A = 0.0;      // torque-speed polynomial coefficients
  double B = 0.0;
  double C0 = 0.0;
  double D = 0.0;
  double Etrq = 0.0;   // torque speed exponent
  double p = -1.0;     // power-convention signs
  double q = -1.0;
  double omega0 = 0.0; // synchronous frequency (rad/s)

  /// Throws ConfigValue naming the first violated invariant.
  void validate(const std::string& where = "motor") const {
    auto fail = [&](const char* what) {
      throw Error(ErrorCode::ConfigValue, where + ": " + what);
    };
    for (double v : {rs, Ls, Lp, Lpp, Tp0, Tpp0, H, A, B, C0, D, Etrq, p, q, omega0}) {
      if (!std::isfinite(v)) fail("non-finite parameter");
    }
    if (!(Ls > Lp && Lp > Lpp && Lpp > 0.0)) fail("requires Ls > Lp > Lpp > 0");
    if (!(Tp0 > Tpp0 && Tpp0 > 0.0)) fail("requires Tp0 > Tpp0 > 0");
    if (!(H > 0.0)) fail("requires H > 0");
    if (!(rs >= 0.0)) fail("requires rs >= 0");
  }

  friend bool operator==(const MotorParams&, const MotorParams&) = default;
};

struct MotorState {
  double eqp = 0.0;   // q-axis transient EMF
  double edp = 0.0;   // d-axis transient EMF
  double eqpp = 0.0;  // q-axis subtransient EMF
  double edpp = 0.0;  // d-axis subtransient EMF
  double slip = 0.0;

  static constexpr std::size_t kSize = 5;

  std::array<double, kSize> to_array() const { return {eqp, edp, eqpp, edpp, slip}; }
  static MotorState from_array(const std::array<double, kSize>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
  }

  friend bool operator==(const MotorState&, const MotorState&) = default;
};

struct MotorOutputs {
  double id = 0.0;
  double iq = 0.0;
  double P = 0.0;
  double Q = 0.0;
  double TL = 0.0;  // load torque
  double w = 1.0;   // rotor speed (pu)
  bool speed_clamped = false;  // w <= 0 was clamped before a non-integer power
};

struct MotorInit {
  double Tm0 = 0.0;
};

namespace detail {

inline void require_finite(std::initializer_list<double> values, const char* where) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteInput, std::string(where) + ": non-finite input");
    }
  }
}

inline bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace detail

inline MotorOutputs motor_algebra(const MotorState& s, double Vd, double Vq,
                                  const MotorParams& m, const MotorInit& init) {
  detail::require_finite({s.eqp, s.edp, s.eqpp, s.edpp, s.slip, Vd, Vq, init.Tm0},
                         "motor_algebra");
  MotorOutputs out;
  const double den = m.rs * m.rs + m.Lpp * m.Lpp;
  const double g = m.rs / den;
  const double b = m.Lpp / den;
  out.id = g * (Vd + s.edpp) + b * (Vq + s.eqpp);
  out.iq = g * (Vq + s.eqpp) - b * (Vd + s.edpp);
  out.w = 1.0 - s.slip;

  double w_exp = out.w;
  if (w_exp <= 0.0 && !detail::is_integer(m.Etrq)) {
    w_exp = 0.0;
    out.speed_clamped = true;
  }
  out.TL = init.Tm0 * (m.A * out.w * out.w + m.B * out.w + m.C0 + m.D * std::pow(w_exp, m.Etrq));
  out.P = Vd * out.id + Vq * out.iq;
  out.Q = Vq * out.id - Vd * out.iq;
  return out;
}

/// Electrical torque p*E''d*id + q*E''q*iq.
inline double electrical_torque(const MotorState& s, const MotorOutputs& o, const MotorParams& m) {
  return m.p * s.edpp * o.id + m.q * s.eqpp * o.iq;
}

/// Time derivatives of the five states, returned in a MotorState.
inline MotorState motor_derivatives(const MotorState& s, double Vd, double Vq,
                                    const MotorParams& m, const MotorInit& init) {
  const MotorOutputs o = motor_algebra(s, Vd, Vq, m, init);
  const double dL = m.Ls - m.Lp;
  const double k_coupling = (m.Tpp0 * dL + m.Tp0 * (m.Lp - m.Lpp)) / (m.Tp0 * m.Tpp0);
  const double k_transfer = (m.Tp0 - m.Tpp0) / (m.Tp0 * m.Tpp0);
  const double ws = m.omega0 * s.slip;

  MotorState d;
  d.eqp = (-s.eqp - o.id * dL - s.edp * ws * m.Tp0) / m.Tp0;
  d.edp = (-s.edp + o.iq * dL + s.eqp * ws * m.Tp0) / m.Tp0;
  d.eqpp = k_transfer * s.eqp - k_coupling * o.id - s.eqpp / m.Tpp0 - ws * s.edpp;
  d.edpp = k_transfer * s.edp + k_coupling * o.iq - s.edpp / m.Tpp0 + ws * s.eqpp;
  d.slip = -(electrical_torque(s, o, m) - o.TL) / (2.0 * m.H);
  return d;
}

struct MotorEquilibrium {
  MotorState state;
  MotorInit init;
  double residual = 0.0;  // max-norm of [derivatives, P - P0]
  int iterations = 0;
};

namespace detail {

using Vec6 = Eigen::Matrix<double, 6, 1>;

inline Vec6 equilibrium_residual(const Vec6& z, double P0, double Vd, double Vq,
                                 const MotorParams& m) {
  const MotorState s{z[0], z[1], z[2], z[3], z[4]};
  const MotorInit init{z[5]};
  const MotorState d = motor_derivatives(s, Vd, Vq, m, init);
  const MotorOutputs o = motor_algebra(s, Vd, Vq, m, init);
  Vec6 r;
  r << d.eqp, d.edp, d.eqpp, d.edpp, d.slip, o.P - P0;
  return r;
}

inline std::optional<MotorEquilibrium> damped_newton(Vec6 z, double P0, double Vd, double Vq,
                                                     const MotorParams& m, int max_iter,
                                                     double tol, double& last_residual) {
  Vec6 r = equilibrium_residual(z, P0, Vd, Vq, m);
  double norm = r.lpNorm<Eigen::Infinity>();
  int it = 0;
  for (; it < max_iter && norm >= tol; ++it) {
    Eigen::Matrix<double, 6, 6> J;
    for (int j = 0; j < 6; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(z[j]));
      Vec6 zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      J.col(j) = (equilibrium_residual(zp, P0, Vd, Vq, m) -
                  equilibrium_residual(zm, P0, Vd, Vq, m)) / (2.0 * h);
    }
    const Vec6 step = J.fullPivLu().solve(-r);
    if (!step.allFinite()) break;

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, lambda *= 0.5) {
      const Vec6 trial = z + lambda * step;
      const Vec6 rt = equilibrium_residual(trial, P0, Vd, Vq, m);
      const double nt = rt.lpNorm<Eigen::Infinity>();
      if (std::isfinite(nt) && nt < norm) {
        z = trial;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  last_residual = norm;
  if (!(norm < tol) || !(std::abs(z[4]) < 1.0)) return std::nullopt;
  return MotorEquilibrium{MotorState{z[0], z[1], z[2], z[3], z[4]}, MotorInit{z[5]}, norm, it};
}

}  // namespace detail

inline constexpr int kInitMaxIterations = 100;
inline constexpr double kInitTolerance = 1e-10;

/// Solves the five states and Tm0 so that every derivative vanishes and the
/// motor draws P0 at terminal voltage (Vd0, Vq0). Reactive power follows from
/// the equilibrium. Tm0 comes out as the electrical torque divided by the
/// torque polynomial at the initial speed, which reduces to
/// Tm0 = p*E''d0*id0 + q*E''q0*iq0 whenever that polynomial equals one.
///
/// Throws NoEquilibrium with the final residual when no start converges.
inline MotorEquilibrium motor_initialize(double P0, double Vd0, double Vq0, const MotorParams& m,
                                         const std::optional<MotorEquilibrium>& guess = {}) {
  detail::require_finite({P0, Vd0, Vq0}, "motor_initialize");
  m.validate();
  if (!(std::hypot(Vd0, Vq0) > 0.0)) {
    throw Error(ErrorCode::NoEquilibrium, "motor_initialize: terminal voltage must be nonzero");
  }

  std::vector<detail::Vec6> starts;
  if (guess) {
    const auto& g = *guess;
    starts.push_back((detail::Vec6() << g.state.eqp, g.state.edp, g.state.eqpp, g.state.edpp,
                      g.state.slip, g.init.Tm0).finished());
  }
  // E'' opposing V, then the 90-degree rotated start.
  starts.push_back((detail::Vec6() << -Vq0, -Vd0, -Vq0, -Vd0, 0.01, P0).finished());
  starts.push_back((detail::Vec6() << Vd0, -Vq0, Vd0, -Vq0, 0.01, P0).finished());

  double best = std::numeric_limits<double>::infinity();
  for (const auto& z0 : starts) {
    double residual = 0.0;
    if (auto eq = detail::damped_newton(z0, P0, Vd0, Vq0, m, kInitMaxIterations, kInitTolerance,
                                        residual)) {
      return *eq;
    }
    best = std::min(best, residual);
  }
  throw Error(ErrorCode::NoEquilibrium,
              "motor_initialize: damped Newton did not converge (final residual " +
                  std::to_string(best) + ")");
}

}  // namespace clm::motor
