#pragma once

// Named parameter sets: the three WECC three-phase motors and the DER_A
// validation setting (base 12.47 kV / 15.0 MVA).

#include <array>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "clm/dera.hpp"
#include "clm/error.hpp"
#include "clm/motor.hpp"

namespace clm::presets {

inline motor::MotorParams motor_a() {
  motor::MotorParams m;
  m.rs = 0.04;
  m.Ls = 1.8;
  m.Lp = 0.1;
  m.Lpp = 0.083;
  m.Tp0 = 0.092;
  m.Tpp0 = 0.002;
  m.H = 0.05;
  m.A = 0.0;
  m.B = 0.0;
  m.C0 = 0.0;
  m.D = 1.0;
  m.Etrq = 0.0;
  m.p = -1.0;
  m.q = -1.0;
  m.omega0 = 120.0 * std::numbers::pi;
  return m;
}

inline motor::MotorParams motor_b() {
  motor::MotorParams m;
  m.rs = 0.03;
  m.Ls = 1.8;
  m.Lp = 0.16;
  m.Lpp = 0.12;
  m.Tp0 = 0.1;
  m.Tpp0 = 0.0026;
  m.H = 1.0;
  m.A = 0.0;
  m.B = 0.0;
  m.C0 = 0.0;
  m.D = 1.0;
  m.Etrq = 2.0;
  m.p = -1.0;
  m.q = -1.0;
  m.omega0 = 120.0 * std::numbers::pi;
  return m;
}

// The source table labels this column "Motor B" a second time; the values
// (H = 0.1, low inertia) are those of motor C.
inline motor::MotorParams motor_c() {
  motor::MotorParams m = motor_b();
  m.H = 0.1;
  return m;
}

inline dera::DerAParams dera_table3() {
  dera::DerAParams p;
  p.Trv = 0.02;
  p.Tp = 0.02;
  p.Tiq = 0.02;
  p.Vref0 = 0.0;
  p.Kqv = 5.0;
  p.Tg = 0.02;
  p.PfFlag = 1;
  p.Imax = 1.2;
  p.dbd1 = -99.0;
  p.dbd2 = 99.0;
  p.Tv = 0.02;
  p.Vl0 = 0.44;
  p.Vl1 = 0.49;
  p.Vh0 = 1.2;
  p.Vh1 = 1.15;
  p.tvl0 = 0.16;
  p.tvl1 = 0.16;
  p.tvh0 = 0.16;
  p.tvh1 = 0.16;
  p.Vrfrac = 0.7;
  p.Trf = 0.02;
  p.Kpg = 0.1;
  p.Kig = 10.0;
  p.Ddn = 20.0;
  p.Dup = 0.0;
  p.femax = 99.0;
  p.femin = -99.0;
  p.fdbd1 = -0.0006;
  p.fdbd2 = 0.0006;
  p.Freqflag = 0;
  p.Pmin = 0.0;
  p.Pmax = 1.1;
  p.Tpord = 0.02;
  p.dPmin = -0.5;
  p.dPmax = 0.5;
  p.Vtripflag = 1;
  p.Iql1 = -1.0;
  p.Iqh1 = 1.0;
  p.Xe = 0.25;
  p.Ftripflag = 1;
  p.PQflag = 0;
  p.typeflag = 1;
  p.Vpr = 0.8;
  return p;
}

struct DerABase {
  double kv = 12.47;
  double mva = 15.0;
};

inline constexpr std::array<std::string_view, 4> kNames = {"motor_a", "motor_b", "motor_c",
                                                           "dera_table3"};

using Preset = std::variant<motor::MotorParams, dera::DerAParams>;

inline std::optional<Preset> find(std::string_view name) {
  if (name == "motor_a") return motor_a();
  if (name == "motor_b") return motor_b();
  if (name == "motor_c") return motor_c();
  if (name == "dera_table3") return dera_table3();
  return std::nullopt;
}

inline motor::MotorParams motor(std::string_view name) {
  if (auto p = find(name); p && std::holds_alternative<motor::MotorParams>(*p)) {
    return std::get<motor::MotorParams>(*p);
  }
  throw Error(ErrorCode::PresetUnknown, "unknown motor preset '" + std::string(name) + "'");
}

inline dera::DerAParams der(std::string_view name) {
  if (auto p = find(name); p && std::holds_alternative<dera::DerAParams>(*p)) {
    return std::get<dera::DerAParams>(*p);
  }
  throw Error(ErrorCode::PresetUnknown, "unknown DER_A preset '" + std::string(name) + "'");
}

}  // namespace clm::presets
