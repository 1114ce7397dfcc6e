#pragma once

// Composite load: fractions of the individual components behind one bus.

#include <array>
#include <cmath>
#include <string>

#include "clm/error.hpp"
#include "clm/static_loads.hpp"

namespace clm {

enum class ComponentKind { MotorA, MotorB, MotorC, MotorD, DerA, Electronic, Zip };

/// Motor D (single-phase) has a slot in the enumeration but no model.
inline const char* component_name(ComponentKind k) {
  switch (k) {
    case ComponentKind::MotorA: return "motor_a";
    case ComponentKind::MotorB: return "motor_b";
    case ComponentKind::MotorC: return "motor_c";
    case ComponentKind::MotorD: return "motor_d";
    case ComponentKind::DerA: return "dera";
    case ComponentKind::Electronic: return "elec";
    case ComponentKind::Zip: return "zip";
  }
  return "?";
}

struct LoadMix {
  double motor_a = 0.0;
  double motor_b = 0.0;
  double motor_c = 0.0;
  double electronic = 0.0;
  double zip = 0.0;
  double der_scale = 0.0;  // DER_A rating as a fraction of the load base
  double pbase_mva = 1.0;

  void validate(const std::string& where = "mix") const {
    auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::ConfigValue, where + ": " + what);
    };
    const std::array<std::pair<const char*, double>, 6> parts = {{{"motor_a", motor_a},
                                                                 {"motor_b", motor_b},
                                                                 {"motor_c", motor_c},
                                                                 {"electronic", electronic},
                                                                 {"zip", zip},
                                                                 {"der_scale", der_scale}}};
    for (const auto& [name, v] : parts) {
      if (!std::isfinite(v) || v < 0.0) fail(std::string(name) + " must be a finite value >= 0");
    }
    for (const auto& [name, v] : parts) {
      if (std::string(name) != "der_scale" && v > 1.0) fail(std::string(name) + " must be <= 1");
    }
    const double sum = motor_a + motor_b + motor_c + electronic + zip;
    if (std::abs(sum - 1.0) > 1e-12) {
      fail("fractions motor_a + motor_b + motor_c + electronic + zip sum to " +
           std::to_string(sum) + ", expected 1");
    }
    if (!(pbase_mva > 0.0)) fail("pbase_mva must be > 0");
  }

  friend bool operator==(const LoadMix&, const LoadMix&) = default;
};

/// Per-component powers, each on its own base.
struct ComponentOutputs {
  loads::PQ motor_a;
  loads::PQ motor_b;
  loads::PQ motor_c;
  loads::PQ electronic;
  loads::PQ zip;
  loads::PQ dera;  // injection (generator convention)
};

/// Fraction-weighted load minus the scaled DER_A injection.
inline loads::PQ composite_step_outputs(const ComponentOutputs& c, const LoadMix& mix) {
  loads::PQ total;
  total.P = mix.motor_a * c.motor_a.P + mix.motor_b * c.motor_b.P + mix.motor_c * c.motor_c.P +
            mix.electronic * c.electronic.P + mix.zip * c.zip.P - mix.der_scale * c.dera.P;
  total.Q = mix.motor_a * c.motor_a.Q + mix.motor_b * c.motor_b.Q + mix.motor_c * c.motor_c.Q +
            mix.electronic * c.electronic.Q + mix.zip * c.zip.Q - mix.der_scale * c.dera.Q;
  return total;
}

}  // namespace clm
