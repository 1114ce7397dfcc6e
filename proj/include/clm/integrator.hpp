#pragma once

// Fixed-step explicit integrators over a flat state vector.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "clm/error.hpp"

namespace clm::sim {

enum class Method { Rk4, Heun, Euler };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Rk4: return "rk4";
    case Method::Heun: return "heun";
    case Method::Euler: return "euler";
  }
  return "?";
}

inline Method parse_method(const std::string& name) {
  if (name == "rk4") return Method::Rk4;
  if (name == "heun") return Method::Heun;
  if (name == "euler") return Method::Euler;
  throw Error(ErrorCode::ConfigValue, "integrator.method: unknown method '" + name + "'");
}

struct IntegratorConfig {
  Method method = Method::Rk4;
  double dt = 1e-3;     // s
  double t_end = 5.0;   // s
  std::size_t record_every = 1;

  void validate(const std::string& where = "integrator") const {
    auto fail = [&](const char* what) { throw Error(ErrorCode::ConfigValue, where + ": " + what); };
    if (!(std::isfinite(dt) && dt > 0.0)) fail("dt must be > 0");
    if (!(std::isfinite(t_end) && t_end > 0.0)) fail("t_end must be > 0");
    if (record_every < 1) fail("record_every must be >= 1");
    if (steps() < 1) fail("t_end must cover at least one step");
  }

  std::size_t steps() const {
    return static_cast<std::size_t>(std::llround(t_end / dt));
  }

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

/// Owns stage buffers so that stepping does not allocate.
///
/// The right-hand side is called as rhs(t, x, dx) with spans of equal size.
class Stepper {
 public:
  Stepper(Method method, std::size_t n)
      : method_(method), k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  template <class Rhs>
  void step(Rhs&& rhs, double t, double dt, std::span<double> x) {
    const std::size_t n = x.size();
    switch (method_) {
      case Method::Euler:
        rhs(t, std::span<const double>(x), std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i) x[i] += dt * k1_[i];
        break;
      case Method::Heun:
        rhs(t, std::span<const double>(x), std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k1_[i];
        rhs(t + dt, std::span<const double>(tmp_), std::span<double>(k2_));
        for (std::size_t i = 0; i < n; ++i) x[i] += 0.5 * dt * (k1_[i] + k2_[i]);
        break;
      case Method::Rk4: {
        const double h2 = 0.5 * dt;
        rhs(t, std::span<const double>(x), std::span<double>(k1_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + h2 * k1_[i];
        rhs(t + h2, std::span<const double>(tmp_), std::span<double>(k2_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + h2 * k2_[i];
        rhs(t + h2, std::span<const double>(tmp_), std::span<double>(k3_));
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = x[i] + dt * k3_[i];
        rhs(t + dt, std::span<const double>(tmp_), std::span<double>(k4_));
        for (std::size_t i = 0; i < n; ++i) {
          x[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        }
        break;
      }
    }
  }

 private:
  Method method_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace clm::sim
