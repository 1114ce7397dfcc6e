#pragma once

// Scenario assembly and fixed-step integration of the composite load.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clm/composite.hpp"
#include "clm/dera.hpp"
#include "clm/error.hpp"
#include "clm/integrator.hpp"
#include "clm/motor.hpp"
#include "clm/signal.hpp"
#include "clm/static_loads.hpp"
#include "clm/trajectory.hpp"

namespace clm::sim {

struct MotorSetup {
  motor::MotorParams params;
  double P0 = 0.8;  // initial real power on the motor base (pu)
  std::string preset;

  friend bool operator==(const MotorSetup&, const MotorSetup&) = default;
};

struct DerASetup {
  dera::DerAParams params;
  double Pgen0 = 0.5;
  double Qgen0 = 0.0;
  std::string preset;

  friend bool operator==(const DerASetup&, const DerASetup&) = default;
};

/// A component is simulated when its setup is present; its contribution to
/// the composite total is weighted by the matching LoadMix entry.
struct Scenario {
  LoadMix mix;
  std::optional<MotorSetup> motor_a;
  std::optional<MotorSetup> motor_b;
  std::optional<MotorSetup> motor_c;
  std::optional<DerASetup> dera;
  std::optional<loads::ZipParams> zip;
  std::optional<loads::ElecParams> elec;
  BusSignal bus;
  std::optional<double> initial_voltage;    // default: bus voltage at t = 0
  std::optional<double> initial_frequency;  // default: bus frequency at t = 0

  void validate() const {
    mix.validate();
    auto need = [](bool ok, const char* name) {
      if (!ok) {
        throw Error(ErrorCode::ConfigValue,
                    std::string("mix: ") + name + " has a nonzero fraction but no parameters");
      }
    };
    need(mix.motor_a == 0.0 || motor_a.has_value(), "motor_a");
    need(mix.motor_b == 0.0 || motor_b.has_value(), "motor_b");
    need(mix.motor_c == 0.0 || motor_c.has_value(), "motor_c");
    need(mix.der_scale == 0.0 || dera.has_value(), "dera");
    need(mix.zip == 0.0 || zip.has_value(), "zip");
    need(mix.electronic == 0.0 || elec.has_value(), "elec");
    if (motor_a) motor_a->params.validate("motor_a");
    if (motor_b) motor_b->params.validate("motor_b");
    if (motor_c) motor_c->params.validate("motor_c");
    if (dera) dera->params.validate("dera");
    if (zip) zip->validate("zip");
    if (elec) elec->validate("elec");
    if (const auto* pb = std::get_if<PlaybackBus>(&bus.source())) pb->params.validate();
    if (const auto* sb = std::get_if<SeriesBus>(&bus.source())) sb->series.validate();
  }
};

struct TripEvent {
  std::string component;
  std::string kind;  // "low_voltage_timer", "high_voltage_timer", "frequency_trip"
  double t = 0.0;
  std::size_t step = 0;

  friend bool operator==(const TripEvent&, const TripEvent&) = default;
};

struct MotorResidual {
  std::string component;
  double residual = 0.0;
  double Tm0 = 0.0;
  int iterations = 0;
};

struct RunSummary {
  std::vector<MotorResidual> motors;
  std::optional<double> dera_residual;
  std::vector<TripEvent> events;
  std::size_t steps = 0;
  std::size_t samples = 0;
  // Step counts during which the condition held at the end of the step.
  std::size_t dera_iq_limited = 0;
  std::size_t dera_ip_limited = 0;
  std::size_t dera_power_order_clamped = 0;
  std::size_t dera_rate_limited = 0;
  std::size_t motor_speed_clamped = 0;
  std::size_t motor_slip_out_of_range = 0;
  std::size_t elec_disconnected = 0;
};

struct SimulationResult {
  Trajectory trajectory;
  RunSummary summary;
};

namespace detail {

struct MotorSlot {
  std::string name;
  double fraction = 0.0;
  MotorSetup setup;
  motor::MotorInit init;
  std::size_t offset = 0;
};

/// Flat-state view of an assembled scenario.
class CompositeSystem {
 public:
  CompositeSystem(const Scenario& sc, double dt) : sc_(sc), dt_(dt) {
    sc.validate();
    const double V0 = sc.initial_voltage.value_or(sc.bus.voltage(0.0));
    const double F0 = sc.initial_frequency.value_or(sc.bus.frequency(0.0));
    auto add_motor = [&](const std::optional<MotorSetup>& m, const char* name, double fraction) {
      if (!m) return;
      const motor::MotorEquilibrium eq = motor::motor_initialize(m->P0, V0, 0.0, m->params);
      MotorSlot slot{name, fraction, *m, eq.init, x0_.size()};
      const auto a = eq.state.to_array();
      x0_.insert(x0_.end(), a.begin(), a.end());
      summary_.motors.push_back({name, eq.residual, eq.init.Tm0, eq.iterations});
      motors_.push_back(std::move(slot));
    };
    add_motor(sc.motor_a, "motor_a", sc.mix.motor_a);
    add_motor(sc.motor_b, "motor_b", sc.mix.motor_b);
    add_motor(sc.motor_c, "motor_c", sc.mix.motor_c);
    if (sc.dera) {
      const auto eq = dera::dera_initialize(sc.dera->Pgen0, sc.dera->Qgen0, V0, F0, sc.dera->params);
      dera_offset_ = x0_.size();
      refs_ = eq.refs;
      trackers_ = eq.trackers;
      const auto a = eq.state.to_array();
      x0_.insert(x0_.end(), a.begin(), a.end());
      const auto d = dera::dera_derivatives(eq.state, trackers_, V0, F0, sc.dera->params, refs_, dt_);
      double r = 0.0;
      for (double v : d.to_array()) r = std::max(r, std::abs(v));
      summary_.dera_residual = r;
    }
    if (sc.elec) elec_tracker_ = loads::elec_tracker_init(V0, *sc.elec);
    build_channels();
  }

  std::size_t size() const { return x0_.size(); }
  const std::vector<double>& initial_state() const { return x0_; }
  const std::vector<std::string>& channels() const { return channels_; }
  RunSummary& summary() { return summary_; }

  void rhs(double t, std::span<const double> x, std::span<double> dx) const {
    const double V = sc_.bus.voltage(t);
    const double F = sc_.bus.frequency(t);
    for (const auto& m : motors_) {
      const motor::MotorState s = motor_state(x, m.offset);
      const auto d = motor::motor_derivatives(s, V, 0.0, m.setup.params, m.init).to_array();
      std::copy(d.begin(), d.end(), dx.begin() + static_cast<std::ptrdiff_t>(m.offset));
    }
    if (sc_.dera) {
      const auto d = dera::dera_derivatives(dera_state(x), trackers_, V, F, sc_.dera->params,
                                            refs_, dt_)
                         .to_array();
      std::copy(d.begin(), d.end(), dx.begin() + static_cast<std::ptrdiff_t>(dera_offset_));
    }
  }

  /// End-of-step bookkeeping at time t with state x.
  void advance_trackers(double t, std::size_t step, std::span<const double> x) {
    const double V = sc_.bus.voltage(t);
    const double F = sc_.bus.frequency(t);
    if (sc_.dera) {
      const auto& p = sc_.dera->params;
      const dera::DerATrackers before = trackers_;
      trackers_ = dera::update_voltage_trackers(V, trackers_, p, dt_);
      trackers_ = dera::frequency_trip(F, V, trackers_, p, dt_);
      if (!before.low_v_expired && trackers_.low_v_expired) {
        summary_.events.push_back({"dera", "low_voltage_timer", t, step});
      }
      if (!before.high_v_expired && trackers_.high_v_expired) {
        summary_.events.push_back({"dera", "high_voltage_timer", t, step});
      }
      if (!before.tripped && trackers_.tripped) {
        summary_.events.push_back({"dera", "frequency_trip", t, step});
      }
      dera::DerAAux aux;
      dera::dera_derivatives(dera_state(x), trackers_, V, F, p, refs_, dt_, &aux);
      if (aux.iq_cmd != aux.iq_raw) ++summary_.dera_iq_limited;
      if (aux.ip_cmd != aux.ip_raw) ++summary_.dera_ip_limited;
      if (aux.p_order_limited != x[dera_offset_ + 6]) ++summary_.dera_power_order_clamped;
      if (aux.rate_limited) ++summary_.dera_rate_limited;
    }
    if (sc_.elec) {
      elec_tracker_ = loads::elec_tracker_update(V, elec_tracker_, *sc_.elec);
      if (loads::elec_coefficient(V, elec_tracker_, *sc_.elec).ct == 0.0) {
        ++summary_.elec_disconnected;
      }
    }
    for (const auto& m : motors_) {
      const motor::MotorState s = motor_state(x, m.offset);
      if (std::abs(s.slip) >= 1.0) ++summary_.motor_slip_out_of_range;
      if (motor::motor_algebra(s, V, 0.0, m.setup.params, m.init).speed_clamped) {
        ++summary_.motor_speed_clamped;
      }
    }
  }

  void record(double t, std::span<const double> x, std::vector<double>& row) const {
    const double V = sc_.bus.voltage(t);
    const double F = sc_.bus.frequency(t);
    row.clear();
    row.push_back(t);
    row.push_back(V);
    row.push_back(F);
    ComponentOutputs out;
    for (const auto& m : motors_) {
      const motor::MotorState s = motor_state(x, m.offset);
      const motor::MotorOutputs o = motor::motor_algebra(s, V, 0.0, m.setup.params, m.init);
      row.push_back(o.P);
      row.push_back(o.Q);
      for (double v : s.to_array()) row.push_back(v);
      row.push_back(o.TL);
      row.push_back(motor::electrical_torque(s, o, m.setup.params));
      loads::PQ pq{o.P, o.Q};
      if (m.name == "motor_a") out.motor_a = pq;
      if (m.name == "motor_b") out.motor_b = pq;
      if (m.name == "motor_c") out.motor_c = pq;
    }
    if (sc_.dera) {
      const dera::DerAState s = dera_state(x);
      const dera::DerAOutputs o = dera::dera_outputs(s, V, trackers_);
      row.push_back(o.P);
      row.push_back(o.Q);
      for (double v : s.to_array()) row.push_back(v);
      row.push_back(dera::voltage_protection(s.v_filt, trackers_, sc_.dera->params));
      row.push_back(trackers_.tripped ? 1.0 : 0.0);
      out.dera = {o.P, o.Q};
    }
    if (sc_.elec) {
      const auto c = loads::elec_coefficient(V, elec_tracker_, *sc_.elec);
      const loads::PQ pq = loads::elec_power(c.ct, *sc_.elec);
      row.push_back(pq.P);
      row.push_back(pq.Q);
      row.push_back(c.ct);
      row.push_back(elec_tracker_.vmin);
      out.electronic = pq;
    }
    if (sc_.zip) {
      const loads::PQ pq = loads::zip_power(V, *sc_.zip);
      row.push_back(pq.P);
      row.push_back(pq.Q);
      out.zip = pq;
    }
    const loads::PQ total = composite_step_outputs(out, sc_.mix);
    row.push_back(total.P);
    row.push_back(total.Q);
  }

 private:
  static motor::MotorState motor_state(std::span<const double> x, std::size_t off) {
    return {x[off], x[off + 1], x[off + 2], x[off + 3], x[off + 4]};
  }

  dera::DerAState dera_state(std::span<const double> x) const {
    std::array<double, dera::DerAState::kSize> a{};
    std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(dera_offset_), a.size(), a.begin());
    return dera::DerAState::from_array(a);
  }

  void build_channels() {
    channels_ = {"t", "V", "F"};
    for (const auto& m : motors_) {
      for (const char* c : {"P", "Q", "eqp", "edp", "eqpp", "edpp", "slip", "TL", "Te"}) {
        channels_.push_back(m.name + "." + c);
      }
    }
    if (sc_.dera) {
      channels_.push_back("dera.P");
      channels_.push_back("dera.Q");
      for (const char* n : dera::DerAState::kNames) channels_.push_back(std::string("dera.") + n);
      channels_.push_back("dera.vp");
      channels_.push_back("dera.tripped");
    }
    if (sc_.elec) {
      for (const char* c : {"P", "Q", "ct", "vmin"}) channels_.push_back(std::string("elec.") + c);
    }
    if (sc_.zip) {
      channels_.push_back("zip.P");
      channels_.push_back("zip.Q");
    }
    channels_.push_back("total.P");
    channels_.push_back("total.Q");
  }

  const Scenario& sc_;
  double dt_;
  std::vector<MotorSlot> motors_;
  std::size_t dera_offset_ = 0;
  dera::DerARefs refs_;
  dera::DerATrackers trackers_;
  loads::ElecTracker elec_tracker_;
  std::vector<double> x0_;
  std::vector<std::string> channels_;
  RunSummary summary_;
};

}  // namespace detail

/// Integrates from t = 0 to t_end. Components start at equilibrium for the
/// initial bus voltage and frequency. Sample n sits at t = n*dt.
inline SimulationResult integrate(const Scenario& scenario, const IntegratorConfig& config) {
  config.validate();
  detail::CompositeSystem sys(scenario, config.dt);
  std::vector<double> x = sys.initial_state();
  Stepper stepper(config.method, x.size());
  const std::size_t steps = config.steps();

  Trajectory traj(sys.channels());
  std::vector<double> row;
  row.reserve(sys.channels().size());
  sys.record(0.0, x, row);
  traj.append(row);

  // Steps are split at bus breakpoints, and within each piece the bus is
  // sampled strictly inside the piece so a jump is seen from the correct side.
  const std::vector<double> breaks = scenario.bus.breakpoints();
  std::size_t next_break = 0;
  double lo = 0.0, hi = 0.0;
  auto rhs = [&](double t, std::span<const double> xs, std::span<double> dx) {
    const double inside_lo = std::nextafter(lo, hi);
    const double inside_hi = std::nextafter(hi, lo);
    sys.rhs(std::clamp(t, inside_lo, inside_hi), xs, dx);
  };
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t0 = static_cast<double>(n - 1) * config.dt;
    const double t1 = static_cast<double>(n) * config.dt;
    try {
      lo = t0;
      while (next_break < breaks.size() && breaks[next_break] <= lo) ++next_break;
      while (next_break < breaks.size() && breaks[next_break] < t1) {
        hi = breaks[next_break++];
        stepper.step(rhs, lo, hi - lo, std::span<double>(x));
        lo = hi;
      }
      hi = t1;
      stepper.step(rhs, lo, hi - lo, std::span<double>(x));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteInput) throw;
      throw Error(ErrorCode::NonFiniteState,
                  "state left the finite range during step " + std::to_string(n));
    }
    for (double v : x) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteState,
                    "state left the finite range at step " + std::to_string(n));
      }
    }
    sys.advance_trackers(t1, n, x);
    if (n % config.record_every == 0) {
      sys.record(t1, x, row);
      traj.append(row);
    }
  }
  RunSummary summary = sys.summary();
  summary.steps = steps;
  summary.samples = traj.rows();
  return {std::move(traj), std::move(summary)};
}

}  // namespace clm::sim
