#include "clm/app.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "clm/config.hpp"
#include "clm/presets.hpp"
#include "clm/simulation.hpp"
#include "clm/trajectory.hpp"

namespace clm::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json summary_json(const sim::RunSummary& s, const config::ScenarioConfig& cfg) {
  json j = json::object();
  json motors = json::array();
  for (const auto& m : s.motors) {
    motors.push_back({{"component", m.component},
                      {"residual", m.residual},
                      {"Tm0", m.Tm0},
                      {"iterations", m.iterations}});
  }
  j["equilibrium"] = {{"motors", motors}};
  if (s.dera_residual) j["equilibrium"]["dera_residual"] = *s.dera_residual;
  json events = json::array();
  for (const auto& e : s.events) {
    events.push_back({{"component", e.component}, {"kind", e.kind}, {"t", e.t}, {"step", e.step}});
  }
  j["events"] = events;
  j["counters"] = {{"dera_iq_limited", s.dera_iq_limited},
                   {"dera_ip_limited", s.dera_ip_limited},
                   {"dera_power_order_clamped", s.dera_power_order_clamped},
                   {"dera_rate_limited", s.dera_rate_limited},
                   {"motor_speed_clamped", s.motor_speed_clamped},
                   {"motor_slip_out_of_range", s.motor_slip_out_of_range},
                   {"elec_disconnected", s.elec_disconnected}};
  j["integrator"] = {{"method", sim::method_name(cfg.integrator.method)},
                     {"dt", cfg.integrator.dt},
                     {"t_end", cfg.integrator.t_end},
                     {"steps", s.steps},
                     {"samples", s.samples}};
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot write");
  out << text;
  if (!out) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

sim::Trajectory read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, path + ": cannot open");
  return sim::read_csv(in, path);
}

json motor_preset_json(const motor::MotorParams& m) {
  json j = json::object();
  for (const auto& f : config::motor_fields()) j[f.name] = m.*(f.member);
  return j;
}

json dera_preset_json(const dera::DerAParams& d) {
  json j = json::object();
  for (const auto& f : config::dera_fields()) j[f.name] = d.*(f.member);
  for (const auto& f : config::dera_flag_fields()) j[f.name] = d.*(f.member);
  return j;
}

}  // namespace

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  const Logger log(err, log_level_from_env());
  return guarded(err, [&]() -> int {
    config::ScenarioConfig cfg = config::load(opts.config);
    if (opts.dt) cfg.integrator.dt = *opts.dt;
    if (opts.t_end) cfg.integrator.t_end = *opts.t_end;
    cfg.integrator.validate();
    if (!opts.channels.empty()) cfg.outputs.channels = opts.channels;
    if (opts.seed) log.debug("--seed is accepted but unused");

    log.info("running " + opts.config);
    const sim::SimulationResult res = sim::integrate(cfg.scenario, cfg.integrator);
    for (const auto& m : res.summary.motors) {
      log.debug(m.component + " equilibrium residual " + sim::format_value(m.residual));
    }
    for (const auto& c : cfg.outputs.channels) res.trajectory.index(c);

    const fs::path dir(opts.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, dir.string() + ": " + ec.message());

    std::ostringstream csv;
    sim::write_csv(csv, res.trajectory, cfg.outputs.channels);
    write_text(dir / cfg.outputs.trajectory, csv.str());
    write_text(dir / cfg.outputs.summary, summary_json(res.summary, cfg).dump(2) + "\n");
    if (!cfg.outputs.binary.empty()) {
      std::ofstream bin(dir / cfg.outputs.binary, std::ios::binary);
      if (!bin) throw Error(ErrorCode::Io, (dir / cfg.outputs.binary).string() + ": cannot write");
      sim::write_binary(bin, res.trajectory);
    }
    if (cfg.outputs.plots) {
      // One file per component with the voltage input and its P/Q.
      std::vector<std::string> comps;
      for (const auto& ch : res.trajectory.channels()) {
        const auto dot = ch.find('.');
        if (dot == std::string::npos || ch.substr(dot + 1) != "P") continue;
        comps.push_back(ch.substr(0, dot));
      }
      for (const auto& c : comps) {
        std::ostringstream p;
        sim::write_csv(p, res.trajectory, {"V", "F", c + ".P", c + ".Q"});
        write_text(dir / ("plot_" + c + ".csv"), p.str());
      }
    }
    out << "wrote " << (dir / cfg.outputs.trajectory).string() << " (" << res.trajectory.rows()
        << " samples, " << res.trajectory.cols() << " channels)\n";
    for (const auto& e : res.summary.events) {
      out << "event " << e.component << " " << e.kind << " t=" << sim::format_value(e.t) << "\n";
    }
    return 0;
  });
}

int compare(const std::string& path_a, const std::string& path_b,
                   std::vector<std::string> channels, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const sim::Trajectory a = read_csv_file(path_a);
    sim::Trajectory b = read_csv_file(path_b);
    if (channels.empty()) {
      for (const auto& c : a.channels()) {
        if (c != "t" && b.find(c)) channels.push_back(c);
      }
    }
    bool resampled = false;
    if (!sim::same_grid(a, b)) {
      b = sim::resample(b, a.time());
      resampled = true;
    }
    std::size_t width = 7;
    for (const auto& c : channels) width = std::max(width, c.size());
    char buf[64];
    out << "compare " << path_a << " vs " << path_b << (resampled ? " (b resampled)" : "") << "\n";
    out << std::string("channel") << std::string(width - 7 + 2, ' ') << "MSE\n";
    for (const auto& c : channels) {
      const double m = sim::mse(a, b, c);
      std::snprintf(buf, sizeof buf, "%.4e", m);
      out << c << std::string(width - c.size() + 2, ' ') << buf << "\n";
    }
    return 0;
  });
}

int preset(const std::string& action, const std::string& name, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (action == "list") {
      for (auto n : presets::kNames) out << n << "\n";
      return 0;
    }
    if (action != "show") {
      throw Error(ErrorCode::Usage, "preset: expected 'list' or 'show <name>'");
    }
    const auto p = presets::find(name);
    if (!p) throw Error(ErrorCode::PresetUnknown, "unknown preset '" + name + "'");
    json doc = json::object();
    doc["name"] = name;
    if (const auto* m = std::get_if<motor::MotorParams>(&*p)) {
      doc["kind"] = "motor";
      doc["params"] = motor_preset_json(*m);
    } else {
      const presets::DerABase base;
      doc["kind"] = "dera";
      doc["base_kv"] = base.kv;
      doc["base_mva"] = base.mva;
      doc["params"] = dera_preset_json(std::get<dera::DerAParams>(*p));
      const PlaybackParams pb;
      doc["playback"] = {{"a", pb.a}, {"b", pb.b}, {"c", pb.c}, {"d", pb.d}};
    }
    out << doc.dump(2) << "\n";
    return 0;
  });
}

int batch(const std::vector<std::string>& configs, const RunOptions& common,
                 std::ostream& out, std::ostream& err) {
  if (configs.empty()) return report(err, ErrorCode::Usage, "batch: no config files given");
  struct Outcome {
    int status = 0;
    std::string out, err;
  };
  std::vector<std::future<Outcome>> jobs;
  for (const auto& c : configs) {
    RunOptions opts = common;
    opts.config = c;
    opts.out_dir = (fs::path(common.out_dir) / fs::path(c).stem()).string();
    jobs.push_back(std::async(std::launch::async, [opts]() {
      std::ostringstream o, e;
      Outcome r;
      r.status = run(opts, o, e);
      r.out = o.str();
      r.err = e.str();
      return r;
    }));
  }
  int first_fail = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Outcome r = jobs[i].get();
    out << configs[i] << ": " << (r.status == 0 ? "ok" : "failed") << "\n" << r.out;
    err << r.err;
    if (r.status != 0 && first_fail == 0) first_fail = r.status;
  }
  return first_fail;
}

}  // namespace clm::app
