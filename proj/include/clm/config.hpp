#pragma once

// JSON scenario documents.
//
// Top-level sections: mix, motor_a, motor_b, motor_c, dera, zip, elec,
// disturbance, initial, integrator, outputs. Every object rejects keys it
// does not know. Motor and DER_A sections start from a preset (by default
// the one named after the section, or dera_table3) and apply any parameter
// given by name on top of it; a bare string selects a preset unchanged.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clm/error.hpp"
#include "clm/presets.hpp"
#include "clm/simulation.hpp"

namespace clm::config {

using nlohmann::json;

struct OutputsConfig {
  std::string trajectory = "trajectory.csv";
  std::string summary = "summary.json";
  std::string binary;  // empty: no binary dump
  std::vector<std::string> channels;  // empty: every channel
  bool plots = true;  // per-component plot-ready CSVs

  friend bool operator==(const OutputsConfig&, const OutputsConfig&) = default;
};

struct ScenarioConfig {
  sim::Scenario scenario;
  sim::IntegratorConfig integrator;
  OutputsConfig outputs;
};

// ---------------------------------------------------------------------------
// Field tables

template <class T>
struct Field {
  const char* name;
  double T::*member;
};

template <class T>
struct IntField {
  const char* name;
  int T::*member;
};

inline const std::vector<Field<motor::MotorParams>>& motor_fields() {
  using M = motor::MotorParams;
  static const std::vector<Field<M>> f = {
      {"rs", &M::rs},   {"Ls", &M::Ls},     {"Lp", &M::Lp},   {"Lpp", &M::Lpp},
      {"Tp0", &M::Tp0}, {"Tpp0", &M::Tpp0}, {"H", &M::H},     {"A", &M::A},
      {"B", &M::B},     {"C0", &M::C0},     {"D", &M::D},     {"Etrq", &M::Etrq},
      {"p", &M::p},     {"q", &M::q},       {"omega0", &M::omega0}};
  return f;
}

inline const std::vector<Field<dera::DerAParams>>& dera_fields() {
  using D = dera::DerAParams;
  static const std::vector<Field<D>> f = {
      {"Trv", &D::Trv},     {"Tp", &D::Tp},       {"Tiq", &D::Tiq},     {"Vref0", &D::Vref0},
      {"Kqv", &D::Kqv},     {"Tg", &D::Tg},       {"Imax", &D::Imax},   {"dbd1", &D::dbd1},
      {"dbd2", &D::dbd2},   {"Tv", &D::Tv},       {"Vl0", &D::Vl0},     {"Vl1", &D::Vl1},
      {"Vh0", &D::Vh0},     {"Vh1", &D::Vh1},     {"tvl0", &D::tvl0},   {"tvl1", &D::tvl1},
      {"tvh0", &D::tvh0},   {"tvh1", &D::tvh1},   {"Vrfrac", &D::Vrfrac}, {"Trf", &D::Trf},
      {"Kpg", &D::Kpg},     {"Kig", &D::Kig},     {"Ddn", &D::Ddn},     {"Dup", &D::Dup},
      {"femax", &D::femax}, {"femin", &D::femin}, {"fdbd1", &D::fdbd1}, {"fdbd2", &D::fdbd2},
      {"Pmin", &D::Pmin},   {"Pmax", &D::Pmax},   {"Tpord", &D::Tpord}, {"dPmin", &D::dPmin},
      {"dPmax", &D::dPmax}, {"Iql1", &D::Iql1},   {"Iqh1", &D::Iqh1},   {"Xe", &D::Xe},
      {"Vpr", &D::Vpr},     {"fl", &D::fl},       {"fh", &D::fh},       {"tfl", &D::tfl},
      {"tfh", &D::tfh}};
  return f;
}

inline const std::vector<IntField<dera::DerAParams>>& dera_flag_fields() {
  using D = dera::DerAParams;
  static const std::vector<IntField<D>> f = {
      {"PfFlag", &D::PfFlag},       {"Freqflag", &D::Freqflag}, {"Vtripflag", &D::Vtripflag},
      {"Ftripflag", &D::Ftripflag}, {"PQflag", &D::PQflag},     {"typeflag", &D::typeflag}};
  return f;
}

inline const std::vector<Field<loads::ZipParams>>& zip_fields() {
  using Z = loads::ZipParams;
  static const std::vector<Field<Z>> f = {{"P0", &Z::P0}, {"Q0", &Z::Q0}, {"V0", &Z::V0},
                                          {"ap", &Z::ap}, {"bp", &Z::bp}, {"cp", &Z::cp},
                                          {"aq", &Z::aq}, {"bq", &Z::bq}, {"cq", &Z::cq}};
  return f;
}

inline const std::vector<Field<loads::ElecParams>>& elec_fields() {
  using E = loads::ElecParams;
  static const std::vector<Field<E>> f = {{"PE0", &E::PE0}, {"QE0", &E::QE0}, {"Vd1", &E::Vd1},
                                          {"Vd2", &E::Vd2}, {"alpha", &E::alpha}};
  return f;
}

inline const std::vector<Field<LoadMix>>& mix_fields() {
  static const std::vector<Field<LoadMix>> f = {
      {"motor_a", &LoadMix::motor_a},       {"motor_b", &LoadMix::motor_b},
      {"motor_c", &LoadMix::motor_c},       {"electronic", &LoadMix::electronic},
      {"zip", &LoadMix::zip},               {"der_scale", &LoadMix::der_scale},
      {"pbase_mva", &LoadMix::pbase_mva}};
  return f;
}

inline const std::vector<Field<PlaybackParams>>& playback_fields() {
  static const std::vector<Field<PlaybackParams>> f = {{"a", &PlaybackParams::a},
                                                       {"b", &PlaybackParams::b},
                                                       {"c", &PlaybackParams::c},
                                                       {"d", &PlaybackParams::d}};
  return f;
}

// ---------------------------------------------------------------------------
// Parsing helpers

namespace detail {

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigValue, path + ": expected an object");
}

inline void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& known) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw Error(ErrorCode::ConfigUnknownKey, path + "." + key + ": unknown key");
    }
  }
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw Error(ErrorCode::ConfigValue, path + ": expected a number");
  return v.get<double>();
}

inline int get_flag(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_boolean()) {
    throw Error(ErrorCode::ConfigValue, path + ": expected an integer flag");
  }
  return v.is_boolean() ? (v.get<bool>() ? 1 : 0) : v.get<int>();
}

inline std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw Error(ErrorCode::ConfigValue, path + ": expected a string");
  return v.get<std::string>();
}

template <class T>
std::set<std::string> names_of(const std::vector<Field<T>>& fields) {
  std::set<std::string> out;
  for (const auto& f : fields) out.insert(f.name);
  return out;
}

template <class T>
void apply_fields(const json& j, const std::string& path, T& target,
                  const std::vector<Field<T>>& fields) {
  for (const auto& f : fields) {
    if (j.contains(f.name)) target.*(f.member) = get_number(j.at(f.name), path + "." + f.name);
  }
}

template <class T>
void dump_fields(json& j, const T& source, const std::vector<Field<T>>& fields) {
  for (const auto& f : fields) j[f.name] = source.*(f.member);
}

inline sim::MotorSetup parse_motor(const json& j, const std::string& path) {
  sim::MotorSetup m;
  m.preset = path;
  if (j.is_string()) {
    m.preset = j.get<std::string>();
    m.params = presets::motor(m.preset);
    return m;
  }
  require_object(j, path);
  auto known = names_of(motor_fields());
  known.insert({"preset", "P0"});
  reject_unknown(j, path, known);
  if (j.contains("preset")) m.preset = get_string(j.at("preset"), path + ".preset");
  m.params = presets::motor(m.preset);
  apply_fields(j, path, m.params, motor_fields());
  if (j.contains("P0")) m.P0 = get_number(j.at("P0"), path + ".P0");
  return m;
}

inline sim::DerASetup parse_dera(const json& j, const std::string& path) {
  sim::DerASetup d;
  d.preset = "dera_table3";
  if (j.is_string()) {
    d.preset = j.get<std::string>();
    d.params = presets::der(d.preset);
    return d;
  }
  require_object(j, path);
  auto known = names_of(dera_fields());
  for (const auto& f : dera_flag_fields()) known.insert(f.name);
  known.insert({"preset", "Pgen0", "Qgen0"});
  reject_unknown(j, path, known);
  if (j.contains("preset")) d.preset = get_string(j.at("preset"), path + ".preset");
  d.params = presets::der(d.preset);
  apply_fields(j, path, d.params, dera_fields());
  for (const auto& f : dera_flag_fields()) {
    if (j.contains(f.name)) d.params.*(f.member) = get_flag(j.at(f.name), path + "." + f.name);
  }
  if (j.contains("Pgen0")) d.Pgen0 = get_number(j.at("Pgen0"), path + ".Pgen0");
  if (j.contains("Qgen0")) d.Qgen0 = get_number(j.at("Qgen0"), path + ".Qgen0");
  return d;
}

inline std::filesystem::path resolve(const std::string& file, const std::filesystem::path& base) {
  std::filesystem::path p(file);
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace detail

/// Reads a two-column (t, V) or three-column (t, V, F) CSV. A header row is
/// optional; lines starting with '#' are skipped.
inline SampledSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open series file");
  SampledSeries s;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::CsvParse, path.string() + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = sim::detail::split_csv_line(line);
    std::vector<double> vals;
    bool numeric = true;
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) {
        numeric = false;
        break;
      }
      vals.push_back(v);
    }
    if (!numeric) {
      if (s.t.empty() && width == 0) continue;  // header row
      fail("non-numeric field");
    }
    if (vals.size() != 2 && vals.size() != 3) fail("expected 2 or 3 columns");
    if (width == 0) width = vals.size();
    if (vals.size() != width) fail("inconsistent column count");
    s.t.push_back(vals[0]);
    s.v.push_back(vals[1]);
    if (width == 3) s.f.push_back(vals[2]);
  }
  try {
    s.validate(path.string());
  } catch (const Error& e) {
    throw Error(ErrorCode::CsvParse, e.what());
  }
  return s;
}

/// Parses a scenario document. Relative file names inside it are resolved
/// against `base_dir`.
inline ScenarioConfig parse(const json& doc, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  require_object(doc, "config");
  reject_unknown(doc, "config",
                 {"mix", "motor_a", "motor_b", "motor_c", "dera", "zip", "elec", "disturbance",
                  "initial", "integrator", "outputs"});
  ScenarioConfig cfg;
  sim::Scenario& sc = cfg.scenario;

  if (!doc.contains("mix")) throw Error(ErrorCode::ConfigValue, "mix: section is required");
  {
    const json& j = doc.at("mix");
    require_object(j, "mix");
    reject_unknown(j, "mix", names_of(mix_fields()));
    apply_fields(j, "mix", sc.mix, mix_fields());
  }
  if (doc.contains("motor_a")) sc.motor_a = parse_motor(doc.at("motor_a"), "motor_a");
  if (doc.contains("motor_b")) sc.motor_b = parse_motor(doc.at("motor_b"), "motor_b");
  if (doc.contains("motor_c")) sc.motor_c = parse_motor(doc.at("motor_c"), "motor_c");
  if (doc.contains("dera")) sc.dera = parse_dera(doc.at("dera"), "dera");
  if (doc.contains("zip")) {
    const json& j = doc.at("zip");
    require_object(j, "zip");
    reject_unknown(j, "zip", names_of(zip_fields()));
    loads::ZipParams z;
    apply_fields(j, "zip", z, zip_fields());
    sc.zip = z;
  }
  if (doc.contains("elec")) {
    const json& j = doc.at("elec");
    require_object(j, "elec");
    reject_unknown(j, "elec", names_of(elec_fields()));
    loads::ElecParams e;
    apply_fields(j, "elec", e, elec_fields());
    sc.elec = e;
  }
  // Components with a nonzero fraction get their default section.
  if (sc.mix.motor_a > 0.0 && !sc.motor_a) sc.motor_a = parse_motor(json::object(), "motor_a");
  if (sc.mix.motor_b > 0.0 && !sc.motor_b) sc.motor_b = parse_motor(json::object(), "motor_b");
  if (sc.mix.motor_c > 0.0 && !sc.motor_c) sc.motor_c = parse_motor(json::object(), "motor_c");
  if (sc.mix.der_scale > 0.0 && !sc.dera) sc.dera = parse_dera(json::object(), "dera");
  if (sc.mix.zip > 0.0 && !sc.zip) sc.zip = loads::ZipParams{};
  if (sc.mix.electronic > 0.0 && !sc.elec) sc.elec = loads::ElecParams{};

  if (doc.contains("disturbance")) {
    const json& j = doc.at("disturbance");
    const std::string path = "disturbance";
    require_object(j, path);
    const std::string type =
        j.contains("type") ? get_string(j.at("type"), path + ".type") : std::string("playback");
    if (type == "playback") {
      auto known = names_of(playback_fields());
      known.insert({"type", "shape", "frequency"});
      reject_unknown(j, path, known);
      PlaybackBus pb;
      apply_fields(j, path, pb.params, playback_fields());
      if (j.contains("shape")) {
        const std::string shape = get_string(j.at("shape"), path + ".shape");
        if (shape == "verbatim") {
          pb.shape = PlaybackShape::Verbatim;
        } else if (shape == "linear_ramp") {
          pb.shape = PlaybackShape::LinearRamp;
        } else {
          throw Error(ErrorCode::ConfigValue, path + ".shape: expected 'verbatim' or 'linear_ramp'");
        }
      }
      if (j.contains("frequency")) pb.frequency = get_number(j.at("frequency"), path + ".frequency");
      sc.bus = BusSignal(pb);
    } else if (type == "constant") {
      reject_unknown(j, path, {"type", "voltage", "frequency"});
      ConstantBus cb;
      if (j.contains("voltage")) cb.voltage = get_number(j.at("voltage"), path + ".voltage");
      if (j.contains("frequency")) cb.frequency = get_number(j.at("frequency"), path + ".frequency");
      sc.bus = BusSignal(cb);
    } else if (type == "series") {
      reject_unknown(j, path, {"type", "file", "t", "v", "f"});
      SeriesBus sb;
      if (j.contains("file")) {
        sb.source = get_string(j.at("file"), path + ".file");
        sb.series = read_series_csv(resolve(sb.source, base_dir));
      } else {
        auto vec = [&](const char* key) {
          std::vector<double> out;
          if (!j.contains(key)) return out;
          const json& a = j.at(key);
          if (!a.is_array()) throw Error(ErrorCode::ConfigValue, path + "." + key + ": expected an array");
          for (std::size_t i = 0; i < a.size(); ++i) {
            out.push_back(get_number(a[i], path + "." + key + "[" + std::to_string(i) + "]"));
          }
          return out;
        };
        sb.series.t = vec("t");
        sb.series.v = vec("v");
        sb.series.f = vec("f");
      }
      sc.bus = BusSignal(sb);
    } else {
      throw Error(ErrorCode::ConfigValue,
                  path + ".type: expected 'playback', 'constant' or 'series'");
    }
  } else {
    sc.bus = BusSignal(PlaybackBus{});
  }

  if (doc.contains("initial")) {
    const json& j = doc.at("initial");
    require_object(j, "initial");
    reject_unknown(j, "initial", {"voltage", "frequency"});
    if (j.contains("voltage")) sc.initial_voltage = get_number(j.at("voltage"), "initial.voltage");
    if (j.contains("frequency")) {
      sc.initial_frequency = get_number(j.at("frequency"), "initial.frequency");
    }
  }

  if (doc.contains("integrator")) {
    const json& j = doc.at("integrator");
    require_object(j, "integrator");
    reject_unknown(j, "integrator", {"method", "dt", "t_end", "record_every"});
    auto& ic = cfg.integrator;
    if (j.contains("method")) ic.method = sim::parse_method(get_string(j.at("method"), "integrator.method"));
    if (j.contains("dt")) ic.dt = get_number(j.at("dt"), "integrator.dt");
    if (j.contains("t_end")) ic.t_end = get_number(j.at("t_end"), "integrator.t_end");
    if (j.contains("record_every")) {
      const json& r = j.at("record_every");
      if (!r.is_number_integer() || r.get<long long>() < 1) {
        throw Error(ErrorCode::ConfigValue, "integrator.record_every: expected an integer >= 1");
      }
      ic.record_every = r.get<std::size_t>();
    }
  }

  if (doc.contains("outputs")) {
    const json& j = doc.at("outputs");
    require_object(j, "outputs");
    reject_unknown(j, "outputs", {"trajectory", "summary", "binary", "channels", "plots"});
    auto& o = cfg.outputs;
    if (j.contains("trajectory")) o.trajectory = get_string(j.at("trajectory"), "outputs.trajectory");
    if (j.contains("summary")) o.summary = get_string(j.at("summary"), "outputs.summary");
    if (j.contains("binary")) o.binary = get_string(j.at("binary"), "outputs.binary");
    if (j.contains("plots")) {
      if (!j.at("plots").is_boolean()) throw Error(ErrorCode::ConfigValue, "outputs.plots: expected a boolean");
      o.plots = j.at("plots").get<bool>();
    }
    if (j.contains("channels")) {
      const json& a = j.at("channels");
      if (!a.is_array()) throw Error(ErrorCode::ConfigValue, "outputs.channels: expected an array");
      for (const auto& c : a) o.channels.push_back(get_string(c, "outputs.channels[]"));
    }
  }

  sc.validate();
  cfg.integrator.validate();
  return cfg;
}

inline ScenarioConfig parse_text(const std::string& text, const std::filesystem::path& base_dir = {}) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, std::string("config: ") + e.what());
  }
  return parse(doc, base_dir);
}

inline ScenarioConfig load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_text(ss.str(), path.parent_path());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

/// Full, explicit document: every parameter is written out, so parsing the
/// result reproduces the same configuration field by field.
inline json serialize(const ScenarioConfig& cfg) {
  using namespace detail;
  const sim::Scenario& sc = cfg.scenario;
  json doc = json::object();
  json mix = json::object();
  dump_fields(mix, sc.mix, mix_fields());
  doc["mix"] = mix;

  auto motor_json = [](const sim::MotorSetup& m) {
    json j = json::object();
    j["preset"] = m.preset;
    j["P0"] = m.P0;
    dump_fields(j, m.params, motor_fields());
    return j;
  };
  if (sc.motor_a) doc["motor_a"] = motor_json(*sc.motor_a);
  if (sc.motor_b) doc["motor_b"] = motor_json(*sc.motor_b);
  if (sc.motor_c) doc["motor_c"] = motor_json(*sc.motor_c);
  if (sc.dera) {
    json j = json::object();
    j["preset"] = sc.dera->preset;
    j["Pgen0"] = sc.dera->Pgen0;
    j["Qgen0"] = sc.dera->Qgen0;
    dump_fields(j, sc.dera->params, dera_fields());
    for (const auto& f : dera_flag_fields()) j[f.name] = sc.dera->params.*(f.member);
    doc["dera"] = j;
  }
  if (sc.zip) {
    json j = json::object();
    dump_fields(j, *sc.zip, zip_fields());
    doc["zip"] = j;
  }
  if (sc.elec) {
    json j = json::object();
    dump_fields(j, *sc.elec, elec_fields());
    doc["elec"] = j;
  }

  json dist = json::object();
  if (const auto* pb = std::get_if<PlaybackBus>(&sc.bus.source())) {
    dist["type"] = "playback";
    dump_fields(dist, pb->params, playback_fields());
    dist["shape"] = pb->shape == PlaybackShape::Verbatim ? "verbatim" : "linear_ramp";
    dist["frequency"] = pb->frequency;
  } else if (const auto* cb = std::get_if<ConstantBus>(&sc.bus.source())) {
    dist["type"] = "constant";
    dist["voltage"] = cb->voltage;
    dist["frequency"] = cb->frequency;
  } else if (const auto* sb = std::get_if<SeriesBus>(&sc.bus.source())) {
    dist["type"] = "series";
    if (!sb->source.empty()) {
      dist["file"] = sb->source;
    } else {
      dist["t"] = sb->series.t;
      dist["v"] = sb->series.v;
      if (!sb->series.f.empty()) dist["f"] = sb->series.f;
    }
  }
  doc["disturbance"] = dist;

  if (sc.initial_voltage || sc.initial_frequency) {
    json j = json::object();
    if (sc.initial_voltage) j["voltage"] = *sc.initial_voltage;
    if (sc.initial_frequency) j["frequency"] = *sc.initial_frequency;
    doc["initial"] = j;
  }

  doc["integrator"] = {{"method", sim::method_name(cfg.integrator.method)},
                       {"dt", cfg.integrator.dt},
                       {"t_end", cfg.integrator.t_end},
                       {"record_every", cfg.integrator.record_every}};
  json out = json::object();
  out["trajectory"] = cfg.outputs.trajectory;
  out["summary"] = cfg.outputs.summary;
  if (!cfg.outputs.binary.empty()) out["binary"] = cfg.outputs.binary;
  out["channels"] = cfg.outputs.channels;
  out["plots"] = cfg.outputs.plots;
  doc["outputs"] = out;
  return doc;
}

inline bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  const auto& x = a.scenario;
  const auto& y = b.scenario;
  return x.mix == y.mix && x.motor_a == y.motor_a && x.motor_b == y.motor_b &&
         x.motor_c == y.motor_c && x.dera == y.dera && x.zip == y.zip && x.elec == y.elec &&
         x.bus == y.bus && x.initial_voltage == y.initial_voltage &&
         x.initial_frequency == y.initial_frequency && a.integrator == b.integrator &&
         a.outputs == b.outputs;
}

}  // namespace clm::config
