#pragma once

// Subcommands behind the clm_sim executable. Each returns a process exit
// status and never throws.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "clm/error.hpp"

namespace clm::app {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Verbosity from CLM_SIM_LOG (error, warn, info, debug); default warn.
inline LogLevel log_level_from_env() {
  const char* v = std::getenv("CLM_SIM_LOG");
  if (!v) return LogLevel::Warn;
  const std::string s(v);
  if (s == "error") return LogLevel::Error;
  if (s == "info") return LogLevel::Info;
  if (s == "debug") return LogLevel::Debug;
  return LogLevel::Warn;
}

class Logger {
 public:
  Logger(std::ostream& os, LogLevel level) : os_(os), level_(level) {}

  void log(LogLevel lvl, const std::string& msg) const {
    if (static_cast<int>(lvl) > static_cast<int>(level_)) return;
    static constexpr const char* kTags[] = {"error", "warn", "info", "debug"};
    os_ << "[" << kTags[static_cast<int>(lvl)] << "] " << msg << '\n';
  }
  void info(const std::string& msg) const { log(LogLevel::Info, msg); }
  void debug(const std::string& msg) const { log(LogLevel::Debug, msg); }
  void warn(const std::string& msg) const { log(LogLevel::Warn, msg); }

 private:
  std::ostream& os_;
  LogLevel level_;
};

/// "error: E_CODE: message" on one line.
inline int report(std::ostream& err, ErrorCode code, const std::string& message) {
  std::string line = message;
  for (char& c : line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  err << "error: " << error_code_name(code) << ": " << line << '\n';
  return exit_status(code);
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return report(err, e.code(), e.what());
  } catch (const std::exception& e) {
    return report(err, ErrorCode::Io, e.what());
  }
}

struct RunOptions {
  std::string config;
  std::string out_dir = ".";
  std::vector<std::string> channels;  // overrides outputs.channels when set
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<long long> seed;  // reserved; the models are deterministic
};

/// Runs one scenario and writes its artifacts into opts.out_dir.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Per-channel MSE of b against a. b is resampled onto a's grid when the
/// grids differ.
int compare(const std::string& path_a, const std::string& path_b,
            std::vector<std::string> channels, std::ostream& out, std::ostream& err);

/// `list`, or `show` with a preset name.
int preset(const std::string& action, const std::string& name, std::ostream& out,
           std::ostream& err);

/// Runs every config into out_dir/<config stem>/, in parallel. Messages are
/// printed in input order. Returns the first nonzero status, if any.
int batch(const std::vector<std::string>& configs, const RunOptions& common, std::ostream& out,
          std::ostream& err);

}  // namespace clm::app
