#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace clm {

enum class ErrorCode {
  Usage,
  ConfigParse,
  ConfigUnknownKey,
  ConfigValue,
  PresetUnknown,
  NonFiniteInput,
  NoEquilibrium,
  InfeasibleInit,
  NonFiniteState,
  GridMismatch,
  OutOfRange,
  CsvParse,
  ChannelUnknown,
  Io,
};

/// Stable machine-parsable name printed by the CLI.
inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "E_USAGE";
    case ErrorCode::ConfigParse: return "E_CONFIG_PARSE";
    case ErrorCode::ConfigUnknownKey: return "E_CONFIG_UNKNOWN_KEY";
    case ErrorCode::ConfigValue: return "E_CONFIG_VALUE";
    case ErrorCode::PresetUnknown: return "E_PRESET_UNKNOWN";
    case ErrorCode::NonFiniteInput: return "E_NONFINITE_INPUT";
    case ErrorCode::NoEquilibrium: return "E_NO_EQUILIBRIUM";
    case ErrorCode::InfeasibleInit: return "E_INFEASIBLE_INIT";
    case ErrorCode::NonFiniteState: return "E_NONFINITE_STATE";
    case ErrorCode::GridMismatch: return "E_GRID_MISMATCH";
    case ErrorCode::OutOfRange: return "E_OUT_OF_RANGE";
    case ErrorCode::CsvParse: return "E_CSV_PARSE";
    case ErrorCode::ChannelUnknown: return "E_CHANNEL_UNKNOWN";
    case ErrorCode::Io: return "E_IO";
  }
  return "E_UNKNOWN";
}

/// Process exit status for a given error; 0 and 1 are never used for errors.
inline int exit_status(ErrorCode code) { return 2 + static_cast<int>(code); }

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clm
