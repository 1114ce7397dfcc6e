#pragma once

// Sampled simulation output plus the comparison metrics and file formats.
//
// CSV: header row of channel names, time ("t") first, values printed with 17
// significant digits.
//
// Binary dump (all integers and floats little-endian):
//   8 bytes   magic "CLMTRJ01"
//   uint64    number of channels C
//   uint64    number of rows R
//   C times   uint32 name length, then the name bytes (no terminator)
//   R*C       float64 values, row-major

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "clm/error.hpp"

namespace clm::sim {

class Trajectory {
 public:
  Trajectory() = default;

  explicit Trajectory(std::vector<std::string> channels) : channels_(std::move(channels)) {
    if (channels_.empty() || channels_.front() != "t") {
      throw Error(ErrorCode::ChannelUnknown, "trajectory: first channel must be 't'");
    }
  }

  void append(std::span<const double> row) {
    if (row.size() != channels_.size()) {
      throw Error(ErrorCode::OutOfRange, "trajectory: row width does not match channel count");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }

  std::size_t rows() const { return channels_.empty() ? 0 : data_.size() / channels_.size(); }
  std::size_t cols() const { return channels_.size(); }
  const std::vector<std::string>& channels() const { return channels_; }

  std::optional<std::size_t> find(std::string_view name) const {
    const auto it = std::find(channels_.begin(), channels_.end(), name);
    if (it == channels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - channels_.begin());
  }

  std::size_t index(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw Error(ErrorCode::ChannelUnknown, "unknown channel '" + std::string(name) + "'");
  }

  double at(std::size_t row, std::size_t col) const { return data_[row * cols() + col]; }
  double& at(std::size_t row, std::size_t col) { return data_[row * cols() + col]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }

  std::vector<double> column(std::size_t col) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, col);
    return out;
  }
  std::vector<double> column(std::string_view name) const { return column(index(name)); }
  std::vector<double> time() const { return column(0); }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<std::string> channels_;
  std::vector<double> data_;
};

/// True when both trajectories sample the same instants.
inline bool same_grid(const Trajectory& a, const Trajectory& b) {
  if (a.rows() != b.rows()) return false;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double ta = a.at(r, 0);
    const double tb = b.at(r, 0);
    if (std::abs(ta - tb) > 1e-12 * std::max(1.0, std::abs(ta))) return false;
  }
  return true;
}

/// Mean over samples of the squared channel difference.
inline double mse(const Trajectory& a, const Trajectory& b, std::string_view channel) {
  if (!same_grid(a, b)) {
    throw Error(ErrorCode::GridMismatch, "mse: trajectories are sampled on different time grids");
  }
  const std::size_t ca = a.index(channel);
  const std::size_t cb = b.index(channel);
  if (a.rows() == 0) return 0.0;
  // Neumaier summation keeps long runs of near-equal terms accurate.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double e = a.at(r, ca) - b.at(r, cb);
    const double term = e * e;
    const double next = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  return (sum + comp) / static_cast<double>(a.rows());
}

/// Linear interpolation of every channel onto `grid`.
inline Trajectory resample(const Trajectory& traj, std::span<const double> grid) {
  const std::vector<double> t = traj.time();
  if (t.empty()) throw Error(ErrorCode::OutOfRange, "resample: empty trajectory");
  const double slack = 1e-12 * std::max(1.0, std::abs(t.back()));
  Trajectory out(traj.channels());
  std::vector<double> row(traj.cols());
  for (double g : grid) {
    if (g < t.front() - slack || g > t.back() + slack) {
      throw Error(ErrorCode::OutOfRange, "resample: grid point " + std::to_string(g) +
                                             " outside trajectory time range");
    }
    auto it = std::lower_bound(t.begin(), t.end(), g);
    std::size_t hi = static_cast<std::size_t>(it - t.begin());
    if (hi < t.size() && std::abs(t[hi] - g) <= slack) {
      const auto src = traj.row(hi);
      std::copy(src.begin(), src.end(), row.begin());
    } else if (hi == 0 || hi >= t.size()) {
      const auto src = traj.row(hi == 0 ? 0 : t.size() - 1);
      std::copy(src.begin(), src.end(), row.begin());
    } else {
      const std::size_t lo = hi - 1;
      const double w = (g - t[lo]) / (t[hi] - t[lo]);
      for (std::size_t c = 0; c < traj.cols(); ++c) {
        row[c] = traj.at(lo, c) + w * (traj.at(hi, c) - traj.at(lo, c));
      }
    }
    row[0] = g;
    out.append(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes the selected channels (all when `channels` is empty); time is
/// always the first column.
inline void write_csv(std::ostream& os, const Trajectory& traj,
                      const std::vector<std::string>& channels = {}) {
  std::vector<std::size_t> cols{0};
  if (channels.empty()) {
    for (std::size_t c = 1; c < traj.cols(); ++c) cols.push_back(c);
  } else {
    for (const auto& name : channels) {
      if (name == "t") continue;
      cols.push_back(traj.index(name));
    }
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << traj.channels()[cols[i]];
  }
  os << '\n';
  for (std::size_t r = 0; r < traj.rows(); ++r) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os << (i ? "," : "") << format_value(traj.at(r, cols[i]));
    }
    os << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace detail

/// Parses a trajectory CSV. Errors carry "source:line" context.
inline Trajectory read_csv(std::istream& is, const std::string& source = "<csv>") {
  auto fail = [&](std::size_t line, const std::string& what) -> void {
    throw Error(ErrorCode::CsvParse, source + ":" + std::to_string(line) + ": " + what);
  };
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = detail::split_csv_line(line);
    break;
  }
  if (header.empty()) fail(lineno, "missing header row");
  if (header.front() != "t") fail(lineno, "first column must be 't'");
  Trajectory traj(header);
  std::vector<double> row(header.size());
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) {
      fail(lineno, "expected " + std::to_string(header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const char* begin = cells[c].c_str();
      char* end = nullptr;
      row[c] = std::strtod(begin, &end);
      if (cells[c].empty() || end != begin + cells[c].size()) {
        fail(lineno, "field " + std::to_string(c + 1) + " is not a number: '" + cells[c] + "'");
      }
    }
    if (!(row[0] > last_t)) fail(lineno, "time must be strictly increasing");
    last_t = row[0];
    traj.append(row);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Binary dump

namespace detail {

inline constexpr char kMagic[8] = {'C', 'L', 'M', 'T', 'R', 'J', '0', '1'};

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorCode::Io, "binary trajectory: unexpected end of data");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace detail

inline void write_binary(std::ostream& os, const Trajectory& traj) {
  os.write(detail::kMagic, sizeof detail::kMagic);
  detail::put_le<std::uint64_t>(os, traj.cols());
  detail::put_le<std::uint64_t>(os, traj.rows());
  for (const auto& name : traj.channels()) {
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
  }
  for (double v : traj.data()) detail::put_le<double>(os, v);
}

inline Trajectory read_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, detail::kMagic, sizeof magic) != 0) {
    throw Error(ErrorCode::Io, "binary trajectory: bad magic");
  }
  const auto cols = detail::get_le<std::uint64_t>(is);
  const auto rows = detail::get_le<std::uint64_t>(is);
  std::vector<std::string> names;
  for (std::uint64_t c = 0; c < cols; ++c) {
    const auto len = detail::get_le<std::uint32_t>(is);
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw Error(ErrorCode::Io, "binary trajectory: truncated name");
    names.push_back(std::move(name));
  }
  Trajectory traj(std::move(names));
  std::vector<double> row(cols);
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (auto& v : row) v = detail::get_le<double>(is);
    traj.append(row);
  }
  return traj;
}

}  // namespace clm::sim
