#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sshchain/lattice.hpp"
#include "sshchain/spectrum.hpp"

namespace sshchain {

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class AxisKind { v, w, z, w_over_v, z_over_v };

std::string_view to_string(AxisKind k);
AxisKind parse_axis_kind(std::string_view s);

/// Linear grid min + i (max - min)/(n_points - 1).
struct Axis {
  AxisKind kind = AxisKind::v;
  double min = 0.0;
  double max = 1.0;
  std::size_t n_points = 2;

  double value(std::size_t i) const;
  std::string name() const { return std::string(to_string(kind)); }

  friend bool operator==(const Axis&, const Axis&) = default;
};

enum class Observable { K, P, zeta_analytic, zeta_numeric, gap, bell };

std::string_view to_string(Observable o);
Observable parse_observable(std::string_view s);
/// K, P and bell are evaluated per requested state; the others once per point.
bool is_per_state(Observable o);

struct SweepSpec {
  ChainParams fixed;
  std::vector<Axis> axes;
  std::vector<StateLabel> states;
  std::vector<Observable> observables;
  /// 0 = one worker per hardware thread.
  std::size_t workers = 0;
  double bell_tol = 0.05;
  std::size_t n_k = 1024;

  /// Throws InvalidArgument describing the first problem found.
  void validate() const;
  std::size_t point_count() const;
  /// Axis values of point `flat` (row-major, first axis outermost).
  std::vector<double> axis_values(std::size_t flat) const;
  /// fixed with the axis values substituted.
  ChainParams params_at(std::span<const double> axis_values) const;
};

struct SweepRecord {
  std::vector<double> axis_values;
  /// One entry per PhaseScanResult::columns; NaN where unavailable.
  std::vector<double> values;
  /// "ok" or ';'-separated flags.
  std::string status;
};

struct ScanMetadata {
  ChainParams chain;
  std::vector<Axis> axes;
  std::vector<std::string> states;
  std::vector<std::string> observables;
  std::string tool_version;
  std::string kernels;
  std::optional<std::string> timestamp;

  friend bool operator==(const ScanMetadata&, const ScanMetadata&) = default;
};

struct PhaseScanResult {
  ScanMetadata metadata;
  std::vector<std::string> columns;
  std::vector<SweepRecord> records;

  /// Throws InvalidArgument for an unknown column.
  std::size_t column_index(std::string_view name) const;
  /// Values of one column on a two-axis grid: rows follow axes[0], columns axes[1].
  Eigen::MatrixXd matrix(std::string_view column) const;
};

/// Builds, diagonalizes, labels and measures every grid point. Points are
/// computed in parallel and written to preallocated row-major slots, so the
/// result does not depend on the worker count. Per-point failures are recorded
/// in the status field; only an invalid spec throws.
PhaseScanResult run_sweep(const SweepSpec& spec);

/// run_sweep restricted to two-axis specs, for heatmap export.
PhaseScanResult diagram(const SweepSpec& spec);

/// Value column names for a spec, in output order.
std::vector<std::string> value_columns(const SweepSpec& spec);

}  // namespace sshchain
