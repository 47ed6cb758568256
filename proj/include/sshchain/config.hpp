#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sshchain/error.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/phasescan.hpp"
#include "sshchain/spectrum.hpp"

namespace sshchain::cli {

enum class Command { spectrum, polarization, schmidt, winding, bands, sweep, diagram, selftest };

std::string_view to_string(Command c);
Command parse_command(std::string_view s);

enum class Format { csv, json };

struct OutputSpec {
  /// Empty or "-" writes to stdout.
  std::string path;
  Format format = Format::csv;
  /// Significant digits, 6..17.
  int precision = 12;
  bool timestamp = true;
};

/// Everything one invocation needs. Defaults:
///   chain   n=40 v=0.3 w=0.5 z=0 boundary=open
///   output  stdout, csv, precision 12, timestamp on
///   sweep   states psi1, observables K,P, workers = hardware threads
///   winding/bands  nk=1024 (bands: 201 k points)
///   bell tolerance 0.05
struct RunConfig {
  Command command = Command::spectrum;
  ChainParams chain{40, 0.3, 0.5, 0.0, Boundary::open};
  std::optional<SweepSpec> sweep;
  OutputSpec output;
  std::size_t workers = 0;
  bool fast = false;
  std::size_t n_k = 1024;
  std::size_t band_points = 201;
  /// polarization/schmidt: restrict output to one state.
  std::optional<StateLabel> state;
  double bell_tol = 0.05;
};

/// Thrown for usage and configuration problems (exit code 1).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Thrown by parse_config for --help; what() is the usage text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv (argv[0] is skipped). A --config file is read first; flags
/// given on the command line override its values.
RunConfig parse_config(const std::vector<std::string>& args);

/// Flat INI text: [run] [chain] [sweep] [output] sections. Unknown sections or
/// keys are rejected by name. Values are returned as "section.key" pairs.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// "name:min:max:n", e.g. "v:0:1:200" or "z/v:0:3:100".
Axis parse_axis(std::string_view text);

}  // namespace sshchain::cli
