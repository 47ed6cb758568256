#include <cmath>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "sshchain/config.hpp"
#include "sshchain/export.hpp"
#include "sshchain/kspace.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/observables.hpp"
#include "sshchain/phasescan.hpp"
#include "sshchain/selftest.hpp"
#include "sshchain/simd/kernels.hpp"
#include "sshchain/spectrum.hpp"

using namespace sshchain;
using io::Cell;
using io::Table;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

Table base_table(const cli::RunConfig& cfg) {
  Table t;
  t.metadata["command"] = std::string(cli::to_string(cfg.command));
  t.metadata["tool_version"] = std::string(kToolVersion);
  t.metadata["kernels"] = std::string(simd::to_string(simd::active().isa));
  if (cfg.output.timestamp) t.metadata["timestamp"] = io::utc_timestamp();
  t.metadata["chain"] = io::chain_to_json(cfg.chain);
  return t;
}

std::string label_of(const StateLabels& labels, std::size_t i) {
  if (labels.status != LabelStatus::ok) return "";
  const std::size_t n = labels.n_cells;
  const bool negative = i < n;
  const std::size_t k = negative ? n - 1 - i : i - n;
  const StateLabel l = (k == 0 && labels.has_edge) ? StateLabel::edge(negative)
                                                    : StateLabel::psi(k, negative);
  return l.name();
}

// Positive-branch states, or the single --state.
std::vector<std::pair<std::string, std::size_t>> selected_states(const cli::RunConfig& cfg,
                                                                 const Spectrum& s) {
  std::vector<std::pair<std::string, std::size_t>> out;
  if (cfg.state) {
    const auto idx = s.labels.index(*cfg.state);
    if (!idx) throw InvalidArgument("state " + cfg.state->name() + " is not available here");
    out.emplace_back(cfg.state->name(), *idx);
    return out;
  }
  if (s.labels.status != LabelStatus::ok) {
    for (std::size_t i = s.n_cells(); i < s.dimension(); ++i) out.emplace_back("", i);
    return out;
  }
  for (const auto& [label, idx] : s.labels.positive_branch()) out.emplace_back(label.name(), idx);
  return out;
}

void add_label_metadata(Table& t, const Spectrum& s) {
  t.metadata["labels_status"] = s.labels.status == LabelStatus::ok ? "ok" : "ambiguous";
  t.metadata["has_edge"] = s.labels.has_edge;
  t.metadata["zero_modes"] = s.labels.n_zero_modes;
}

Table run_spectrum(const cli::RunConfig& cfg) {
  const Spectrum s = diagonalize(build_hamiltonian(cfg.chain));
  Table t = base_table(cfg);
  add_label_metadata(t, s);
  t.columns = {"index", "label", "energy"};
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    t.rows.push_back({Cell{static_cast<long long>(i)}, Cell{label_of(s.labels, i)},
                      Cell{s.eigenvalues(static_cast<Eigen::Index>(i))}});
  }
  return t;
}

Table run_polarization(const cli::RunConfig& cfg) {
  const Spectrum s = diagonalize(build_hamiltonian(cfg.chain));
  const RestaOperator resta(cfg.chain.n_cells);
  Table t = base_table(cfg);
  add_label_metadata(t, s);
  t.columns = {"label", "index", "energy", "P", "phase", "modulus", "well_defined"};
  for (const auto& [name, i] : selected_states(cfg, s)) {
    const RestaPolarization p = resta(s.amplitudes(i));
    t.rows.push_back({Cell{name}, Cell{static_cast<long long>(i)},
                      Cell{s.eigenvalues(static_cast<Eigen::Index>(i))}, Cell{p.value},
                      Cell{p.phase}, Cell{p.modulus},
                      Cell{std::string(p.well_defined ? "true" : "false")}});
  }
  return t;
}

Table run_schmidt(const cli::RunConfig& cfg) {
  const Spectrum s = diagonalize(build_hamiltonian(cfg.chain));
  Table t = base_table(cfg);
  add_label_metadata(t, s);
  t.metadata["bell_tol"] = cfg.bell_tol;
  t.columns = {"label", "index", "energy", "K",   "rho_AA", "rho_BB", "rho_AB",
               "r_x",   "r_y",   "r_z",    "sum_A", "sum_B",  "overlap", "hybrid_bell"};
  for (const auto& [name, i] : selected_states(cfg, s)) {
    const auto amp = s.amplitudes(i);
    const ReducedAtomState r = reduced_density_matrix(amp);
    const BellDiagnostic b = bell_conditions(amp, cfg.bell_tol);
    t.rows.push_back({Cell{name}, Cell{static_cast<long long>(i)},
                      Cell{s.eigenvalues(static_cast<Eigen::Index>(i))}, Cell{r.schmidt_k},
                      Cell{r.rho(0, 0).real()}, Cell{r.rho(1, 1).real()}, Cell{r.rho(0, 1).real()},
                      Cell{r.bloch[0]}, Cell{r.bloch[1]}, Cell{r.bloch[2]}, Cell{b.sum_a},
                      Cell{b.sum_b}, Cell{b.overlap},
                      Cell{std::string(b.is_hybrid_bell ? "true" : "false")}});
  }
  return t;
}

Table run_winding(const cli::RunConfig& cfg) {
  const auto& c = cfg.chain;
  Table t = base_table(cfg);
  t.metadata["n_k"] = cfg.n_k;
  t.columns = {"method", "status", "zeta", "berry_phase", "polarization", "raw", "residual", "n_k"};
  const WindingResult a = winding_analytic(c.v, c.w, c.z);
  const WindingResult n = winding_numeric(c.v, c.w, c.z, cfg.n_k);
  for (const auto* r : {&a, &n}) {
    const bool numeric = r->method == WindingMethod::numeric;
    t.rows.push_back({Cell{std::string(numeric ? "numeric" : "analytic")},
                      Cell{std::string(to_string(r->status))},
                      r->ok() ? Cell{static_cast<long long>(r->zeta)} : Cell{std::nan("")},
                      Cell{r->berry_phase}, Cell{r->polarization},
                      Cell{numeric ? r->raw : std::nan("")},
                      Cell{numeric ? r->residual : std::nan("")},
                      Cell{static_cast<long long>(r->n_k)}});
  }
  return t;
}

Table run_bands(const cli::RunConfig& cfg) {
  const auto& c = cfg.chain;
  Table t = base_table(cfg);
  t.columns = {"k", "eps_minus", "eps_plus", "hx", "hy", "phi"};
  const std::size_t n = cfg.band_points;
  for (std::size_t j = 0; j < n; ++j) {
    double k = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                       static_cast<double>(n - 1);
    if (j + 1 == n) k = std::numbers::pi;
    const auto [lo, hi] = band_energy(c.v, c.w, c.z, k);
    const BlochVector h = bloch_vector(c.v, c.w, c.z, k);
    t.rows.push_back({Cell{k}, Cell{lo}, Cell{hi}, Cell{h.hx}, Cell{h.hy}, Cell{h.phi}});
  }
  return t;
}

PhaseScanResult scan(const cli::RunConfig& cfg) {
  PhaseScanResult r = cfg.command == cli::Command::diagram ? diagram(*cfg.sweep)
                                                           : run_sweep(*cfg.sweep);
  if (cfg.output.timestamp) r.metadata.timestamp = io::utc_timestamp();
  return r;
}

std::string render(const cli::RunConfig& cfg, const Table& t) {
  return cfg.output.format == cli::Format::json ? io::to_json(t, cfg.output.precision)
                                                : io::to_csv(t, cfg.output.precision);
}

int run(const cli::RunConfig& cfg) {
  using cli::Command;
  switch (cfg.command) {
    case Command::spectrum: io::write_output(cfg.output, render(cfg, run_spectrum(cfg))); break;
    case Command::polarization:
      io::write_output(cfg.output, render(cfg, run_polarization(cfg)));
      break;
    case Command::schmidt: io::write_output(cfg.output, render(cfg, run_schmidt(cfg))); break;
    case Command::winding: io::write_output(cfg.output, render(cfg, run_winding(cfg))); break;
    case Command::bands: io::write_output(cfg.output, render(cfg, run_bands(cfg))); break;
    case Command::sweep: io::write_output(cfg.output, render(cfg, io::scan_table(scan(cfg)))); break;
    case Command::diagram: {
      const bool to_stdout = cfg.output.path.empty() || cfg.output.path == "-";
      if (cfg.output.format == cli::Format::json) {
        io::write_output(cfg.output, render(cfg, io::scan_table(scan(cfg))));
        break;
      }
      if (to_stdout) throw cli::ConfigError("diagram CSV output needs --out <path>");
      const PhaseScanResult r = scan(cfg);
      std::vector<std::pair<std::string, std::string>> files;
      for (const auto& col : r.columns) {
        files.emplace_back(io::sibling_path(cfg.output.path, col),
                           io::matrix_csv(r, col, cfg.output.precision));
      }
      io::write_files(files);
      for (const auto& f : files) std::cout << f.first << '\n';
      break;
    }
    case Command::selftest: {
      const SelfTestReport report = selftest();
      std::string text;
      std::size_t failed = 0;
      for (const auto& c : report.checks) {
        text += (c.passed ? "PASS " : "FAIL ") + c.name + "  " + c.detail + "\n";
        if (!c.passed) ++failed;
      }
      io::write_output(cfg.output, text);
      if (failed) {
        std::cerr << "error: selftest: " << failed << " of " << report.checks.size()
                  << " checks failed\n";
        return kNumerical;
      }
      break;
    }
  }
  return kOk;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  try {
    return run(cli::parse_config(args));
  } catch (const cli::HelpRequested& h) {
    std::cout << h.what();
    return kOk;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical: " << one_line(e.what()) << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "error: io: " << one_line(e.what()) << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return kUsage;
  }
}
