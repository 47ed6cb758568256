#include "sshchain/phasescan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "sshchain/error.hpp"
#include "sshchain/kspace.hpp"
#include "sshchain/observables.hpp"
#include "sshchain/simd/kernels.hpp"

namespace sshchain {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Target { v, w, z };

Target target_of(AxisKind k) {
  switch (k) {
    case AxisKind::v: return Target::v;
    case AxisKind::w:
    case AxisKind::w_over_v: return Target::w;
    case AxisKind::z:
    case AxisKind::z_over_v: return Target::z;
  }
  return Target::v;
}
}  // namespace

std::string_view to_string(AxisKind k) {
  switch (k) {
    case AxisKind::v: return "v";
    case AxisKind::w: return "w";
    case AxisKind::z: return "z";
    case AxisKind::w_over_v: return "w/v";
    case AxisKind::z_over_v: return "z/v";
  }
  return "?";
}

AxisKind parse_axis_kind(std::string_view s) {
  for (AxisKind k : {AxisKind::v, AxisKind::w, AxisKind::z, AxisKind::w_over_v,
                     AxisKind::z_over_v}) {
    if (s == to_string(k)) return k;
  }
  throw InvalidArgument("unknown axis '" + std::string(s) + "' (expected v, w, z, w/v or z/v)");
}

double Axis::value(std::size_t i) const {
  if (i + 1 == n_points) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(n_points - 1);
}

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::K: return "K";
    case Observable::P: return "P";
    case Observable::zeta_analytic: return "zeta_analytic";
    case Observable::zeta_numeric: return "zeta_numeric";
    case Observable::gap: return "gap";
    case Observable::bell: return "bell";
  }
  return "?";
}

Observable parse_observable(std::string_view s) {
  for (Observable o : {Observable::K, Observable::P, Observable::zeta_analytic,
                       Observable::zeta_numeric, Observable::gap, Observable::bell}) {
    if (s == to_string(o)) return o;
  }
  throw InvalidArgument("unknown observable '" + std::string(s) +
                        "' (expected K, P, zeta_analytic, zeta_numeric, gap or bell)");
}

bool is_per_state(Observable o) {
  return o == Observable::K || o == Observable::P || o == Observable::bell;
}

void SweepSpec::validate() const {
  fixed.validate();
  if (axes.empty() || axes.size() > 2) throw InvalidArgument("a sweep needs 1 or 2 axes");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Axis& a = axes[i];
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw InvalidArgument("axis " + a.name() + " has non-finite bounds");
    }
    if (a.n_points < 2) throw InvalidArgument("axis " + a.name() + " needs n_points >= 2");
    for (std::size_t j = 0; j < i; ++j) {
      if (target_of(axes[j].kind) == target_of(a.kind)) {
        throw InvalidArgument("conflicting axes " + axes[j].name() + " and " + a.name() +
                              " both set the same hopping");
      }
    }
  }
  if (observables.empty()) throw InvalidArgument("no observables requested");
  const bool per_state = std::any_of(observables.begin(), observables.end(), is_per_state);
  if (per_state && states.empty()) throw InvalidArgument("K, P and bell need at least one state");
  const bool needs_two = per_state || std::find(observables.begin(), observables.end(),
                                                Observable::gap) != observables.end();
  if (needs_two && fixed.n_cells < 2) throw InvalidArgument("observables need n_cells >= 2");
  for (const auto& s : states) {
    if (s.kind == StateLabel::Kind::psi && s.n >= fixed.n_cells) {
      throw InvalidArgument("state " + s.name() + " requires n_cells >= " +
                            std::to_string(s.n + 1));
    }
  }
  if (n_k < 64) throw InvalidArgument("n_k must be >= 64");
  if (!(bell_tol >= 0.0)) throw InvalidArgument("bell tolerance must be >= 0");
}

std::size_t SweepSpec::point_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.n_points;
  return n;
}

std::vector<double> SweepSpec::axis_values(std::size_t flat) const {
  std::vector<double> out(axes.size());
  for (std::size_t i = axes.size(); i-- > 0;) {
    out[i] = axes[i].value(flat % axes[i].n_points);
    flat /= axes[i].n_points;
  }
  return out;
}

ChainParams SweepSpec::params_at(std::span<const double> values) const {
  ChainParams p = fixed;
  // v first so that ratio axes scale the swept v.
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i].kind == AxisKind::v) p.v = values[i];
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    switch (axes[i].kind) {
      case AxisKind::v: break;
      case AxisKind::w: p.w = values[i]; break;
      case AxisKind::z: p.z = values[i]; break;
      case AxisKind::w_over_v: p.w = values[i] * p.v; break;
      case AxisKind::z_over_v: p.z = values[i] * p.v; break;
    }
  }
  return p;
}

std::vector<std::string> value_columns(const SweepSpec& spec) {
  std::vector<std::string> cols;
  for (Observable o : spec.observables) {
    if (is_per_state(o)) {
      for (const auto& s : spec.states) cols.push_back(std::string(to_string(o)) + "_" + s.name());
    } else {
      cols.emplace_back(to_string(o));
    }
  }
  return cols;
}

std::size_t PhaseScanResult::column_index(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("no column named '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

Eigen::MatrixXd PhaseScanResult::matrix(std::string_view column) const {
  if (metadata.axes.size() != 2) throw InvalidArgument("matrix layout needs exactly two axes");
  const std::size_t c = column_index(column);
  const auto rows = static_cast<Eigen::Index>(metadata.axes[0].n_points);
  const auto cols = static_cast<Eigen::Index>(metadata.axes[1].n_points);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = records[static_cast<std::size_t>(i * cols + j)].values[c];
    }
  }
  return m;
}

namespace {

void flag(std::string& status, std::string_view f) {
  if (!status.empty()) status += ';';
  status += f;
}

SweepRecord evaluate_point(const SweepSpec& spec, const RestaOperator* resta, std::size_t flat,
                           std::size_t n_columns) {
  SweepRecord rec;
  rec.axis_values = spec.axis_values(flat);
  rec.values.assign(n_columns, kNaN);
  const ChainParams p = spec.params_at(rec.axis_values);

  std::optional<Spectrum> spectrum;
  const bool needs_spectrum =
      std::any_of(spec.observables.begin(), spec.observables.end(),
                  [](Observable o) { return is_per_state(o) || o == Observable::gap; });
  if (needs_spectrum) {
    try {
      spectrum = diagonalize(build_hamiltonian(p));
      if (spectrum->labels.status == LabelStatus::ambiguous) {
        flag(rec.status, "labels_ambiguous");
      } else if (std::any_of(spec.observables.begin(), spec.observables.end(), is_per_state)) {
        for (const auto& label : spec.states) {
          if (!spectrum->labels.index(label)) flag(rec.status, "missing:" + label.name());
        }
      }
    } catch (const NumericalError&) {
      flag(rec.status, "numerical_failure");
    } catch (const InvalidArgument&) {
      flag(rec.status, "invalid_point");
    }
  }

  std::size_t col = 0;
  for (Observable o : spec.observables) {
    if (is_per_state(o)) {
      for (const auto& label : spec.states) {
        double& out = rec.values[col++];
        if (!spectrum) continue;
        const auto idx = spectrum->labels.index(label);
        if (!idx) continue;
        const auto amp = spectrum->amplitudes(*idx);
        switch (o) {
          case Observable::K: out = reduced_density_matrix(amp).schmidt_k; break;
          case Observable::P: {
            const auto pol = (*resta)(amp);
            out = pol.value;
            if (!pol.well_defined) flag(rec.status, "P_ill_defined:" + label.name());
            break;
          }
          case Observable::bell:
            out = bell_conditions(amp, spec.bell_tol).is_hybrid_bell ? 1.0 : 0.0;
            break;
          default: break;
        }
      }
      continue;
    }
    double& out = rec.values[col++];
    switch (o) {
      case Observable::zeta_analytic: {
        const auto r = winding_analytic(p.v, p.w, p.z);
        if (r.ok()) out = r.zeta;
        else flag(rec.status, "zeta_analytic_singular");
        break;
      }
      case Observable::zeta_numeric: {
        const auto r = winding_numeric(p.v, p.w, p.z, spec.n_k);
        if (r.ok()) out = r.zeta;
        else if (r.status == WindingStatus::singular) flag(rec.status, "zeta_numeric_singular");
        else flag(rec.status, "zeta_numeric_unresolved");
        break;
      }
      case Observable::gap:
        if (spectrum) out = energy_gap(*spectrum);
        break;
      default: break;
    }
  }
  if (rec.status.empty()) rec.status = "ok";
  return rec;
}

}  // namespace

PhaseScanResult run_sweep(const SweepSpec& spec) {
  spec.validate();

  PhaseScanResult result;
  result.metadata.chain = spec.fixed;
  result.metadata.axes = spec.axes;
  for (const auto& s : spec.states) result.metadata.states.push_back(s.name());
  for (auto o : spec.observables) result.metadata.observables.emplace_back(to_string(o));
  result.metadata.tool_version = std::string(kToolVersion);
  result.metadata.kernels = std::string(simd::to_string(simd::active().isa));
  result.columns = value_columns(spec);

  const std::size_t n_points = spec.point_count();
  result.records.resize(n_points);

  std::optional<RestaOperator> resta;
  if (spec.fixed.n_cells >= 2) resta.emplace(spec.fixed.n_cells);
  const RestaOperator* resta_ptr = resta ? &*resta : nullptr;

  std::size_t workers = spec.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n_points);

  std::atomic<std::size_t> next{0};
  const std::size_t n_columns = result.columns.size();
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n_points; i = next.fetch_add(1)) {
      try {
        result.records[i] = evaluate_point(spec, resta_ptr, i, n_columns);
      } catch (const std::exception&) {
        SweepRecord& rec = result.records[i];
        rec.axis_values = spec.axis_values(i);
        rec.values.assign(n_columns, kNaN);
        rec.status = "error";
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  return result;
}

PhaseScanResult diagram(const SweepSpec& spec) {
  if (spec.axes.size() != 2) throw InvalidArgument("diagram needs exactly two axes");
  return run_sweep(spec);
}

}  // namespace sshchain
