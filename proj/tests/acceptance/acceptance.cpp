// One line per acceptance criterion. Exit status is nonzero if any criterion
// fails, except those in kKnownUnattainable (see README, "Acceptance suite").

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "reference.hpp"
#include "sshchain/export.hpp"
#include "sshchain/kspace.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/observables.hpp"
#include "sshchain/phasescan.hpp"
#include "sshchain/spectrum.hpp"

using namespace sshchain;

namespace {

const std::set<int> kKnownUnattainable = {5};

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Verdict dimers() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  double dk = 0.0, de = 0.0;
  for (DimerKind kind : {DimerKind::trivial, DimerKind::topological}) {
    for (int sign : {1, -1}) {
      for (std::size_t cell : {0, 1, 2}) {
        const DimerOracle o = dimer_oracle(kind, sign, 4, cell);
        const double want = kind == DimerKind::trivial ? 1.0 : 2.0;
        dk = std::max(dk, std::abs(reduced_density_matrix(o.state).schmidt_k - want));
        dk = std::max(dk, std::abs(schmidt_from_amplitudes(o.state.amplitudes) - want));
        const Eigen::Map<const Eigen::VectorXd> x(o.state.amplitudes.data(),
                                                  static_cast<Eigen::Index>(o.state.amplitudes.size()));
        const Eigen::VectorXd hx = build_hamiltonian(o.params).dense() * x;
        de = std::max(de, (hx - double(sign) * x).cwiseAbs().maxCoeff());
      }
    }
  }
  const double t = seconds_since(t0);
  v.require(dk <= 1e-12, "K error " + fmt(dk));
  v.require(de <= 1e-12, "|H psi -+ psi| " + fmt(de));
  v.require(t < 1.0, "runtime " + fmt(t) + " s");
  v.detail = "K = 1 / 2 exact, E = +-1 exact";
  return v;
}

// N = 80, w = 0.5, z = 0, v over [0, 1] with 200 points.
PhaseScanResult psi_scan(std::size_t n) {
  SweepSpec s;
  s.fixed = {n, 0.0, 0.5, 0.0, Boundary::open};
  s.axes = {{AxisKind::v, 0.0, 1.0, 200}};
  s.states = {StateLabel::edge(), StateLabel::psi(1)};
  s.observables = {Observable::K, Observable::P};
  return run_sweep(s);
}

Verdict transition_scan(const PhaseScanResult& r, double seconds) {
  Verdict v;
  const std::size_t k_edge = r.column_index("K_edge"), k_psi1 = r.column_index("K_psi1");
  const auto& rec = r.records;
  double best = -1.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    if (std::abs(rec[i].axis_values[0] - 0.5) <= 0.02 && rec[i].values[k_psi1] > best) {
      best = rec[i].values[k_psi1];
      arg = i;
    }
  }
  const bool local_max = arg > 0 && arg + 1 < rec.size() &&
                         best >= rec[arg - 1].values[k_psi1] && best >= rec[arg + 1].values[k_psi1];
  v.require(best >= 1.9 && local_max, "K_psi1 local max " + fmt(best) + " at v = " +
                                          fmt(rec[arg].axis_values[0]));
  double edge_min = 3.0, high_max = 0.0;
  for (const auto& x : rec) {
    const double vv = x.axis_values[0];
    if (vv <= 0.45) edge_min = std::min(edge_min, std::isnan(x.values[k_edge]) ? 0.0 : x.values[k_edge]);
    if (vv >= 0.8) high_max = std::max(high_max, x.values[k_psi1]);
  }
  v.require(edge_min >= 1.95, "min K_edge for v <= 0.45: " + fmt(edge_min));
  v.require(high_max <= 1.2, "max K_psi1 for v >= 0.8: " + fmt(high_max));
  v.require(seconds < 60.0, "runtime " + fmt(seconds) + " s");
  v.detail = "peak " + fmt(best) + " at v = " + fmt(rec[arg].axis_values[0], 4);
  return v;
}

Verdict plateaus(const PhaseScanResult& r) {
  Verdict v;
  const std::size_t p = r.column_index("P_psi1");
  double worst_topo = 0.0, worst_triv = 0.0;
  for (const auto& x : r.records) {
    const double vv = x.axis_values[0], pv = std::abs(x.values[p]);
    if (vv <= 0.4) worst_topo = std::max(worst_topo, std::isnan(pv) ? 1.0 : std::abs(pv - 0.5));
    if (vv >= 0.6) worst_triv = std::max(worst_triv, std::isnan(pv) ? 1.0 : pv);
  }
  v.require(worst_topo <= 0.05, "max ||P| - 1/2| for v <= 0.4: " + fmt(worst_topo));
  v.require(worst_triv <= 0.05, "max |P| for v >= 0.6: " + fmt(worst_triv));

  const double samples[] = {0.1, 0.25, 0.4, 0.6, 0.9};
  std::vector<double> errors;
  std::string trend;
  for (std::size_t n : {40, 80, 120, 160}) {
    double err = 0.0;
    for (double vv : samples) {
      const Spectrum s = diagonalize(build_hamiltonian({n, vv, 0.5, 0.0, Boundary::open}));
      const double pv = std::abs(resta_polarization(s.state(StateLabel::psi(1))).value);
      err += vv < 0.5 ? std::abs(pv - 0.5) : pv;
    }
    errors.push_back(err / 5.0);
    trend += (trend.empty() ? "" : " > ") + fmt(err / 5.0, 3);
  }
  bool shrinking = true;
  for (std::size_t i = 1; i < errors.size(); ++i) shrinking = shrinking && errors[i] < errors[i - 1];
  v.require(shrinking, "mean plateau error N = 40, 80, 120, 160: " + trend);
  v.detail = "plateau errors " + fmt(worst_topo) + " / " + fmt(worst_triv);
  return v;
}

Verdict winding() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0, agree = 0;
  while (tested < 200) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a - (b + c)) < 0.02 || std::abs(b - c) < 0.02) continue;
    ++tested;
    const WindingResult x = winding_analytic(a, b, c);
    const WindingResult y = winding_numeric(a, b, c, 1024);
    if (x.ok() && y.ok() && x.zeta == y.zeta) ++agree;
  }
  const double t = seconds_since(t0);
  v.require(agree == tested, std::to_string(agree) + "/" + std::to_string(tested) + " agree");
  v.require(t < 5.0, "runtime " + fmt(t) + " s");
  v.detail = std::to_string(agree) + "/" + std::to_string(tested);
  return v;
}

// N = 100, v = 0.4, w/v and z/v over [0, 3] at 100 x 100.
Verdict critical_lines() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr double kV = 0.4;
  SweepSpec s;
  s.fixed = {100, kV, 0.0, 0.0, Boundary::open};
  s.axes = {{AxisKind::w_over_v, 0.0, 3.0, 100}, {AxisKind::z_over_v, 0.0, 3.0, 100}};
  s.states = {StateLabel::psi(1)};
  s.observables = {Observable::K, Observable::P, Observable::zeta_numeric};
  const PhaseScanResult r = diagram(s);
  const double t = seconds_since(t0);
  const Eigen::MatrixXd K = r.matrix("K_psi1");
  const Eigen::MatrixXd P = r.matrix("P_psi1");
  const Eigen::MatrixXd Z = r.matrix("zeta_numeric");
  const auto n = static_cast<Eigen::Index>(s.axes[0].n_points);
  const double h = (s.axes[0].max - s.axes[0].min) / static_cast<double>(n - 1);
  auto ratio = [&](Eigen::Index i) { return s.axes[0].value(static_cast<std::size_t>(i)); };

  // Plateau classification and boundary placement of a map of polarizations.
  auto analyse = [&](const Eigen::MatrixXd& m, const std::string& name, bool enforce) {
    const double levels[] = {-0.5, 0.0, 0.5};
    Eigen::MatrixXi cls(n, n);
    std::size_t counts[3] = {0, 0, 0}, unclassified = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        cls(i, j) = -1;
        for (int c = 0; c < 3; ++c) {
          if (std::abs(m(i, j) - levels[c]) <= 0.05) cls(i, j) = c;
        }
        if (cls(i, j) < 0) ++unclassified;
        else ++counts[cls(i, j)];
      }
    }
    const std::size_t total = static_cast<std::size_t>(n * n);
    const bool three = counts[0] > total / 20 && counts[1] > total / 20 && counts[2] > total / 20;
    // Lines in ratio units: w/v + z/v = 1 and w/v = z/v.
    auto near_line = [&](double a, double b) {
      return std::abs(a + b - 1.0) / std::sqrt(2.0) <= h || std::abs(a - b) / std::sqrt(2.0) <= h;
    };
    std::size_t edges = 0, misplaced = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
          Eigen::Index i2 = i + di, j2 = j + dj;
          // Step over a single unclassified (singular) cell sitting on a line.
          if (i2 < n && j2 < n && cls(i2, j2) < 0) {
            i2 += di;
            j2 += dj;
          }
          if (i2 >= n || j2 >= n || cls(i, j) < 0 || cls(i2, j2) < 0 || cls(i, j) == cls(i2, j2)) continue;
          ++edges;
          if (!near_line(0.5 * (ratio(i) + ratio(i2)), 0.5 * (ratio(j) + ratio(j2)))) ++misplaced;
        }
      }
    }
    // Both lines must actually separate plateaus: sample across w = z and across v = w + z.
    std::size_t diag_total = 0, diag_split = 0;
    for (Eigen::Index i = 0; i + 2 < n; ++i) {
      const Eigen::Index j = i + 2;  // (i, j) below, (j, i) above the diagonal
      if (ratio(i) + ratio(j) < 1.0 + 0.25) continue;
      ++diag_total;
      if (cls(i, j) >= 0 && cls(j, i) >= 0 && cls(i, j) != cls(j, i)) ++diag_split;
    }
    const bool sep_diag = diag_total > 0 && diag_split == diag_total;
    const std::string summary = name + " plateaus {-1/2, 0, +1/2}: " + std::to_string(counts[0]) +
                                " / " + std::to_string(counts[1]) + " / " + std::to_string(counts[2]) +
                                " points, " + std::to_string(unclassified) + " unclassified";
    const std::string bsum = name + " boundary edges off both lines by more than one cell: " +
                             std::to_string(misplaced) + "/" + std::to_string(edges) +
                             "; w = z separates plateaus at " + std::to_string(diag_split) + "/" +
                             std::to_string(diag_total) + " samples";
    if (enforce) {
      v.require(three && unclassified == 0, summary);
      v.require(misplaced == 0 && sep_diag, bsum);
    } else {
      v.notes.push_back(std::string("info ") + summary);
      v.notes.push_back(std::string("info ") + bsum);
    }
  };
  analyse(P, "P_psi1", true);
  Eigen::MatrixXd half_zeta = Z / 2.0;
  analyse(half_zeta, "zeta/2", false);

  // K local minimum across the w = z seam inside the topological region.
  std::size_t seam_total = 0, seam_min = 0;
  for (Eigen::Index i = 3; i + 3 < n; ++i) {
    if (2.0 * ratio(i) < 1.0 + 0.25) continue;
    ++seam_total;
    const double c = K(i, i);
    bool is_min = true;
    for (Eigen::Index d = 1; d <= 3; ++d) is_min = is_min && c < K(i - d, i + d) && c < K(i + d, i - d);
    if (is_min) ++seam_min;
  }
  v.require(seam_total > 0 && seam_min == seam_total,
            "K_psi1 local minimum across w = z: " + std::to_string(seam_min) + "/" +
                std::to_string(seam_total) + " diagonal samples");

  // K >= 1.8 in the topological region away from both lines by 0.1 (hopping units).
  std::size_t region = 0, high = 0;
  double lowest = 3.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = kV * ratio(i), z = kV * ratio(j);
      if (!(kV < w + z)) continue;
      if (std::abs(w + z - kV) / std::sqrt(2.0) < 0.1 || std::abs(w - z) / std::sqrt(2.0) < 0.1) continue;
      ++region;
      if (K(i, j) >= 1.8) ++high;
      lowest = std::min(lowest, K(i, j));
    }
  }
  v.require(high == region, "K_psi1 >= 1.8 away from the lines: " + std::to_string(high) + "/" +
                                std::to_string(region) + " points, lowest " + fmt(lowest));
  v.require(t < 600.0, "runtime " + fmt(t) + " s");
  v.detail = "100 x 100 at N = 100 in " + fmt(t, 3) + " s";
  return v;
}

Verdict invariants() {
  Verdict v;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double pair = 0.0, resid = 0.0, bands = 0.0;
  constexpr std::size_t n = 40;
  for (int t = 0; t < 50; ++t) {
    const double a = u(rng), b = u(rng), c = u(rng);
    for (Boundary bc : {Boundary::open, Boundary::periodic}) {
      const auto h = build_hamiltonian({n, a, b, c, bc});
      const Spectrum s = diagonalize(h);
      for (Eigen::Index i = 0; i < 2 * Eigen::Index(n); ++i) {
        pair = std::max(pair, std::abs(s.eigenvalues(i) + s.eigenvalues(2 * n - 1 - i)));
      }
      resid = std::max(resid, max_residual(h, s));
      if (bc == Boundary::periodic) {
        std::vector<double> e;
        for (std::size_t j = 0; j < n; ++j) {
          double k = 2.0 * std::numbers::pi * double(j) / double(n);
          if (k > std::numbers::pi) k -= 2.0 * std::numbers::pi;
          const auto [lo, hi] = band_energy(a, b, c, k);
          e.push_back(lo);
          e.push_back(hi);
        }
        std::sort(e.begin(), e.end());
        for (std::size_t i = 0; i < 2 * n; ++i) {
          bands = std::max(bands, std::abs(e[i] - s.eigenvalues(static_cast<Eigen::Index>(i))));
        }
      }
    }
  }
  v.require(pair <= 1e-9, "max |E_i + E_{2N-1-i}| " + fmt(pair));
  v.require(resid <= 1e-8, "max residual " + fmt(resid));
  v.require(bands <= 1e-8, "max |E - eps(k_j)| " + fmt(bands));
  v.detail = "pairing " + fmt(pair, 2) + ", residual " + fmt(resid, 2) + ", bands " + fmt(bands, 2);
  return v;
}

Verdict schmidt_triangle() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  double spread = 0.0;
  bool bounded = true;
  const std::size_t sizes[] = {2, 5, 50};
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x(2 * sizes[t % 3]);
    double norm = 0.0;
    for (double& a : x) {
      a = g(rng);
      norm += a * a;
    }
    for (double& a : x) a /= std::sqrt(norm);
    const ReducedAtomState r = reduced_density_matrix(x);
    const double k1 = schmidt_from_purity(r.rho), k2 = schmidt_from_amplitudes(x),
                 k3 = schmidt_from_bloch(r.bloch);
    spread = std::max({spread, std::abs(k1 - k2), std::abs(k1 - k3), std::abs(k2 - k3)});
    for (double k : {k1, k2, k3}) bounded = bounded && k >= 1.0 && k <= 2.0;
  }
  v.require(spread <= 1e-12, "max spread " + fmt(spread));
  v.require(bounded, "1 <= K <= 2");
  v.detail = "spread " + fmt(spread, 2);
  return v;
}

Verdict brute_force() {
  Verdict v;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double de = 0.0, dk = 0.0, dp = 0.0;
  std::size_t states = 0, skipped = 0;
  for (std::size_t n : {2, 3}) {
    for (Boundary bc : {Boundary::open, Boundary::periodic}) {
      for (int t = 0; t < 50; ++t) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const auto ref = reference::jacobi(reference::hamiltonian(n, a, b, c, bc == Boundary::periodic));
        const Spectrum s = diagonalize(build_hamiltonian({n, a, b, c, bc}));
        for (std::size_t i = 0; i < 2 * n; ++i) {
          de = std::max(de, std::abs(s.eigenvalues(static_cast<Eigen::Index>(i)) - ref.values[i]));
          // Inside a degenerate eigenspace single-state K and P depend on the basis.
          const bool isolated = (i == 0 || ref.values[i] - ref.values[i - 1] > 1e-6) &&
                                (i + 1 == 2 * n || ref.values[i + 1] - ref.values[i] > 1e-6);
          if (!isolated) {
            ++skipped;
            continue;
          }
          ++states;
          const auto amp = s.amplitudes(i);
          dk = std::max(dk, std::abs(schmidt_from_amplitudes(amp) - reference::schmidt(ref.vectors[i])));
          const RestaPolarization p = resta_polarization(amp, n);
          if (p.well_defined) dp = std::max(dp, reference::circle_distance(p.value, reference::resta(ref.vectors[i])));
        }
      }
    }
  }
  v.require(de <= 1e-10, "spectrum " + fmt(de));
  v.require(dk <= 1e-10, "K " + fmt(dk));
  v.require(dp <= 1e-10, "P " + fmt(dp));
  v.notes.push_back("info " + std::to_string(states) + " states compared, " + std::to_string(skipped) +
                    " in degenerate eigenspaces (periodic N = 3) compared by energy only");
  v.detail = "dE " + fmt(de, 2) + ", dK " + fmt(dk, 2) + ", dP " + fmt(dp, 2);
  return v;
}

Verdict determinism() {
  Verdict v;
  auto render = [](std::size_t workers) {
    SweepSpec a;
    a.fixed = {40, 0.0, 0.5, 0.0, Boundary::open};
    a.axes = {{AxisKind::v, 0.0, 1.0, 64}};
    a.states = {StateLabel::edge(), StateLabel::psi(1), StateLabel::psi(20)};
    a.observables = {Observable::K, Observable::P, Observable::gap, Observable::zeta_numeric,
                     Observable::bell};
    a.workers = workers;
    SweepSpec b;
    b.fixed = {30, 0.4, 0.0, 0.0, Boundary::open};
    b.axes = {{AxisKind::w_over_v, 0.0, 3.0, 16}, {AxisKind::z_over_v, 0.0, 3.0, 16}};
    b.states = {StateLabel::psi(1)};
    b.observables = {Observable::K, Observable::P, Observable::zeta_analytic};
    b.workers = workers;
    const PhaseScanResult ra = run_sweep(a), rb = diagram(b);
    std::string out = io::to_csv(io::scan_table(ra), 17) + io::to_json(io::scan_table(ra), 12) +
                      io::to_csv(io::scan_table(rb), 12);
    for (const auto& col : rb.columns) out += io::matrix_csv(rb, col, 12);
    return out;
  };
  const std::string one = render(1);
  for (std::size_t w : {4, 8}) {
    v.require(render(w) == one, "workers " + std::to_string(w) + " byte-identical to workers 1");
  }
  v.detail = std::to_string(one.size()) + " bytes, workers 1 / 4 / 8";
  return v;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  // Criteria 2 and 3 share one scan.
  std::optional<PhaseScanResult> scan;
  auto psi80 = [&]() -> const PhaseScanResult& {
    if (!scan) scan = psi_scan(80);
    return *scan;
  };
  const std::vector<Item> items = {
      {1, "dimer oracles", dimers},
      {2, "simple SSH transition (K scan)", [&] {
         const auto t0 = std::chrono::steady_clock::now();
         const PhaseScanResult& r = psi80();
         return transition_scan(r, seconds_since(t0));
       }},
      {3, "polarization plateaus", [&] { return plateaus(psi80()); }},
      {4, "winding analytic vs numeric", winding},
      {5, "extended-model critical lines", critical_lines},
      {6, "chirality and spectral invariants", invariants},
      {7, "Schmidt consistency triangle", schmidt_triangle},
      {8, "brute-force equivalence N = 2, 3", brute_force},
      {9, "determinism across worker counts", determinism},
  };
  int unexpected = 0, failed = 0;
  for (const auto& item : items) {
    Verdict v;
    try {
      v = item.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("threw: ") + e.what();
    }
    const bool known = kKnownUnattainable.contains(item.id);
    std::printf("%s  %d  %s: %s%s\n", v.pass ? "PASS" : "FAIL", item.id, item.name, v.detail.c_str(),
                !v.pass && known ? "  [known, see README]" : "");
    for (const auto& note : v.notes) std::printf("        %s\n", note.c_str());
    std::fflush(stdout);
    if (!v.pass) {
      ++failed;
      if (!known) ++unexpected;
    }
  }
  std::printf("%d/%zu criteria pass\n", int(items.size()) - failed, items.size());
  return unexpected == 0 ? 0 : 1;
}
