#include "sshchain/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "sshchain/kspace.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/observables.hpp"
#include "sshchain/simd/kernels.hpp"
#include "sshchain/spectrum.hpp"

namespace sshchain {

namespace {

using Rng = std::mt19937_64;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// The chain as the checks see it; the fault fixture flips z here only.
HamiltonianMatrix chain(ChainParams p, const SelfTestOptions& opts) {
  if (opts.inject_z_sign_error) p.z = -p.z;
  return build_hamiltonian(p);
}

std::vector<double> random_state(Rng& rng, std::size_t n_cells) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(2 * n_cells);
  double norm = 0.0;
  for (double& a : x) {
    a = g(rng);
    norm += a * a;
  }
  for (double& a : x) a /= std::sqrt(norm);
  return x;
}

CheckResult check_dimer(DimerKind kind, const SelfTestOptions& opts) {
  CheckResult r{kind == DimerKind::trivial ? "dimer_trivial" : "dimer_topological", true, ""};
  double worst_k = 0.0;
  double worst_res = 0.0;
  for (int sign : {+1, -1}) {
    const DimerOracle o = dimer_oracle(kind, sign);
    const auto& a = o.state.amplitudes;
    worst_k = std::max(worst_k, std::abs(schmidt_from_amplitudes(a) - o.expected_k));
    worst_k = std::max(worst_k, std::abs(reduced_density_matrix(o.state).schmidt_k - o.expected_k));
    const HamiltonianMatrix h = chain(o.params, opts);
    std::vector<double> y(a.size());
    h.apply(a.data(), y.data());
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst_res = std::max(worst_res, std::abs(y[i] - o.state.energy * a[i]));
    }
  }
  r.passed = worst_k <= 1e-12 && worst_res <= 1e-12;
  r.detail = "max |K - K_exact| = " + fmt(worst_k) + ", max |H psi - E psi| = " + fmt(worst_res);
  return r;
}

CheckResult check_chiral(const SelfTestOptions& opts) {
  CheckResult r{"chiral_symmetry", true, ""};
  Rng rng(opts.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_anti = 0.0;
  double worst_pair = 0.0;
  for (int t = 0; t < 20; ++t) {
    const ChainParams p{static_cast<std::size_t>(3 + t % 9), u(rng), u(rng), u(rng),
                        t % 2 ? Boundary::periodic : Boundary::open};
    const HamiltonianMatrix h = chain(p, opts);
    const auto gamma = chiral_operator(p.n_cells);
    const Eigen::MatrixXd anti = gamma * h.dense() * gamma + h.dense();
    worst_anti = std::max(worst_anti, anti.cwiseAbs().maxCoeff());
    const Spectrum s = diagonalize(h);
    const auto n = static_cast<Eigen::Index>(s.dimension());
    for (Eigen::Index i = 0; i < n; ++i) {
      worst_pair = std::max(worst_pair, std::abs(s.eigenvalues(i) + s.eigenvalues(n - 1 - i)));
    }
  }
  r.passed = worst_anti == 0.0 && worst_pair <= 1e-9;
  r.detail = "max |GHG + H| = " + fmt(worst_anti) + ", max |E_i + E_{2N-1-i}| = " + fmt(worst_pair);
  return r;
}

CheckResult check_winding_property(const SelfTestOptions& opts) {
  CheckResult r{"winding_analytic_vs_numeric", true, ""};
  Rng rng(opts.seed + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  int mismatches = 0;
  while (tested < 200) {
    const double v = u(rng), w = u(rng), z = u(rng);
    if (std::abs(v - (w + z)) < 0.02 || std::abs(w - z) < 0.02) continue;
    ++tested;
    const WindingResult a = winding_analytic(v, w, z);
    const WindingResult n = winding_numeric(v, w, z, 1024);
    if (!a.ok() || !n.ok() || a.zeta != n.zeta) ++mismatches;
  }
  r.passed = mismatches == 0;
  r.detail = std::to_string(tested - mismatches) + "/" + std::to_string(tested) + " agree";
  return r;
}

// h(k) read off the periodic real-space chain: T_d = H[(0,A),(d,B)] and
// h(k) = sum_d T_d e^{-ikd}, compared with the closed-form winding.
CheckResult check_winding_realspace(const SelfTestOptions& opts) {
  CheckResult r{"winding_consistency", true, ""};
  Rng rng(opts.seed + 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr std::size_t kCells = 8;
  constexpr std::size_t kSamples = 2048;
  int tested = 0;
  int mismatches = 0;
  while (tested < 50) {
    const double v = u(rng), w = u(rng), z = u(rng);
    if (std::abs(v - (w + z)) < 0.02 || std::abs(w - z) < 0.02) continue;
    ++tested;
    const HamiltonianMatrix h = chain({kCells, v, w, z, Boundary::periodic}, opts);
    std::vector<std::complex<double>> t(kCells);
    for (std::size_t d = 0; d < kCells; ++d) {
      t[d] = h.dense()(0, static_cast<Eigen::Index>(2 * d + 1));
    }
    double total = 0.0;
    std::complex<double> prev;
    for (std::size_t j = 0; j <= kSamples; ++j) {
      const double k = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                               static_cast<double>(kSamples);
      std::complex<double> hk = 0.0;
      for (std::size_t d = 0; d < kCells; ++d) {
        // Offsets past N/2 wrap to negative distances.
        const double dist = d <= kCells / 2 ? static_cast<double>(d)
                                             : static_cast<double>(d) - static_cast<double>(kCells);
        hk += t[d] * std::polar(1.0, -k * dist);
      }
      if (j > 0) total += std::arg(hk / prev);
      prev = hk;
    }
    const int zeta = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    const WindingResult a = winding_analytic(v, w, z);
    if (!a.ok() || a.zeta != zeta) ++mismatches;
  }
  r.passed = mismatches == 0;
  r.detail = std::to_string(tested - mismatches) + "/" + std::to_string(tested) + " agree";
  return r;
}

CheckResult check_schmidt_triangle(const SelfTestOptions& opts) {
  CheckResult r{"schmidt_triangle", true, ""};
  Rng rng(opts.seed + 3);
  double worst = 0.0;
  bool bounded = true;
  const std::size_t sizes[] = {2, 5, 50};
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_state(rng, sizes[t % 3]);
    const ReducedAtomState st = reduced_density_matrix(x);
    const double k1 = schmidt_from_purity(st.rho);
    const double k2 = schmidt_from_amplitudes(x);
    const double k3 = schmidt_from_bloch(st.bloch);
    worst = std::max({worst, std::abs(k1 - k2), std::abs(k1 - k3), std::abs(k2 - k3)});
    for (double k : {k1, k2, k3}) bounded = bounded && k >= 1.0 - 1e-12 && k <= 2.0 + 1e-12;
  }
  r.passed = worst <= 1e-12 && bounded;
  r.detail = "max spread = " + fmt(worst) + (bounded ? "" : ", K outside [1, 2]");
  return r;
}

// N = 2 open chain: H = [[0, M], [M^T, 0]] in sublattice order with
// M = [[v, z], [w, v]], so E = +-sigma(M) and each state is (u_A, +-u_B)/sqrt2
// built from the singular vectors.
CheckResult check_n2(const SelfTestOptions& opts) {
  CheckResult r{"n2_closed_form", true, ""};
  Rng rng(opts.seed + 4);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  double worst_e = 0.0;
  double worst_k = 0.0;
  double worst_p = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double v = u(rng), w = u(rng), z = u(rng);
    const double s = 2 * v * v + w * w + z * z;
    const double det = v * v - w * z;
    const double disc = std::sqrt(std::max(0.0, s * s - 4 * det * det));
    const double sig[2] = {std::sqrt((s + disc) / 2), std::sqrt(std::max(0.0, (s - disc) / 2))};
    if (disc < 1e-3 || sig[1] < 1e-3) continue;

    const Spectrum sp = diagonalize(chain({2, v, w, z, Boundary::open}, opts));
    for (int i = 0; i < 2; ++i) {
      // M^T M = [[v^2 + w^2, vz + wv], [vz + wv, z^2 + v^2]]: eigenvector for sigma_i^2.
      const double a = v * v + w * w, b = v * z + w * v, c = z * z + v * v;
      const double lam = sig[i] * sig[i];
      double bx = b, by = lam - a;
      if (std::abs(bx) + std::abs(by) < 1e-12) {
        bx = lam - c;
        by = b;
      }
      const double nb = std::hypot(bx, by);
      bx /= nb;
      by /= nb;
      const double ax = (v * bx + z * by) / sig[i];
      const double ay = (w * bx + v * by) / sig[i];
      // Interleaved |m, alpha>: A0, B0, A1, B1.
      const std::vector<double> psi = {ax / std::sqrt(2.0), bx / std::sqrt(2.0),
                                       ay / std::sqrt(2.0), by / std::sqrt(2.0)};
      const double k_ref = schmidt_from_amplitudes(psi);
      const double rho0 = psi[0] * psi[0] + psi[1] * psi[1];
      const double rho1 = psi[2] * psi[2] + psi[3] * psi[3];
      // <X> = rho0 - rho1 for N = 2, real: P is 0 or 1/2.
      const double p_ref = rho0 - rho1 > 0 ? 0.0 : 0.5;

      const std::size_t col = i == 0 ? 3 : 2;
      worst_e = std::max(worst_e, std::abs(sp.eigenvalues(static_cast<Eigen::Index>(col)) - sig[i]));
      worst_e = std::max(worst_e,
                         std::abs(sp.eigenvalues(static_cast<Eigen::Index>(3 - col)) + sig[i]));
      const auto amp = sp.amplitudes(col);
      worst_k = std::max(worst_k, std::abs(schmidt_from_amplitudes(amp) - k_ref));
      if (std::abs(rho0 - rho1) > 1e-6) {
        const RestaPolarization p = resta_polarization(amp, 2);
        worst_p = std::max(worst_p, std::abs(p.value - p_ref));
      }
    }
  }
  r.passed = worst_e <= 1e-10 && worst_k <= 1e-10 && worst_p <= 1e-10;
  r.detail = "max dE = " + fmt(worst_e) + ", dK = " + fmt(worst_k) + ", dP = " + fmt(worst_p);
  return r;
}

CheckResult check_simd(const SelfTestOptions& opts) {
  CheckResult r{"simd_equivalence", true, ""};
  const simd::KernelTable& ref = simd::table(simd::Isa::scalar);
  std::string tested;
  double worst = 0.0;
  Rng rng(opts.seed + 5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (simd::Isa isa : {simd::Isa::avx2, simd::Isa::neon}) {
    if (!simd::available(isa)) continue;
    const simd::KernelTable& k = simd::table(isa);
    tested += (tested.empty() ? "" : ",") + std::string(simd::to_string(isa));
    for (std::size_t n : {1, 2, 3, 4, 5, 7, 16, 33}) {
      std::vector<double> x(2 * n), y1(2 * n), y2(2 * n), c(n), s(n);
      for (double& a : x) a = u(rng);
      for (std::size_t m = 0; m < n; ++m) {
        c[m] = std::cos(0.3 * static_cast<double>(m));
        s[m] = std::sin(0.3 * static_cast<double>(m));
      }
      const auto m1 = ref.sublattice_moments(x.data(), n);
      const auto m2 = k.sublattice_moments(x.data(), n);
      worst = std::max({worst, std::abs(m1.sum_a - m2.sum_a), std::abs(m1.sum_b - m2.sum_b),
                        std::abs(m1.overlap - m2.overlap)});
      double re1, im1, re2, im2;
      ref.phase_weighted_sum(x.data(), c.data(), s.data(), n, &re1, &im1);
      k.phase_weighted_sum(x.data(), c.data(), s.data(), n, &re2, &im2);
      worst = std::max({worst, std::abs(re1 - re2), std::abs(im1 - im2)});
      for (bool periodic : {false, true}) {
        const simd::ChainHoppings hop{u(rng), u(rng), u(rng), periodic};
        ref.chain_apply(hop, x.data(), y1.data(), n);
        k.chain_apply(hop, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < 2 * n; ++i) worst = std::max(worst, std::abs(y1[i] - y2[i]));
      }
      worst = std::max(worst, std::abs(ref.dot(x.data(), x.data(), 2 * n) -
                                       k.dot(x.data(), x.data(), 2 * n)));
      std::vector<double> hx1(2 * n), hy1(2 * n), hx2(2 * n), hy2(2 * n);
      std::vector<double> ck(2 * n), sk(2 * n);
      for (std::size_t j = 0; j < 2 * n; ++j) {
        const double kk = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(2 * n);
        ck[j] = std::cos(kk);
        sk[j] = std::sin(kk);
      }
      ref.bloch_samples(0.3, 0.5, 0.2, ck.data(), sk.data(), 2 * n, hx1.data(), hy1.data());
      k.bloch_samples(0.3, 0.5, 0.2, ck.data(), sk.data(), 2 * n, hx2.data(), hy2.data());
      std::vector<double> cr1(2 * n), dt1(2 * n), cr2(2 * n), dt2(2 * n);
      ref.loop_increments(hx1.data(), hy1.data(), 2 * n, cr1.data(), dt1.data());
      k.loop_increments(hx1.data(), hy1.data(), 2 * n, cr2.data(), dt2.data());
      for (std::size_t j = 0; j < 2 * n; ++j) {
        worst = std::max({worst, std::abs(hx1[j] - hx2[j]), std::abs(hy1[j] - hy2[j]),
                          std::abs(cr1[j] - cr2[j]), std::abs(dt1[j] - dt2[j])});
      }
    }
  }
  r.passed = worst <= 1e-12;
  r.detail = tested.empty() ? "no vector kernels on this CPU, scalar only"
                            : tested + " vs scalar, max diff = " + fmt(worst);
  return r;
}

}  // namespace

bool SelfTestReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult* SelfTestReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

SelfTestReport selftest(const SelfTestOptions& opts) {
  SelfTestReport report;
  auto run = [&](auto&& fn, const char* name) {
    try {
      report.checks.push_back(fn());
    } catch (const std::exception& e) {
      report.checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  run([&] { return check_dimer(DimerKind::trivial, opts); }, "dimer_trivial");
  run([&] { return check_dimer(DimerKind::topological, opts); }, "dimer_topological");
  run([&] { return check_chiral(opts); }, "chiral_symmetry");
  run([&] { return check_winding_property(opts); }, "winding_analytic_vs_numeric");
  run([&] { return check_winding_realspace(opts); }, "winding_consistency");
  run([&] { return check_schmidt_triangle(opts); }, "schmidt_triangle");
  run([&] { return check_n2(opts); }, "n2_closed_form");
  run([&] { return check_simd(opts); }, "simd_equivalence");
  return report;
}

}  // namespace sshchain
