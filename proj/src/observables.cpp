#include "sshchain/observables.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sshchain/error.hpp"
#include "sshchain/simd/kernels.hpp"

namespace sshchain {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kIllDefined = 1e-10;
}  // namespace

RestaOperator::RestaOperator(std::size_t n_cells) : cos_(n_cells), sin_(n_cells) {
  if (n_cells < 2) throw InvalidArgument("Resta polarization needs n_cells >= 2");
  const double delta = kTwoPi / static_cast<double>(n_cells);
  for (std::size_t m = 0; m < n_cells; ++m) {
    cos_[m] = std::cos(delta * static_cast<double>(m));
    sin_[m] = std::sin(delta * static_cast<double>(m));
  }
}

RestaPolarization RestaOperator::operator()(std::span<const double> amp) const {
  if (amp.size() != 2 * n_cells()) {
    throw InvalidArgument("amplitude vector does not match the chain length");
  }
  double re = 0.0;
  double im = 0.0;
  simd::active().phase_weighted_sum(amp.data(), cos_.data(), sin_.data(), n_cells(), &re, &im);

  RestaPolarization p;
  p.modulus = std::hypot(re, im);
  if (p.modulus < kIllDefined) {
    p.well_defined = false;
    p.phase = std::numeric_limits<double>::quiet_NaN();
    p.value = p.phase;
    return p;
  }
  p.phase = std::atan2(im, re);
  if (p.phase <= -std::numbers::pi) p.phase = std::numbers::pi;
  p.value = p.phase / kTwoPi;
  return p;
}

RestaPolarization resta_polarization(std::span<const double> amp, std::size_t n_cells) {
  return RestaOperator(n_cells)(amp);
}

RestaPolarization resta_polarization(const EigenState& state) {
  return resta_polarization(state.amplitudes, state.n_cells());
}

double schmidt_from_purity(const Eigen::Matrix2cd& rho) {
  return 1.0 / (rho * rho).trace().real();
}

double schmidt_from_bloch(const std::array<double, 3>& r) {
  return 2.0 / (1.0 + r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

double schmidt_from_amplitudes(std::span<const double> amp) {
  double sa = 0.0;
  double sb = 0.0;
  double ab = 0.0;
  for (std::size_t m = 0; m < amp.size() / 2; ++m) {
    sa += amp[2 * m] * amp[2 * m];
    sb += amp[2 * m + 1] * amp[2 * m + 1];
    ab += amp[2 * m] * amp[2 * m + 1];
  }
  return 1.0 / (sa * sa + sb * sb + 2.0 * ab * ab);
}

namespace {

ReducedAtomState from_rho(const Eigen::Matrix2cd& rho) {
  ReducedAtomState s;
  s.rho = rho;
  // rho = (I + r.sigma)/2  =>  rho_AB = (r_x - i r_y)/2.
  s.bloch = {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), (rho(0, 0) - rho(1, 1)).real()};
  s.schmidt_k = schmidt_from_purity(rho);
  return s;
}

}  // namespace

ReducedAtomState reduced_density_matrix(std::span<const double> amp) {
  if (amp.size() % 2 != 0) throw InvalidArgument("amplitude vector must have even length");
  const auto m = simd::active().sublattice_moments(amp.data(), amp.size() / 2);
  Eigen::Matrix2cd rho;
  rho << m.sum_a, m.overlap, m.overlap, m.sum_b;
  return from_rho(rho);
}

ReducedAtomState reduced_density_matrix(std::span<const std::complex<double>> amp) {
  if (amp.size() % 2 != 0) throw InvalidArgument("amplitude vector must have even length");
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (std::size_t m = 0; m < amp.size() / 2; ++m) {
    const std::complex<double> c[2] = {amp[2 * m], amp[2 * m + 1]};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) rho(a, b) += c[a] * std::conj(c[b]);
    }
  }
  return from_rho(rho);
}

ReducedAtomState reduced_density_matrix(const EigenState& state) {
  return reduced_density_matrix(std::span<const double>(state.amplitudes));
}

BellDiagnostic bell_conditions(std::span<const double> amp, double tol) {
  const auto m = simd::active().sublattice_moments(amp.data(), amp.size() / 2);
  BellDiagnostic d{m.sum_a, m.sum_b, m.overlap, false};
  d.is_hybrid_bell = std::abs(d.sum_a - 0.5) <= tol && std::abs(d.sum_b - 0.5) <= tol &&
                     std::abs(d.overlap) <= tol;
  return d;
}

DimerOracle dimer_oracle(DimerKind kind, int sign, std::size_t n_cells, std::size_t cell) {
  if (sign != 1 && sign != -1) throw InvalidArgument("dimer sign must be +1 or -1");
  const bool topo = kind == DimerKind::topological;
  if (cell >= n_cells || (topo && cell + 1 >= n_cells)) {
    throw InvalidArgument("dimer does not fit in the chain");
  }
  DimerOracle d;
  d.params = {n_cells, topo ? 0.0 : 1.0, topo ? 1.0 : 0.0, 0.0, Boundary::open};
  d.state.amplitudes.assign(2 * n_cells, 0.0);
  const double a = 1.0 / std::sqrt(2.0);
  if (topo) {
    d.state.amplitudes[BasisIndex{cell, Atom::B}.flat()] = a;
    d.state.amplitudes[BasisIndex{cell + 1, Atom::A}.flat()] = sign * a;
    d.expected_k = 2.0;
  } else {
    d.state.amplitudes[BasisIndex{cell, Atom::A}.flat()] = a;
    d.state.amplitudes[BasisIndex{cell, Atom::B}.flat()] = sign * a;
    d.expected_k = 1.0;
  }
  d.state.energy = static_cast<double>(sign);
  return d;
}

}  // namespace sshchain
