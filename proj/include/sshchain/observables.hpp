#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sshchain/lattice.hpp"
#include "sshchain/spectrum.hpp"

namespace sshchain {

// ---------------------------------------------------------------------------
// Resta polarization
// ---------------------------------------------------------------------------

struct RestaPolarization {
  /// gamma / 2pi in (-1/2, 1/2], units of e with e = a = 1. NaN when ill-defined.
  double value = 0.0;
  /// gamma = Im ln <X>, principal branch (-pi, pi].
  double phase = 0.0;
  /// |<X>|, in [0, 1].
  double modulus = 0.0;
  /// False when |<X>| < 1e-10 and the phase carries no information.
  bool well_defined = true;
};

/// <X> = sum_m e^{i delta m} (|C^A_m|^2 + |C^B_m|^2), delta = 2pi/N, m = 0..N-1.
///
/// Holds the cos/sin tables for one chain length so sweeps can reuse them.
class RestaOperator {
 public:
  explicit RestaOperator(std::size_t n_cells);

  std::size_t n_cells() const { return cos_.size(); }
  RestaPolarization operator()(std::span<const double> amplitudes) const;

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// Requires n_cells >= 2 and amplitudes.size() == 2 n_cells.
RestaPolarization resta_polarization(std::span<const double> amplitudes, std::size_t n_cells);
RestaPolarization resta_polarization(const EigenState& state);

// ---------------------------------------------------------------------------
// Atom-qubit reduced state and Schmidt number
// ---------------------------------------------------------------------------

struct ReducedAtomState {
  /// rho[alpha][beta] = sum_m C^alpha_m conj(C^beta_m), alpha, beta in {A, B}.
  Eigen::Matrix2cd rho;
  /// r_i = Tr(rho sigma_i).
  std::array<double, 3> bloch{};
  /// 1 / Tr(rho^2), in [1, 2].
  double schmidt_k = 1.0;
};

ReducedAtomState reduced_density_matrix(std::span<const double> amplitudes);
ReducedAtomState reduced_density_matrix(std::span<const std::complex<double>> amplitudes);
ReducedAtomState reduced_density_matrix(const EigenState& state);

/// The three routes to K, kept separate so they can check each other.
double schmidt_from_purity(const Eigen::Matrix2cd& rho);            // 1 / Tr(rho^2)
double schmidt_from_bloch(const std::array<double, 3>& r);          // 2 / (1 + |r|^2)
double schmidt_from_amplitudes(std::span<const double> amplitudes);  // explicit C-sum formula

// ---------------------------------------------------------------------------
// Hybrid Bell diagnostics
// ---------------------------------------------------------------------------

struct BellDiagnostic {
  double sum_a = 0.0;    // <phi^A|phi^A>/2 = sum |C^A|^2
  double sum_b = 0.0;    // sum |C^B|^2
  double overlap = 0.0;  // sum C^A C^B
  bool is_hybrid_bell = false;
};

BellDiagnostic bell_conditions(std::span<const double> amplitudes, double tol = 0.05);

// ---------------------------------------------------------------------------
// Fully dimerized limits
// ---------------------------------------------------------------------------

enum class DimerKind { trivial, topological };

struct DimerOracle {
  EigenState state;
  double expected_k = 1.0;
  /// The dimerized chain for which state is an eigenvector with energy state.energy.
  ChainParams params;
};

/// Trivial: (|m,A> +- |m,B>)/sqrt2 at v=1, w=0, E = +-1, K = 1.
/// Topological: (|m,B> +- |m+1,A>)/sqrt2 at v=0, w=1, E = +-1, K = 2.
/// Embedded in an open chain of n_cells cells at cell m (m + 1 < n_cells for the
/// topological kind).
DimerOracle dimer_oracle(DimerKind kind, int sign, std::size_t n_cells = 4, std::size_t cell = 1);

}  // namespace sshchain
