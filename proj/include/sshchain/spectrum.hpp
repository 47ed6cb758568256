#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sshchain/lattice.hpp"

namespace sshchain {

/// One normalized eigenvector in the |m, alpha> basis (amplitudes[2m + alpha]).
struct EigenState {
  std::vector<double> amplitudes;
  double energy = 0.0;

  std::size_t n_cells() const { return amplitudes.size() / 2; }
};

/// Names a state by its place in the sorted spectrum.
///
/// The positive branch of the sorted spectrum is E_0 <= E_1 <= ... <= E_{N-1};
/// psi(n) is the state at E_n, so psi(0) is the state closest to zero energy and
/// psi(1) is "the nearest state to the edge state". edge() aliases psi(0) when
/// that state passes the edge test. negative = true selects the chiral partner
/// at -E_n.
struct StateLabel {
  enum class Kind { edge, psi };

  Kind kind = Kind::psi;
  std::size_t n = 0;
  bool negative = false;

  static StateLabel edge(bool negative = false) { return {Kind::edge, 0, negative}; }
  static StateLabel psi(std::size_t n, bool negative = false) { return {Kind::psi, n, negative}; }

  /// "edge", "edge-", "psi1", "psi20-", ...
  std::string name() const;
  static StateLabel parse(std::string_view s);

  friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

enum class LabelStatus { ok, ambiguous };

/// Thresholds for calling the central pair of states an edge pair.
struct EdgeCriteria {
  /// Alternative to |E| < zero_tol: |E_0| <= in_gap_ratio * E_1 (isolated in the gap).
  double in_gap_ratio = 0.1;
  /// Minimum probability in the outer boundary_fraction of cells at each end.
  double min_boundary_weight = 0.6;
  double boundary_fraction = 0.125;
};

class StateLabels {
 public:
  LabelStatus status = LabelStatus::ok;
  std::size_t n_cells = 0;
  bool has_edge = false;
  /// Boundary weight of the psi(0) state.
  double boundary_weight = 0.0;
  /// Number of eigenvalues with |E| < zero_tol.
  std::size_t n_zero_modes = 0;

  /// Column index of the state, or nullopt if the label does not exist here
  /// (no edge pair, n out of range, or ambiguous labelling).
  std::optional<std::size_t> index(const StateLabel& label) const;

  /// Every positive-branch label in ascending energy, edge alias first if present.
  std::vector<std::pair<StateLabel, std::size_t>> positive_branch() const;
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending, length 2N
  Eigen::MatrixXd eigenvectors;  // column i belongs to eigenvalues(i)
  StateLabels labels;

  std::size_t n_cells() const { return static_cast<std::size_t>(eigenvalues.size()) / 2; }
  std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues.size()); }

  std::span<const double> amplitudes(std::size_t i) const {
    return {eigenvectors.col(static_cast<Eigen::Index>(i)).data(), dimension()};
  }
  EigenState state(std::size_t i) const;
  /// Throws InvalidArgument if the label is not available.
  EigenState state(const StateLabel& label) const;
};

struct DiagonalizeOptions {
  /// Zero-mode threshold relative to max |E|.
  double zero_tol_rel = 1e-6;
  /// Eigenvalues closer than this (relative to max |E|) are treated as degenerate.
  double degeneracy_tol_rel = 1e-9;
  EdgeCriteria edge;
  /// Check the residual of every eigenpair before returning.
  bool verify = true;
};

/// Symmetric eigendecomposition with a reproducible eigenbasis.
///
/// Eigenvectors inside degenerate subspaces are fixed independently of the
/// solver: a zero-mode pair becomes the chiral-hybridized combinations
/// (L +- R)/sqrt(2) of its sublattice-polarized parts, other degenerate clusters
/// are resolved by successively diagonalizing the projected bond operators
/// dH/dv, dH/dw, dH/dz (the weak-perturbation limit), with an in-order
/// projection of unit vectors as the last resort. Every column is then signed so
/// that its first largest-magnitude amplitude is positive.
///
/// Throws InvalidArgument for asymmetric input and NumericalError when the
/// solver does not converge or a residual exceeds 1e-8 max(1, |E|).
Spectrum diagonalize(const HamiltonianMatrix& h, const DiagonalizeOptions& opts = {});

/// Default zero threshold: 1e-6 * max |E|.
double default_zero_tol(const Spectrum& s);

StateLabels label_states(const Spectrum& s, double zero_tol, const EdgeCriteria& criteria = {});

/// Probability in the outer `fraction` of cells at both ends of the chain.
double boundary_weight(std::span<const double> amplitudes, double fraction);

/// Bulk gap: smallest positive eigenvalue, skipping the edge pair when present.
/// Requires N >= 2.
double energy_gap(const Spectrum& s);

/// max_i || H u_i - E_i u_i ||_2 / max(1, |E_i|).
double max_residual(const HamiltonianMatrix& h, const Spectrum& s);

}  // namespace sshchain
