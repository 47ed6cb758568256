#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

namespace sshchain {

enum class Boundary { open, periodic };

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view s);

/// Finite SSH chain with intra-cell (v), inter-cell (w) and second-neighbour (z)
/// hopping. Hoppings are real, in energy units.
struct ChainParams {
  std::size_t n_cells = 1;
  double v = 0.0;
  double w = 0.0;
  double z = 0.0;
  Boundary boundary = Boundary::open;

  /// Throws InvalidArgument unless n_cells >= 1 and every hopping is finite.
  void validate() const;

  friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

enum class Atom { A = 0, B = 1 };

/// |m, alpha> with the cell-major flattening i = 2m + alpha.
struct BasisIndex {
  std::size_t cell = 0;
  Atom atom = Atom::A;

  constexpr std::size_t flat() const { return 2 * cell + static_cast<std::size_t>(atom); }
  static constexpr BasisIndex from_flat(std::size_t i) {
    return {i / 2, (i % 2 == 0) ? Atom::A : Atom::B};
  }

  friend constexpr bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Real symmetric 2N x 2N single-particle Hamiltonian.
///
/// Matrices built by build_hamiltonian() remember their ChainParams, which lets
/// downstream code apply H in O(N) through the structured chain kernel. Matrices
/// wrapped with from_dense() carry no parameters and always go through the dense
/// path.
class HamiltonianMatrix {
 public:
  static HamiltonianMatrix from_dense(Eigen::MatrixXd m);

  const Eigen::MatrixXd& dense() const { return dense_; }
  std::size_t dimension() const { return static_cast<std::size_t>(dense_.rows()); }
  std::size_t n_cells() const { return dimension() / 2; }
  const std::optional<ChainParams>& params() const { return params_; }

  bool is_symmetric() const;

  /// y = H x. Uses the structured chain kernel when the parameters are known.
  void apply(const double* x, double* y) const;

 private:
  friend HamiltonianMatrix build_hamiltonian(const ChainParams& params);
  HamiltonianMatrix(Eigen::MatrixXd m, std::optional<ChainParams> p)
      : dense_(std::move(m)), params_(p) {}

  Eigen::MatrixXd dense_;
  std::optional<ChainParams> params_;
};

HamiltonianMatrix build_hamiltonian(const ChainParams& params);

/// Sublattice operator diag(+1, -1, +1, -1, ...); anticommutes with every SSH Hamiltonian.
Eigen::DiagonalMatrix<double, Eigen::Dynamic> chiral_operator(std::size_t n_cells);

/// Bond operators dH/dv, dH/dw, dH/dz for the given geometry (hopping set to 1).
Eigen::MatrixXd bond_operator_v(std::size_t n_cells, Boundary b);
Eigen::MatrixXd bond_operator_w(std::size_t n_cells, Boundary b);
Eigen::MatrixXd bond_operator_z(std::size_t n_cells, Boundary b);

}  // namespace sshchain
