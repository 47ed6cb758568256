#include "sshchain/lattice.hpp"

#include <cmath>
#include <string>

#include "sshchain/error.hpp"
#include "sshchain/simd/kernels.hpp"

namespace sshchain {

std::string_view to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

Boundary parse_boundary(std::string_view s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  throw InvalidArgument("unknown boundary '" + std::string(s) + "' (expected open|periodic)");
}

void ChainParams::validate() const {
  if (n_cells < 1) throw InvalidArgument("n_cells must be >= 1");
  if (!std::isfinite(v) || !std::isfinite(w) || !std::isfinite(z)) {
    throw InvalidArgument("hoppings v, w, z must be finite");
  }
}

namespace {

// Adds a Hermitian pair of couplings; += keeps short periodic chains (N <= 2),
// where two bonds can land on the same pair of sites, correct.
void couple(Eigen::MatrixXd& h, BasisIndex a, BasisIndex b, double t) {
  const auto i = static_cast<Eigen::Index>(a.flat());
  const auto j = static_cast<Eigen::Index>(b.flat());
  h(i, j) += t;
  h(j, i) += t;
}

enum class Bond { v, w, z };

void add_bonds(Eigen::MatrixXd& h, std::size_t n, Boundary boundary, Bond bond, double t) {
  if (t == 0.0) return;
  const bool periodic = boundary == Boundary::periodic;
  switch (bond) {
    case Bond::v:
      for (std::size_t m = 0; m < n; ++m) couple(h, {m, Atom::A}, {m, Atom::B}, t);
      break;
    case Bond::w:
      for (std::size_t m = 0; m + 1 < n; ++m) couple(h, {m, Atom::B}, {m + 1, Atom::A}, t);
      if (periodic) couple(h, {n - 1, Atom::B}, {0, Atom::A}, t);
      break;
    case Bond::z:
      for (std::size_t m = 0; m + 1 < n; ++m) couple(h, {m, Atom::A}, {m + 1, Atom::B}, t);
      if (periodic) couple(h, {n - 1, Atom::A}, {0, Atom::B}, t);
      break;
  }
}

Eigen::MatrixXd bond_matrix(std::size_t n, Boundary b, Bond bond) {
  if (n < 1) throw InvalidArgument("n_cells must be >= 1");
  const auto dim = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  add_bonds(h, n, b, bond, 1.0);
  return h;
}

}  // namespace

HamiltonianMatrix build_hamiltonian(const ChainParams& p) {
  p.validate();
  const auto dim = static_cast<Eigen::Index>(2 * p.n_cells);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  add_bonds(h, p.n_cells, p.boundary, Bond::v, p.v);
  add_bonds(h, p.n_cells, p.boundary, Bond::w, p.w);
  add_bonds(h, p.n_cells, p.boundary, Bond::z, p.z);
  return HamiltonianMatrix(std::move(h), p);
}

HamiltonianMatrix HamiltonianMatrix::from_dense(Eigen::MatrixXd m) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
    throw InvalidArgument("Hamiltonian must be square with even, nonzero dimension");
  }
  return HamiltonianMatrix(std::move(m), std::nullopt);
}

bool HamiltonianMatrix::is_symmetric() const { return dense_ == dense_.transpose(); }

void HamiltonianMatrix::apply(const double* x, double* y) const {
  if (params_) {
    const simd::ChainHoppings hop{params_->v, params_->w, params_->z,
                                  params_->boundary == Boundary::periodic};
    simd::active().chain_apply(hop, x, y, params_->n_cells);
    return;
  }
  const auto dim = dense_.rows();
  Eigen::Map<Eigen::VectorXd>(y, dim).noalias() =
      dense_ * Eigen::Map<const Eigen::VectorXd>(x, dim);
}

Eigen::DiagonalMatrix<double, Eigen::Dynamic> chiral_operator(std::size_t n_cells) {
  if (n_cells < 1) throw InvalidArgument("n_cells must be >= 1");
  Eigen::VectorXd g(static_cast<Eigen::Index>(2 * n_cells));
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = (i % 2 == 0) ? 1.0 : -1.0;
  return g.asDiagonal();
}

Eigen::MatrixXd bond_operator_v(std::size_t n, Boundary b) { return bond_matrix(n, b, Bond::v); }
Eigen::MatrixXd bond_operator_w(std::size_t n, Boundary b) { return bond_matrix(n, b, Bond::w); }
Eigen::MatrixXd bond_operator_z(std::size_t n, Boundary b) { return bond_matrix(n, b, Bond::z); }

}  // namespace sshchain
