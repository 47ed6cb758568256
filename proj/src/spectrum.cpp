#include "sshchain/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "sshchain/error.hpp"
#include "sshchain/simd/kernels.hpp"

namespace sshchain {

// ---------------------------------------------------------------------------
// labels
// ---------------------------------------------------------------------------

std::string StateLabel::name() const {
  std::string s = kind == Kind::edge ? "edge" : "psi" + std::to_string(n);
  if (negative) s += '-';
  return s;
}

StateLabel StateLabel::parse(std::string_view s) {
  const std::string original(s);
  bool negative = false;
  if (!s.empty() && (s.back() == '-' || s.back() == '+')) {
    negative = s.back() == '-';
    s.remove_suffix(1);
  }
  if (s == "edge") return edge(negative);
  if (s.starts_with("psi") && s.size() > 3) {
    std::size_t n = 0;
    const auto* first = s.data() + 3;
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec == std::errc() && ptr == last) return psi(n, negative);
  }
  throw InvalidArgument("unknown state label '" + original + "' (expected edge[+-] or psi<n>[+-])");
}

std::optional<std::size_t> StateLabels::index(const StateLabel& label) const {
  if (status != LabelStatus::ok || n_cells == 0) return std::nullopt;
  std::size_t n = label.n;
  if (label.kind == StateLabel::Kind::edge) {
    if (!has_edge) return std::nullopt;
    n = 0;
  }
  if (n >= n_cells) return std::nullopt;
  return label.negative ? n_cells - 1 - n : n_cells + n;
}

std::vector<std::pair<StateLabel, std::size_t>> StateLabels::positive_branch() const {
  std::vector<std::pair<StateLabel, std::size_t>> out;
  if (status != LabelStatus::ok) return out;
  if (has_edge) out.emplace_back(StateLabel::edge(), n_cells);
  for (std::size_t n = has_edge ? 1 : 0; n < n_cells; ++n) {
    out.emplace_back(StateLabel::psi(n), n_cells + n);
  }
  return out;
}

double boundary_weight(std::span<const double> amp, double fraction) {
  const std::size_t n = amp.size() / 2;
  if (n == 0) return 0.0;
  const auto k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  if (2 * k >= n) return 1.0;
  double w = 0.0;
  for (std::size_t i = 0; i < 2 * k; ++i) {
    w += amp[i] * amp[i];
    const std::size_t j = amp.size() - 1 - i;
    w += amp[j] * amp[j];
  }
  return w;
}

StateLabels label_states(const Spectrum& s, double zero_tol, const EdgeCriteria& criteria) {
  StateLabels labels;
  const std::size_t n = s.n_cells();
  labels.n_cells = n;
  if (n == 0) return labels;

  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (std::abs(s.eigenvalues(i)) < zero_tol) ++labels.n_zero_modes;
  }
  if (labels.n_zero_modes > 2) {
    labels.status = LabelStatus::ambiguous;
    return labels;
  }

  const double e0 = std::abs(s.eigenvalues(static_cast<Eigen::Index>(n)));
  labels.boundary_weight = boundary_weight(s.amplitudes(n), criteria.boundary_fraction);
  bool in_gap = e0 < zero_tol;
  if (!in_gap && n >= 2) {
    const double e1 = s.eigenvalues(static_cast<Eigen::Index>(n + 1));
    in_gap = e0 <= criteria.in_gap_ratio * e1;
  }
  labels.has_edge = in_gap && labels.boundary_weight >= criteria.min_boundary_weight;
  return labels;
}

double default_zero_tol(const Spectrum& s) {
  return s.eigenvalues.size() == 0 ? 0.0
                                   : std::max(1e-6 * s.eigenvalues.cwiseAbs().maxCoeff(),
                                              std::numeric_limits<double>::min());
}

EigenState Spectrum::state(std::size_t i) const {
  const auto a = amplitudes(i);
  return {std::vector<double>(a.begin(), a.end()), eigenvalues(static_cast<Eigen::Index>(i))};
}

EigenState Spectrum::state(const StateLabel& label) const {
  const auto idx = labels.index(label);
  if (!idx) throw InvalidArgument("state " + label.name() + " is not available in this spectrum");
  return state(*idx);
}

double energy_gap(const Spectrum& s) {
  const std::size_t n = s.n_cells();
  if (n < 2) throw InvalidArgument("energy_gap requires n_cells >= 2");
  const std::size_t i = s.labels.has_edge ? n + 1 : n;
  return s.eigenvalues(static_cast<Eigen::Index>(i));
}

double max_residual(const HamiltonianMatrix& h, const Spectrum& s) {
  const std::size_t dim = s.dimension();
  std::vector<double> hu(dim);
  double worst = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const auto u = s.amplitudes(i);
    const double e = s.eigenvalues(static_cast<Eigen::Index>(i));
    h.apply(u.data(), hu.data());
    double r2 = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = hu[k] - e * u[k];
      r2 += d * d;
    }
    worst = std::max(worst, std::sqrt(r2) / std::max(1.0, std::abs(e)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// diagonalization
// ---------------------------------------------------------------------------

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Zero-mode pair -> (L +- sR)/sqrt(2), with L, R the Gamma = +1 / -1 parts of
// the pair subspace and s = sign(L^T H R).
void hybridize_zero_pair(const HamiltonianMatrix& h, Spectrum& s, Index lo) {
  MatrixXd u = s.eigenvectors.middleCols(lo, 2);
  const VectorXd gamma = chiral_operator(s.n_cells()).diagonal();
  const Eigen::Matrix2d g = u.transpose() * gamma.asDiagonal() * u;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
  if (es.eigenvalues()(0) > -0.5 || es.eigenvalues()(1) < 0.5) return;  // not chiral partners
  const VectorXd right = u * es.eigenvectors().col(0);  // Gamma = -1, B sublattice
  const VectorXd left = u * es.eigenvectors().col(1);   // Gamma = +1, A sublattice
  VectorXd h_right(right.size());
  h.apply(right.data(), h_right.data());
  const double t = left.dot(h_right);
  const double sgn = t < 0.0 ? -1.0 : 1.0;
  s.eigenvectors.col(lo) = (left - sgn * right) / std::sqrt(2.0);
  s.eigenvectors.col(lo + 1) = (left + sgn * right) / std::sqrt(2.0);
  s.eigenvalues(lo) = -std::abs(t);
  s.eigenvalues(lo + 1) = std::abs(t);
}

// Orthonormal basis of span(u) built from the projections of e_0, e_1, ... in order.
MatrixXd projection_basis(const MatrixXd& u) {
  const Index dim = u.rows();
  const Index d = u.cols();
  MatrixXd out(dim, d);
  Index found = 0;
  for (Index i = 0; i < dim && found < d; ++i) {
    VectorXd r = u * u.row(i).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (Index j = 0; j < found; ++j) r -= out.col(j).dot(r) * out.col(j);
    }
    const double nrm = r.norm();
    if (nrm > 1e-6) out.col(found++) = r / nrm;
  }
  if (found < d) return u;  // cannot happen for an orthonormal u; keep the solver basis
  return out;
}

void refine_cluster(MatrixXd& u, const std::vector<MatrixXd>& perturbations, std::size_t level) {
  const Index d = u.cols();
  if (d < 2) return;
  if (level >= perturbations.size()) {
    u = projection_basis(u);
    return;
  }
  const MatrixXd m = u.transpose() * perturbations[level] * u;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()));
  u = u * es.eigenvectors();
  const VectorXd& lam = es.eigenvalues();
  const double tol = 1e-8 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  Index start = 0;
  while (start < d) {
    Index end = start + 1;
    while (end < d && lam(end) - lam(end - 1) <= tol) ++end;
    if (end - start > 1) {
      MatrixXd sub = u.middleCols(start, end - start);
      refine_cluster(sub, perturbations, level + 1);
      u.middleCols(start, end - start) = sub;
    }
    start = end;
  }
}

void fix_signs(MatrixXd& vecs) {
  for (Index c = 0; c < vecs.cols(); ++c) {
    auto col = vecs.col(c);
    const double peak = col.cwiseAbs().maxCoeff();
    for (Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) >= peak * (1.0 - 1e-9)) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

}  // namespace

Spectrum diagonalize(const HamiltonianMatrix& h, const DiagonalizeOptions& opts) {
  if (!h.is_symmetric()) throw InvalidArgument("Hamiltonian is not symmetric");

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(h.dense());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge (iteration cap of " +
                         std::to_string(Eigen::SelfAdjointEigenSolver<MatrixXd>::m_maxIterations) +
                         " per eigenvalue reached)");
  }
  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();

  const Index dim = s.eigenvalues.size();
  const std::size_t n = s.n_cells();
  const double scale = s.eigenvalues.cwiseAbs().maxCoeff();
  // Floor so that an all-zero H still counts its zero modes.
  const double zero_tol = std::max(opts.zero_tol_rel * scale, std::numeric_limits<double>::min());
  const double deg_tol = opts.degeneracy_tol_rel * scale;

  std::vector<MatrixXd> perturbations;
  if (const auto& p = h.params()) {
    perturbations = {bond_operator_v(p->n_cells, p->boundary),
                     bond_operator_w(p->n_cells, p->boundary),
                     bond_operator_z(p->n_cells, p->boundary)};
  }

  // Zero modes: exactly two -> chiral hybridization; more -> generic cluster below.
  Index n_zero = 0;
  for (Index i = 0; i < dim; ++i) n_zero += std::abs(s.eigenvalues(i)) < zero_tol ? 1 : 0;
  const Index centre = static_cast<Index>(n);
  const bool pair_done = n_zero == 2;
  if (pair_done) hybridize_zero_pair(h, s, centre - 1);

  Index start = 0;
  while (start < dim) {
    Index end = start + 1;
    const bool start_zero = std::abs(s.eigenvalues(start)) < zero_tol;
    while (end < dim) {
      const bool both_zero = start_zero && std::abs(s.eigenvalues(end)) < zero_tol;
      if (!both_zero && s.eigenvalues(end) - s.eigenvalues(end - 1) > deg_tol) break;
      ++end;
    }
    const Index d = end - start;
    const bool is_pair = pair_done && start == centre - 1 && d == 2;
    if (d > 1 && !is_pair) {
      MatrixXd u = s.eigenvectors.middleCols(start, d);
      refine_cluster(u, perturbations, 0);
      s.eigenvectors.middleCols(start, d) = u;
      const double mean = s.eigenvalues.segment(start, d).mean();
      s.eigenvalues.segment(start, d).setConstant(mean);
    }
    start = end;
  }

  fix_signs(s.eigenvectors);
  s.labels = label_states(s, zero_tol, opts.edge);

  if (opts.verify) {
    const double r = max_residual(h, s);
    if (!(r <= 1e-8)) {
      throw NumericalError("eigenpair residual " + std::to_string(r) + " exceeds 1e-8");
    }
  }
  return s;
}

}  // namespace sshchain
