#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "reference.hpp"
#include "sshchain/error.hpp"
#include "sshchain/kspace.hpp"
#include "sshchain/lattice.hpp"
#include "sshchain/spectrum.hpp"

using namespace sshchain;

namespace {

Spectrum solve(std::size_t n, double v, double w, double z, Boundary b = Boundary::open) {
  return diagonalize(build_hamiltonian({n, v, w, z, b}));
}

void check_invariants(const ChainParams& p) {
  const auto h = build_hamiltonian(p);
  const Spectrum s = diagonalize(h);
  const auto n = static_cast<Eigen::Index>(s.dimension());
  const Eigen::MatrixXd gram = s.eigenvectors.transpose() * s.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(max_residual(h, s) <= 1e-8);
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(std::abs(s.eigenvalues(i) + s.eigenvalues(n - 1 - i)) <= 1e-9);
    if (i > 0) CHECK(s.eigenvalues(i) >= s.eigenvalues(i - 1));
  }
  CHECK(std::abs(s.eigenvalues.sum()) <= 1e-9 * static_cast<double>(n));
  // Gamma u is the partner at -E.
  const auto g = chiral_operator(p.n_cells);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd gu = g * s.eigenvectors.col(i);
    CHECK((h.dense() * gu + s.eigenvalues(i) * gu).norm() <= 1e-8);
  }
}

}  // namespace

TEST_CASE("single cell: +-v with (1, -+1)/sqrt2") {
  const Spectrum s = solve(1, 0.7, 0.0, 0.0);
  CHECK(s.eigenvalues(0) == doctest::Approx(-0.7));
  CHECK(s.eigenvalues(1) == doctest::Approx(0.7));
  CHECK(std::abs(s.eigenvectors(0, 1)) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(s.eigenvectors(0, 1) * s.eigenvectors(1, 1) > 0.0);
  CHECK(s.eigenvectors(0, 0) * s.eigenvectors(1, 0) < 0.0);
}

TEST_CASE("dimerized two-cell chain has a zero pair") {
  const Spectrum s = solve(2, 0.0, 1.0, 0.0);
  CHECK(s.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(std::abs(s.eigenvalues(1)) < 1e-14);
  CHECK(std::abs(s.eigenvalues(2)) < 1e-14);
  CHECK(s.eigenvalues(3) == doctest::Approx(1.0));
  // The zero pair is mixed into equal-sublattice combinations of the end sites.
  for (std::size_t c : {1, 2}) {
    const auto a = s.amplitudes(c);
    CHECK(std::abs(a[0]) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(std::abs(a[3]) == doctest::Approx(1 / std::sqrt(2.0)));
  }
}

TEST_CASE("N = 4 eigenvalues agree with the Jacobi reference") {
  const Spectrum s = solve(4, 0.3, 0.5, 0.0);
  const auto ref = reference::jacobi(reference::hamiltonian(4, 0.3, 0.5, 0.0, false));
  for (Eigen::Index i = 0; i < 8; ++i) CHECK(std::abs(s.eigenvalues(i) - ref.values[i]) < 1e-10);
}

TEST_CASE("spectral invariants on random chains") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    check_invariants({static_cast<std::size_t>(2 + t), u(rng), u(rng), u(rng),
                      t % 2 ? Boundary::periodic : Boundary::open});
  }
  check_invariants({6, 0.0, 1.0, 0.0, Boundary::open});
  check_invariants({6, 1.0, 0.0, 0.0, Boundary::open});
  check_invariants({6, 0.0, 0.5, 0.5, Boundary::periodic});
}

TEST_CASE("periodic chain reproduces the Bloch bands") {
  const std::size_t n = 24;
  const double v = 0.35, w = 0.6, z = 0.15;
  const Spectrum s = solve(n, v, w, z, Boundary::periodic);
  std::vector<double> bands;
  for (std::size_t j = 0; j < n; ++j) {
    double k = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    if (k > std::numbers::pi) k -= 2.0 * std::numbers::pi;
    const auto [lo, hi] = band_energy(v, w, z, k);
    bands.push_back(lo);
    bands.push_back(hi);
  }
  std::sort(bands.begin(), bands.end());
  for (std::size_t i = 0; i < 2 * n; ++i) {
    CHECK(std::abs(s.eigenvalues(static_cast<Eigen::Index>(i)) - bands[i]) < 1e-8);
  }
}

TEST_CASE("diagonalize is deterministic") {
  const auto h = build_hamiltonian({30, 0.0, 0.5, 0.0, Boundary::open});
  const Spectrum a = diagonalize(h);
  const Spectrum b = diagonalize(h);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.eigenvectors == b.eigenvectors);
}

TEST_CASE("asymmetric input is rejected") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonalize(HamiltonianMatrix::from_dense(m)), InvalidArgument);
}

TEST_CASE("topological chain: one edge pair, psi1 is the lowest bulk state") {
  const Spectrum s = solve(40, 0.2, 0.5, 0.0);
  CHECK(s.labels.status == LabelStatus::ok);
  CHECK(s.labels.has_edge);
  CHECK(s.labels.n_zero_modes == 2);
  CHECK(s.labels.index(StateLabel::edge()) == 40u);
  CHECK(s.labels.index(StateLabel::edge(true)) == 39u);
  CHECK(s.labels.index(StateLabel::psi(1)) == 41u);
  CHECK(s.labels.index(StateLabel::psi(1, true)) == 38u);
  CHECK(std::abs(s.eigenvalues(40)) < default_zero_tol(s));
  CHECK(s.labels.boundary_weight > 0.9);
  const auto branch = s.labels.positive_branch();
  REQUIRE(branch.size() == 40);
  CHECK(branch[0].first == StateLabel::edge());
  CHECK(branch[1].first == StateLabel::psi(1));
}

TEST_CASE("trivial chain: no edge states, 40 bulk labels") {
  const Spectrum s = solve(40, 0.9, 0.5, 0.0);
  CHECK_FALSE(s.labels.has_edge);
  CHECK(s.labels.n_zero_modes == 0);
  CHECK_FALSE(s.labels.index(StateLabel::edge()).has_value());
  CHECK(s.labels.positive_branch().size() == 40);
  CHECK(s.labels.index(StateLabel::psi(39)) == 79u);
  CHECK_FALSE(s.labels.index(StateLabel::psi(40)).has_value());
}

TEST_CASE("edge pair near the transition is found by its gap isolation") {
  // |E_0| ~ 2e-4 here, far above the zero threshold.
  const Spectrum s = solve(80, 0.45, 0.5, 0.0);
  CHECK(s.labels.has_edge);
  CHECK(s.labels.n_zero_modes == 0);
}

TEST_CASE("flat-band dimers: no zero modes, deterministic labels") {
  const Spectrum s = solve(2, 1.0, 0.0, 0.0);
  CHECK(s.labels.n_zero_modes == 0);
  CHECK_FALSE(s.labels.has_edge);
  CHECK(s.labels.index(StateLabel::psi(0)) == 2u);
  CHECK(s.labels.index(StateLabel::psi(1)) == 3u);
  CHECK(s.eigenvalues(2) == doctest::Approx(1.0));
  CHECK(s.eigenvalues(3) == doctest::Approx(1.0));
  const Spectrum again = solve(2, 1.0, 0.0, 0.0);
  CHECK(s.eigenvectors == again.eigenvectors);
}

TEST_CASE("more than two zero modes is ambiguous") {
  const Spectrum s = solve(4, 0.0, 0.0, 0.0);
  CHECK(s.labels.status == LabelStatus::ambiguous);
  CHECK_FALSE(s.labels.index(StateLabel::psi(1)).has_value());
}

TEST_CASE("energy gap") {
  CHECK(energy_gap(solve(2, 1.0, 0.0, 0.0)) == doctest::Approx(1.0));
  const double g40 = energy_gap(solve(40, 0.5, 0.5, 0.0));
  const double g80 = energy_gap(solve(80, 0.5, 0.5, 0.0));
  CHECK(g40 < 0.1);
  CHECK(g80 < g40);
  const double trivial = energy_gap(solve(40, 0.9, 0.5, 0.0));
  CHECK(std::abs(trivial - 0.4) <= 0.05);
  CHECK(std::abs(trivial - band_minimum(0.9, 0.5, 0.0)) <= 0.05);
  CHECK_THROWS_AS(energy_gap(solve(1, 1.0, 0.0, 0.0)), InvalidArgument);
}

TEST_CASE("state labels parse and print") {
  CHECK(StateLabel::parse("psi20") == StateLabel::psi(20));
  CHECK(StateLabel::parse("psi1-") == StateLabel::psi(1, true));
  CHECK(StateLabel::parse("edge+") == StateLabel::edge());
  CHECK(StateLabel::psi(50, true).name() == "psi50-");
  CHECK_THROWS_AS(StateLabel::parse("psi"), InvalidArgument);
  CHECK_THROWS_AS(StateLabel::parse("bulk"), InvalidArgument);
}

TEST_CASE("boundary weight") {
  std::vector<double> a(16, 0.0);
  a[0] = 1.0;
  CHECK(boundary_weight(a, 0.125) == doctest::Approx(1.0));
  std::fill(a.begin(), a.end(), 0.25);
  CHECK(boundary_weight(a, 0.125) == doctest::Approx(0.25));
}
