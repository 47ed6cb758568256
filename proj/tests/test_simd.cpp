#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "sshchain/simd/kernels.hpp"

using namespace sshchain::simd;

namespace {

std::vector<const KernelTable*> vector_tables() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (available(isa)) out.push_back(&table(isa));
  }
  return out;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& a : x) a = u(rng);
  return x;
}

// Accumulation order differs between variants; allow a few ulps per term.
void check_close(double a, double b, std::size_t terms) {
  CHECK(std::abs(a - b) <= 4e-16 * static_cast<double>(terms + 4) * std::max(1.0, std::abs(a)));
}

}  // namespace

TEST_CASE("dispatch") {
  CHECK(available(Isa::scalar));
  CHECK(table(Isa::scalar).isa == Isa::scalar);
  CHECK(to_string(active().isa).size() > 0);
  if (!available(Isa::neon)) CHECK_THROWS_AS(table(Isa::neon), std::invalid_argument);
#if defined(__x86_64__)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    CHECK(available(Isa::avx2));
  }
#endif
}

TEST_CASE("vector kernels match the scalar reference") {
  const KernelTable& ref = table(Isa::scalar);
  const auto tables = vector_tables();
  if (tables.empty()) MESSAGE("no vector kernels on this CPU");
  std::mt19937_64 rng(42);
  for (const KernelTable* k : tables) {
    CAPTURE(to_string(k->isa));
    for (std::size_t n = 1; n <= 41; ++n) {
      CAPTURE(n);
      const auto x = random_vector(rng, 2 * n);
      const auto c = random_vector(rng, n);
      const auto s = random_vector(rng, n);

      const auto m1 = ref.sublattice_moments(x.data(), n);
      const auto m2 = k->sublattice_moments(x.data(), n);
      check_close(m1.sum_a, m2.sum_a, n);
      check_close(m1.sum_b, m2.sum_b, n);
      check_close(m1.overlap, m2.overlap, n);

      double re1, im1, re2, im2;
      ref.phase_weighted_sum(x.data(), c.data(), s.data(), n, &re1, &im1);
      k->phase_weighted_sum(x.data(), c.data(), s.data(), n, &re2, &im2);
      check_close(re1, re2, 2 * n);
      check_close(im1, im2, 2 * n);

      check_close(ref.dot(x.data(), x.data(), 2 * n), k->dot(x.data(), x.data(), 2 * n), 2 * n);

      for (bool periodic : {false, true}) {
        const ChainHoppings hop{0.31, -0.57, 0.22, periodic};
        std::vector<double> y1(2 * n), y2(2 * n);
        ref.chain_apply(hop, x.data(), y1.data(), n);
        k->chain_apply(hop, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < 2 * n; ++i) check_close(y1[i], y2[i], 4);
      }

      std::vector<double> ck(n), sk(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double kk = -std::numbers::pi + 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        ck[j] = std::cos(kk);
        sk[j] = std::sin(kk);
      }
      std::vector<double> hx1(n), hy1(n), hx2(n), hy2(n);
      ref.bloch_samples(0.3, 0.5, 0.2, ck.data(), sk.data(), n, hx1.data(), hy1.data());
      k->bloch_samples(0.3, 0.5, 0.2, ck.data(), sk.data(), n, hx2.data(), hy2.data());
      std::vector<double> cr1(n), dt1(n), cr2(n), dt2(n);
      ref.loop_increments(hx1.data(), hy1.data(), n, cr1.data(), dt1.data());
      k->loop_increments(hx1.data(), hy1.data(), n, cr2.data(), dt2.data());
      for (std::size_t j = 0; j < n; ++j) {
        check_close(hx1[j], hx2[j], 2);
        check_close(hy1[j], hy2[j], 2);
        check_close(cr1[j], cr2[j], 2);
        check_close(dt1[j], dt2[j], 2);
      }
    }
  }
}

TEST_CASE("scalar chain_apply against an explicit bond loop") {
  const KernelTable& ref = table(Isa::scalar);
  std::mt19937_64 rng(8);
  for (std::size_t n : {1, 2, 3, 6}) {
    for (bool periodic : {false, true}) {
      const ChainHoppings hop{0.3, 0.5, 0.2, periodic};
      const auto x = random_vector(rng, 2 * n);
      std::vector<double> want(2 * n, 0.0), got(2 * n);
      auto bond = [&](std::size_t i, std::size_t j, double t) {
        want[i] += t * x[j];
        want[j] += t * x[i];
      };
      for (std::size_t m = 0; m < n; ++m) bond(2 * m, 2 * m + 1, hop.v);
      for (std::size_t m = 0; m + 1 < n; ++m) {
        bond(2 * m + 1, 2 * m + 2, hop.w);
        bond(2 * m, 2 * m + 3, hop.z);
      }
      if (periodic) {
        bond(2 * n - 1, 0, hop.w);
        bond(2 * n - 2, 1, hop.z);
      }
      ref.chain_apply(hop, x.data(), got.data(), n);
      for (std::size_t i = 0; i < 2 * n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
    }
  }
}
