#pragma once

// Data-parallel inner loops shared by the spectrum, observables and k-space
// code. Every kernel has a scalar reference implementation; vector variants
// are selected once at runtime and must agree with the reference to within a
// few ulps of accumulated rounding (see tests/test_simd.cpp).

#include <cstddef>
#include <string_view>

namespace sshchain::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

/// Sums over an interleaved amplitude array [A0, B0, A1, B1, ...].
struct SublatticeMoments {
  double sum_a = 0.0;    // sum_m |C^A_m|^2
  double sum_b = 0.0;    // sum_m |C^B_m|^2
  double overlap = 0.0;  // sum_m C^A_m C^B_m
};

struct ChainHoppings {
  double v;
  double w;
  double z;
  bool periodic;
};

struct KernelTable {
  Isa isa;

  SublatticeMoments (*sublattice_moments)(const double* amp, std::size_t n_cells);

  /// re + i*im = sum_m (|C^A_m|^2 + |C^B_m|^2) * (cos_t[m] + i sin_t[m]).
  void (*phase_weighted_sum)(const double* amp, const double* cos_t, const double* sin_t,
                             std::size_t n_cells, double* re, double* im);

  /// hx[j] = v + (w+z) cos_k[j],  hy[j] = (w-z) sin_k[j].
  void (*bloch_samples)(double v, double w, double z, const double* cos_k, const double* sin_k,
                        std::size_t n, double* hx, double* hy);

  /// For a closed loop of n points: cross[j] = h_j x h_{j+1}, dot[j] = h_j . h_{j+1},
  /// with index n wrapping to 0.
  void (*loop_increments)(const double* hx, const double* hy, std::size_t n, double* cross,
                          double* dot);

  /// y = H x for the SSH chain with the given hoppings; x, y have length 2 n_cells.
  void (*chain_apply)(const ChainHoppings& h, const double* x, double* y, std::size_t n_cells);

  double (*dot)(const double* a, const double* b, std::size_t n);
};

/// Kernel table for one instruction set. Throws std::invalid_argument when the
/// ISA was not compiled in or the running CPU lacks it.
const KernelTable& table(Isa isa);

bool available(Isa isa);

/// Best available table, chosen on first use. The environment variable
/// SSHCHAIN_SIMD=scalar|avx2|neon overrides the choice.
const KernelTable& active();

namespace detail {
const KernelTable& scalar_table();
#if defined(SSHCHAIN_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(SSHCHAIN_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace sshchain::simd
