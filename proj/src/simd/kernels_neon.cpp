// NEON (AArch64) variants. Kernels without a NEON body reuse the scalar reference.

#include <arm_neon.h>

#include "sshchain/simd/kernels.hpp"

namespace sshchain::simd {
namespace {

// One cell per 2-lane vector: [A_m, B_m].
SublatticeMoments moments_neon(const double* amp, std::size_t n_cells) {
  float64x2_t sq = vdupq_n_f64(0.0);
  float64x2_t ov = vdupq_n_f64(0.0);
  for (std::size_t c = 0; c < n_cells; ++c) {
    const float64x2_t x = vld1q_f64(amp + 2 * c);
    sq = vfmaq_f64(sq, x, x);
    ov = vfmaq_f64(ov, x, vextq_f64(x, x, 1));
  }
  return {vgetq_lane_f64(sq, 0), vgetq_lane_f64(sq, 1), vgetq_lane_f64(ov, 0)};
}

void phase_sum_neon(const double* amp, const double* cos_t, const double* sin_t,
                    std::size_t n_cells, double* re, double* im) {
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  std::size_t c = 0;
  for (; c + 2 <= n_cells; c += 2) {
    const float64x2_t x0 = vld1q_f64(amp + 2 * c);
    const float64x2_t x1 = vld1q_f64(amp + 2 * c + 2);
    const float64x2_t rho = vpaddq_f64(vmulq_f64(x0, x0), vmulq_f64(x1, x1));
    acc_re = vfmaq_f64(acc_re, rho, vld1q_f64(cos_t + c));
    acc_im = vfmaq_f64(acc_im, rho, vld1q_f64(sin_t + c));
  }
  double sr = vaddvq_f64(acc_re);
  double si = vaddvq_f64(acc_im);
  for (; c < n_cells; ++c) {
    const double a = amp[2 * c];
    const double b = amp[2 * c + 1];
    const double rho = a * a + b * b;
    sr += rho * cos_t[c];
    si += rho * sin_t[c];
  }
  *re = sr;
  *im = si;
}

void bloch_neon(double v, double w, double z, const double* cos_k, const double* sin_k,
                std::size_t n, double* hx, double* hy) {
  const float64x2_t vv = vdupq_n_f64(v);
  const float64x2_t sum = vdupq_n_f64(w + z);
  const float64x2_t diff = vdupq_n_f64(w - z);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    vst1q_f64(hx + j, vfmaq_f64(vv, sum, vld1q_f64(cos_k + j)));
    vst1q_f64(hy + j, vmulq_f64(diff, vld1q_f64(sin_k + j)));
  }
  for (; j < n; ++j) {
    hx[j] = v + (w + z) * cos_k[j];
    hy[j] = (w - z) * sin_k[j];
  }
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

namespace detail {
const KernelTable& neon_table() {
  static const KernelTable t = [] {
    KernelTable k = scalar_table();
    k.isa = Isa::neon;
    k.sublattice_moments = moments_neon;
    k.phase_weighted_sum = phase_sum_neon;
    k.bloch_samples = bloch_neon;
    k.dot = dot_neon;
    return k;
  }();
  return t;
}
}  // namespace detail

}  // namespace sshchain::simd
