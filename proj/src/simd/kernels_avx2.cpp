// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; dispatch.cpp checks CPU support before handing it out.

#include <immintrin.h>

#include "sshchain/simd/kernels.hpp"

namespace sshchain::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

SublatticeMoments moments_avx2(const double* amp, std::size_t n_cells) {
  __m256d sq = _mm256_setzero_pd();
  __m256d ov = _mm256_setzero_pd();
  std::size_t c = 0;
  for (; c + 2 <= n_cells; c += 2) {
    const __m256d x = _mm256_loadu_pd(amp + 2 * c);        // a0 b0 a1 b1
    const __m256d swapped = _mm256_permute_pd(x, 0b0101);  // b0 a0 b1 a1
    sq = _mm256_fmadd_pd(x, x, sq);
    ov = _mm256_fmadd_pd(x, swapped, ov);
  }
  alignas(32) double s[4];
  alignas(32) double o[4];
  _mm256_store_pd(s, sq);
  _mm256_store_pd(o, ov);
  SublatticeMoments m{s[0] + s[2], s[1] + s[3], o[0] + o[2]};
  for (; c < n_cells; ++c) {
    const double a = amp[2 * c];
    const double b = amp[2 * c + 1];
    m.sum_a += a * a;
    m.sum_b += b * b;
    m.overlap += a * b;
  }
  return m;
}

void phase_sum_avx2(const double* amp, const double* cos_t, const double* sin_t,
                    std::size_t n_cells, double* re, double* im) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t c = 0;
  for (; c + 4 <= n_cells; c += 4) {
    const __m256d x0 = _mm256_loadu_pd(amp + 2 * c);
    const __m256d x1 = _mm256_loadu_pd(amp + 2 * c + 4);
    // hadd gives [rho0, rho2, rho1, rho3]; reorder to cell order.
    const __m256d mixed = _mm256_hadd_pd(_mm256_mul_pd(x0, x0), _mm256_mul_pd(x1, x1));
    const __m256d rho = _mm256_permute4x64_pd(mixed, 0b11011000);
    acc_re = _mm256_fmadd_pd(rho, _mm256_loadu_pd(cos_t + c), acc_re);
    acc_im = _mm256_fmadd_pd(rho, _mm256_loadu_pd(sin_t + c), acc_im);
  }
  double sr = hsum(acc_re);
  double si = hsum(acc_im);
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

void bloch_avx2(double v, double w, double z, const double* cos_k, const double* sin_k,
                std::size_t n, double* hx, double* hy) {
  const __m256d vv = _mm256_set1_pd(v);
  const __m256d sum = _mm256_set1_pd(w + z);
  const __m256d diff = _mm256_set1_pd(w - z);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    _mm256_storeu_pd(hx + j, _mm256_fmadd_pd(sum, _mm256_loadu_pd(cos_k + j), vv));
    _mm256_storeu_pd(hy + j, _mm256_mul_pd(diff, _mm256_loadu_pd(sin_k + j)));
  }
  for (; j < n; ++j) {
    hx[j] = v + (w + z) * cos_k[j];
    hy[j] = (w - z) * sin_k[j];
  }
}

void increments_avx2(const double* hx, const double* hy, std::size_t n, double* cross,
                     double* dot) {
  std::size_t j = 0;
  for (; j + 5 <= n; j += 4) {
    const __m256d x0 = _mm256_loadu_pd(hx + j);
    const __m256d y0 = _mm256_loadu_pd(hy + j);
    const __m256d x1 = _mm256_loadu_pd(hx + j + 1);
    const __m256d y1 = _mm256_loadu_pd(hy + j + 1);
    _mm256_storeu_pd(cross + j, _mm256_fmsub_pd(x0, y1, _mm256_mul_pd(y0, x1)));
    _mm256_storeu_pd(dot + j, _mm256_fmadd_pd(x0, x1, _mm256_mul_pd(y0, y1)));
  }
  for (; j < n; ++j) {
    const std::size_t k = (j + 1 == n) ? 0 : j + 1;
    cross[j] = hx[j] * hy[k] - hy[j] * hx[k];
    dot[j] = hx[j] * hx[k] + hy[j] * hy[k];
  }
}

inline void chain_cell(const ChainHoppings& h, const double* x, double* y, std::size_t n,
                       std::size_t m) {
  double ya = h.v * x[2 * m + 1];
  double yb = h.v * x[2 * m];
  const std::size_t prev = (m == 0) ? n - 1 : m - 1;
  const std::size_t next = (m + 1 == n) ? 0 : m + 1;
  if (m > 0 || h.periodic) {
    ya += h.w * x[2 * prev + 1];
    yb += h.z * x[2 * prev];
  }
  if (m + 1 < n || h.periodic) {
    ya += h.z * x[2 * next + 1];
    yb += h.w * x[2 * next];
  }
  y[2 * m] = ya;
  y[2 * m + 1] = yb;
}

// Two cells per vector: lanes [A_m, B_m, A_{m+1}, B_{m+1}].
void chain_apply_avx2(const ChainHoppings& h, const double* x, double* y, std::size_t n_cells) {
  const std::size_t n = n_cells;
  if (n < 4) {
    for (std::size_t m = 0; m < n; ++m) chain_cell(h, x, y, n, m);
    return;
  }
  const __m256d vv = _mm256_set1_pd(h.v);
  const __m256d ww = _mm256_set1_pd(h.w);
  const __m256d zz = _mm256_set1_pd(h.z);

  chain_cell(h, x, y, n, 0);
  std::size_t m = 1;
  // Needs x[2m-2] .. x[2m+5], i.e. m + 2 <= n - 1.
  for (; m + 3 <= n; m += 2) {
    const double* p = x + 2 * m;
    const __m256d cur = _mm256_loadu_pd(p);                   // A_m B_m A_m+1 B_m+1
    const __m256d v_term = _mm256_permute_pd(cur, 0b0101);    // B_m A_m B_m+1 A_m+1
    const __m256d lo_w = _mm256_loadu_pd(p - 1);              // B_m-1 A_m B_m A_m+1
    const __m256d hi_w = _mm256_loadu_pd(p + 1);              // B_m A_m+1 B_m+1 A_m+2
    const __m256d w_term = _mm256_blend_pd(lo_w, hi_w, 0b1010);  // B_m-1 A_m+1 B_m A_m+2
    const __m256d lo_z = _mm256_loadu_pd(p - 2);              // A_m-1 B_m-1 A_m B_m
    const __m256d hi_z = _mm256_loadu_pd(p + 2);              // A_m+1 B_m+1 A_m+2 B_m+2
    const __m256d z_mix = _mm256_blend_pd(lo_z, hi_z, 0b1010);   // A_m-1 B_m+1 A_m B_m+2
    const __m256d z_term = _mm256_permute_pd(z_mix, 0b0101);     // B_m+1 A_m-1 B_m+2 A_m
    __m256d acc = _mm256_mul_pd(vv, v_term);
    acc = _mm256_fmadd_pd(ww, w_term, acc);
    acc = _mm256_fmadd_pd(zz, z_term, acc);
    _mm256_storeu_pd(y + 2 * m, acc);
  }
  for (; m < n; ++m) chain_cell(h, x, y, n, m);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

namespace detail {
const KernelTable& avx2_table() {
  static const KernelTable t{Isa::avx2,      moments_avx2,     phase_sum_avx2,
                             bloch_avx2,     increments_avx2,  chain_apply_avx2,
                             dot_avx2};
  return t;
}
}  // namespace detail

}  // namespace sshchain::simd
