#include "sshchain/simd/kernels.hpp"

namespace sshchain::simd {
namespace {

SublatticeMoments moments_scalar(const double* amp, std::size_t n_cells) {
  SublatticeMoments m;
  for (std::size_t c = 0; c < n_cells; ++c) {
    const double a = amp[2 * c];
    const double b = amp[2 * c + 1];
    m.sum_a += a * a;
    m.sum_b += b * b;
    m.overlap += a * b;
  }
  return m;
}

void phase_sum_scalar(const double* amp, const double* cos_t, const double* sin_t,
                      std::size_t n_cells, double* re, double* im) {
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t c = 0; c < n_cells; ++c) {
    const double a = amp[2 * c];
    const double b = amp[2 * c + 1];
    const double rho = a * a + b * b;
    sr += rho * cos_t[c];
    si += rho * sin_t[c];
  }
  *re = sr;
  *im = si;
}

void bloch_scalar(double v, double w, double z, const double* cos_k, const double* sin_k,
                  std::size_t n, double* hx, double* hy) {
  const double sum = w + z;
  const double diff = w - z;
  for (std::size_t j = 0; j < n; ++j) {
    hx[j] = v + sum * cos_k[j];
    hy[j] = diff * sin_k[j];
  }
}

void increments_scalar(const double* hx, const double* hy, std::size_t n, double* cross,
                       double* dot) {
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1 == n) ? 0 : j + 1;
    cross[j] = hx[j] * hy[k] - hy[j] * hx[k];
    dot[j] = hx[j] * hx[k] + hy[j] * hy[k];
  }
}

// (H x)_{m,A} = v x_{m,B} + w x_{m-1,B} + z x_{m+1,B}
// (H x)_{m,B} = v x_{m,A} + w x_{m+1,A} + z x_{m-1,A}
void chain_apply_scalar(const ChainHoppings& h, const double* x, double* y,
                        std::size_t n_cells) {
  const std::size_t n = n_cells;
  for (std::size_t m = 0; m < n; ++m) {
    double ya = h.v * x[2 * m + 1];
    double yb = h.v * x[2 * m];
    const bool has_prev = m > 0 || h.periodic;
    const bool has_next = m + 1 < n || h.periodic;
    const std::size_t prev = (m == 0) ? n - 1 : m - 1;
    const std::size_t next = (m + 1 == n) ? 0 : m + 1;
    if (has_prev) {
      ya += h.w * x[2 * prev + 1];
      yb += h.z * x[2 * prev];
    }
    if (has_next) {
      ya += h.z * x[2 * next + 1];
      yb += h.w * x[2 * next];
    }
    y[2 * m] = ya;
    y[2 * m + 1] = yb;
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

namespace detail {
const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar,       moments_scalar,     phase_sum_scalar,
                             bloch_scalar,      increments_scalar,  chain_apply_scalar,
                             dot_scalar};
  return t;
}
}  // namespace detail

}  // namespace sshchain::simd
