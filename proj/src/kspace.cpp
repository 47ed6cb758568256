#include "sshchain/kspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "sshchain/error.hpp"
#include "sshchain/simd/kernels.hpp"

namespace sshchain {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSingularModulus = 1e-12;
constexpr std::size_t kMaxGrid = std::size_t{1} << 20;

void require_finite(double v, double w, double z) {
  if (!std::isfinite(v) || !std::isfinite(w) || !std::isfinite(z)) {
    throw InvalidArgument("hoppings v, w, z must be finite");
  }
}

void require_k(double k) {
  if (!(k >= -kPi - 1e-12 && k <= kPi + 1e-12)) {
    throw InvalidArgument("k must lie in [-pi, pi]");
  }
}

WindingResult finish(WindingResult r) {
  if (r.ok()) {
    r.berry_phase = kPi * r.zeta;
    r.polarization = 0.5 * r.zeta;
  } else {
    r.zeta = 0;
    r.berry_phase = kNaN;
    r.polarization = kNaN;
  }
  return r;
}

bool near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::string_view to_string(WindingStatus s) {
  switch (s) {
    case WindingStatus::ok: return "ok";
    case WindingStatus::singular: return "singular";
    case WindingStatus::insufficient_resolution: return "insufficient_resolution";
  }
  return "unknown";
}

BlochVector bloch_vector(double v, double w, double z, double k) {
  require_finite(v, w, z);
  BlochVector b;
  b.hx = v + (w + z) * std::cos(k);
  b.hy = (w - z) * std::sin(k);
  b.singular = std::hypot(b.hx, b.hy) < kSingularModulus;
  b.phi = b.singular ? kNaN : std::atan2(b.hy, b.hx);
  return b;
}

std::pair<double, double> band_energy(double v, double w, double z, double k) {
  require_finite(v, w, z);
  require_k(k);
  double radicand = v * v + w * w + z * z + 2.0 * v * (w + z) * std::cos(k) +
                    2.0 * w * z * std::cos(2.0 * k);
  if (radicand < 0.0) {
    if (radicand < -1e-12) throw InvalidArgument("negative band radicand; inputs are inconsistent");
    radicand = 0.0;
  }
  const double e = std::sqrt(radicand);
  return {-e, e};
}

WindingResult winding_analytic(double v, double w, double z, double singular_tol) {
  require_finite(v, w, z);
  WindingResult r;
  r.method = WindingMethod::analytic;
  const double semi_x = w + z;
  const double semi_y = w - z;
  // Gap closes where h(0) or h(pi) vanishes.
  if (near(std::abs(v), std::abs(semi_x), singular_tol)) {
    r.status = WindingStatus::singular;
    return finish(r);
  }
  const bool encloses = std::abs(v) < std::abs(semi_x);
  if (!encloses) {
    r.zeta = 0;
    return finish(r);
  }
  // Degenerate (flat) ellipse through the origin.
  if (near(w, z, singular_tol)) {
    r.status = WindingStatus::singular;
    return finish(r);
  }
  r.zeta = (semi_x > 0.0) == (semi_y > 0.0) ? 1 : -1;
  return finish(r);
}

WindingResult winding_numeric(double v, double w, double z, std::size_t n_k) {
  require_finite(v, w, z);
  if (n_k < 64) throw InvalidArgument("winding_numeric needs n_k >= 64");

  const auto& kern = simd::active();
  WindingResult r;
  r.method = WindingMethod::numeric;

  for (std::size_t n = n_k;; n *= 2) {
    std::vector<double> cos_k(n), sin_k(n), hx(n), hy(n), cross(n), dot(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double k = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
      cos_k[j] = std::cos(k);
      sin_k[j] = std::sin(k);
    }
    kern.bloch_samples(v, w, z, cos_k.data(), sin_k.data(), n, hx.data(), hy.data());
    r.n_k = n;

    double min_mod = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) min_mod = std::min(min_mod, std::hypot(hx[j], hy[j]));
    if (min_mod < kSingularModulus) {
      r.status = WindingStatus::singular;
      return finish(r);
    }

    kern.loop_increments(hx.data(), hy.data(), n, cross.data(), dot.data());
    double total = 0.0;
    double max_step = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double step = std::atan2(cross[j], dot[j]);
      total += step;
      max_step = std::max(max_step, std::abs(step));
    }
    r.raw = total / (2.0 * kPi);
    const double rounded = std::round(r.raw);
    r.residual = std::abs(r.raw - rounded);
    if (r.residual < 0.01 && max_step <= kPi / 2) {
      r.zeta = static_cast<int>(rounded);
      r.status = WindingStatus::ok;
      return finish(r);
    }
    if (n >= kMaxGrid) {
      r.status = WindingStatus::insufficient_resolution;
      return finish(r);
    }
  }
}

double band_minimum(double v, double w, double z, std::size_t n_k) {
  double best = std::min(band_energy(v, w, z, 0.0).second, band_energy(v, w, z, kPi).second);
  for (std::size_t j = 0; j < n_k; ++j) {
    const double k = -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_k);
    best = std::min(best, band_energy(v, w, z, k).second);
  }
  return best;
}

}  // namespace sshchain
