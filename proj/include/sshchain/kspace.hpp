#pragma once

#include <cstddef>
#include <string_view>
#include <utility>

namespace sshchain {

/// h(k) = hx + i hy = v + w e^{ik} + z e^{-ik}, an ellipse centred on v.
struct BlochVector {
  double hx = 0.0;
  double hy = 0.0;
  /// atan2(hy, hx); NaN when singular.
  double phi = 0.0;
  /// |h| < 1e-12, phi undefined.
  bool singular = false;
};

BlochVector bloch_vector(double v, double w, double z, double k);

/// (eps-, eps+) = -+ sqrt(v^2 + w^2 + z^2 + 2v(w+z)cos k + 2wz cos 2k), k in [-pi, pi].
std::pair<double, double> band_energy(double v, double w, double z, double k);

enum class WindingMethod { analytic, numeric };

enum class WindingStatus {
  ok,
  /// On a transition manifold (or h(k) passes through the origin on the grid).
  singular,
  /// Numeric integral not integer-quantized even at the largest grid.
  insufficient_resolution,
};

std::string_view to_string(WindingStatus s);

struct WindingResult {
  WindingStatus status = WindingStatus::ok;
  WindingMethod method = WindingMethod::analytic;
  int zeta = 0;
  /// pi * zeta; NaN unless status == ok.
  double berry_phase = 0.0;
  /// zeta / 2 in units of e; NaN unless status == ok.
  double polarization = 0.0;
  /// Numeric only: raw integral and its distance to the nearest integer.
  double raw = 0.0;
  double residual = 0.0;
  std::size_t n_k = 0;

  bool ok() const { return status == WindingStatus::ok; }
};

/// Closed-form classification of the winding of h(k) around the origin:
/// zeta = sign((w+z)(w-z)) when |v| < |w+z|, else 0. For non-negative hoppings
/// this is zeta = 0 (v > w+z), +1 (v < w+z, w > z), -1 (v < w+z, w < z).
/// Inputs within `singular_tol` of |v| = |w+z| or of w = z inside the ellipse
/// return status singular.
WindingResult winding_analytic(double v, double w, double z, double singular_tol = 1e-12);

/// Winding as (1/2pi) sum_j arg(h_{j+1} / h_j) over n_k uniform samples of
/// [-pi, pi). The grid is doubled (up to 2^20 points) until every phase step is
/// below pi/2 and the sum sits within 0.01 of an integer. n_k must be >= 64.
WindingResult winding_numeric(double v, double w, double z, std::size_t n_k = 1024);

/// min over k of eps+(k), sampled on n_k points plus the band-edge candidates k = 0, pi.
double band_minimum(double v, double w, double z, std::size_t n_k = 4096);

}  // namespace sshchain
