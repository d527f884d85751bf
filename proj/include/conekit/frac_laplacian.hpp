#pragma once

#include "conekit/grid_function.hpp"
#include "conekit/kernels.hpp"

#include <functional>
#include <vector>

namespace conekit {

struct FracLapConfig {
  /// Inner region |z| < r_split uses dyadic panels toward z = 0.
  double r_split = 0.1;
  int inner_layers = 12;
  int inner_order = 16;
  /// Outer region r_split < |z| < tail_radius uses panels of this length.
  double outer_panel = 0.5;
  int outer_order = 16;
  /// Beyond tail_radius, u is replaced by far_field_mean.
  double tail_radius = 64.0;
  double far_field_mean = 0.0;
  Normalization normalization = Normalization::Angular;
  /// n = 1: abscissae where u is not smooth; panels are graded toward them.
  std::vector<double> kinks;
  int kink_layers = 30;
  /// n >= 2: order of the rule on the unit sphere.
  int angular_order = 16;
};

/// C_{s,n} for s in (0, 1): the reciprocal of int (1 - cos zeta_1) |zeta|^{-n-2s}
/// (Angular) or of int (1 - cos 2 pi zeta_1) |zeta|^{-n-2s} (PaperCycles),
/// evaluated as a radial integral with an analytic tail times the angular
/// moment of |w_1|^{2s}.
double normalization_const(double s, int n, Normalization norm);

using Field = std::function<double(const Point&)>;

/// C_{s,n} (1/2) int (2u(x) - u(x + z) - u(x - z)) |z|^{-n-2s} dz.
/// Throws std::invalid_argument unless 0 < s < 1, and std::domain_error when
/// x is at a listed kink.
double frac_laplacian(const Field& u, double s, const Point& x, const FracLapConfig& cfg = {});

inline double frac_laplacian(const GridFunction& u, double s, const Point& x,
                             const FracLapConfig& cfg = {}) {
  return frac_laplacian(Field([&u](const Point& y) { return u(y); }), s, x, cfg);
}

}  // namespace conekit
