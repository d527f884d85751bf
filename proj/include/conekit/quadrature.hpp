#pragma once

#include "conekit/geometry.hpp"

#include <array>
#include <optional>

namespace conekit {

/// Nodes are stored column-wise (n x N); weights have length N.
struct QuadratureRule {
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;

  int dim() const { return static_cast<int>(nodes.rows()); }
  int size() const { return static_cast<int>(weights.size()); }

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (int q = 0; q < size(); ++q) acc += weights(q) * f(nodes.col(q));
    return acc;
  }
};

/// Gauss-Legendre nodes and weights of the given order on [a, b].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int order, double a = -1.0,
                                                           double b = 1.0);

/// Rule on the unit sphere S^{n-1} whose weights sum to its area. n = 1 yields
/// the two points {-1, +1} with unit weights.
QuadratureRule sphere_rule(int n, int order);

struct PolarOptions {
  int order = 16;
  /// Dyadic radial layers toward the centre of each ray.
  int layers = 3;
  /// Rays are cut at this distance from the centre (required for unbounded domains).
  std::optional<double> truncation;
};

/// Rule for the domain (intersected with the truncation ball) in polar
/// coordinates about `center`. Rays are graded toward `center`, so integrands
/// with a weak singularity |y - center|^{-alpha}, alpha < n, or a logarithmic
/// one are integrated to high accuracy.
QuadratureRule polar_rule(const DomainSpec& dom, const Point& center, const PolarOptions& opts);

struct QuadOptions {
  /// Refine around this point (the singular point of the integrand).
  std::optional<Point> singular_point;
  std::optional<double> truncation;
  int layers = 3;
};

/// Volume rule of the given order for a bounded domain, or for an unbounded
/// one truncated at `opts.truncation`. Throws std::invalid_argument for an
/// unbounded domain without truncation.
QuadratureRule quadrature_for(const DomainSpec& dom, int order, const QuadOptions& opts = {});

/// Triangulation of a simple polygon by ear clipping (indices into `v`).
std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Eigen::Vector2d>& v);

}  // namespace conekit
