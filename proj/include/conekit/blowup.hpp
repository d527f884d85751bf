#pragma once

#include "conekit/geometry.hpp"
#include "conekit/grid_function.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace conekit {

/// (Omega - anchor) / rho. Throws std::invalid_argument when the anchor is
/// farther than 1e-12 (relative) from the boundary or rho <= 0.
Polygon2D rescale_domain(const Polygon2D& dom, const Eigen::Vector2d& anchor, double rho);

/// Planar cone {r (cos phi, sin phi) : r > 0, start < phi < start + angle}
/// with apex at the origin of the rescaled coordinates.
struct ConeDescription {
  double start = 0.0;
  double angle = kPi;
  /// Index of the polygon vertex, or -1 for an edge point (half-plane).
  int vertex_index = -1;

  bool contains(const Eigen::Vector2d& x) const;
  bool contains_closure(const Eigen::Vector2d& x, double tol = 1e-12) const;
};

/// Limit cone of the blow-up at a boundary point: the interior angle at a
/// vertex (from the outgoing edge counter-clockwise to the incoming one), or
/// the half-plane at an edge point. Throws when x0 is not on the boundary.
ConeDescription limit_cone(const Polygon2D& dom, const Eigen::Vector2d& x0);

/// Interior angle at vertex i computed as pi minus the turning angle.
double interior_angle_by_turning(const Polygon2D& dom, int i);

struct BcbOptions {
  /// Grid points per axis on [-1, 1]^2 (100 gives 10^4 points).
  int grid = 100;
  /// Anchor path x(rho) = x0 + rho^2 e; e must point along the boundary.
  std::optional<Eigen::Vector2d> approach;
  /// Samples per boundary piece for the boundary-based distance.
  int boundary_samples = 2000;
};

struct BcbEntry {
  double rho = 1.0;
  /// Grid indicator Hausdorff distance between Omega_rho cap B_1 and C cap B_1.
  double hausdorff = 0.0;
  /// The same distance from dense boundary samples and exact piece distances.
  double hausdorff_boundary = 0.0;
  double grid_resolution = 0.0;
};

struct BcbReport {
  ConeDescription cone;
  std::vector<BcbEntry> entries;
  /// Least-squares log-log slope of hausdorff_boundary against rho (nullopt
  /// when fewer than two positive distances).
  std::optional<double> boundary_slope;
};

/// Throws std::invalid_argument unless the rho list is strictly decreasing
/// and positive.
BcbReport bcb_check(const Polygon2D& dom, const Eigen::Vector2d& x0, const std::vector<double>& rhos,
                    const BcbOptions& opts = {});

nlohmann::json to_json(const BcbReport& r);

/// lambda_j = m_j^{(1-p)/(2s)}.
double blowup_scale(double m_j, double p, double s);

/// v_j(x) = u(lambda_j x + x_j) / m_j on the rescaled nodes.
GridFunction rescale_solution(const GridFunction& u, const Point& x_j, double m_j, double p, double s);

}  // namespace conekit
