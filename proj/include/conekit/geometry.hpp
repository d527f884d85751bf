#pragma once

#include "conekit/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace conekit {

class DomainSpec;

// ---------------------------------------------------------------------------
// Point maps
// ---------------------------------------------------------------------------

/// Inversion in the sphere S_lambda(P): x -> lambda^2 (x - P) / |x - P|^2 + P.
template <typename Derived, typename Derived2>
Point kelvin_point(const Eigen::MatrixBase<Derived>& x,
                   const Eigen::MatrixBase<Derived2>& center,
                   typename Derived::Scalar lambda) {
  if (x.size() != center.size()) {
    throw std::invalid_argument("kelvin_point: dimension mismatch");
  }
  if (!(lambda > 0)) {
    throw std::invalid_argument("kelvin_point: lambda must be positive");
  }
  const Point d = x - center;
  const double r2 = d.squaredNorm();
  if (r2 == 0.0) {
    throw std::domain_error("kelvin_point: x coincides with the inversion center");
  }
  return center + (lambda * lambda / r2) * d;
}

/// Negates the local coordinates selected by `mask` (bit i <-> frame axis i)
/// of y about P. The result keeps |y - P|.
Point signed_reflection(const Point& y, std::uint32_t mask, const Frame& frame,
                        const Point& center);

// ---------------------------------------------------------------------------
// Cross-sections
// ---------------------------------------------------------------------------

/// {w in S^{n-1} : w . axis > cos_half_angle}
struct SphericalCap {
  Point axis;
  double cos_half_angle = -1.0;
};

/// Product of k half-sphere constraints (O^T w)_i > 0, i < k, optionally
/// intersected with a cap. k = 0 without a cap is the whole sphere.
struct SphericalCapProduct {
  int k = 0;
  Frame frame;
  std::optional<SphericalCap> cap;
};

/// Union of open arcs of S^1, each stored as [start, start + length) with
/// start in [0, 2 pi). Used for n = 2.
struct ArcUnion {
  struct Arc {
    double start = 0.0;
    double length = 0.0;
  };
  std::vector<Arc> arcs;
};

/// Subset of S^0 = {-1, +1}.
struct SignSet {
  bool negative = false;
  bool positive = false;
};

/// Fallback: membership test P + r w in the domain.
struct IndicatorSection {
  std::shared_ptr<const DomainSpec> domain;
  Point center;
  double radius = 1.0;
};

class CrossSection {
 public:
  using Repr = std::variant<SphericalCapProduct, ArcUnion, SignSet, IndicatorSection>;

  CrossSection(int dim, Repr repr, bool empty = false);

  static CrossSection full(int dim);
  static CrossSection none(int dim);

  int dim() const { return dim_; }
  bool empty() const { return empty_; }
  const Repr& repr() const { return repr_; }

  /// Membership of a unit direction.
  bool contains(const Point& direction) const;

 private:
  int dim_;
  Repr repr_;
  bool empty_;
};

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

struct FreeSpace {
  int dim = 1;
};

/// Cone {P + O z : z_0, ..., z_{k-1} > 0}.
struct HalfSpaceK {
  int k = 1;
  Point vertex;
  Frame frame;
};

struct Ball {
  Point center;
  double radius = 1.0;
};

/// HalfSpaceK intersected with B_R(P); k = 0 is the full ball.
struct BallK {
  int k = 0;
  Point vertex;
  Frame frame;
  double radius = 1.0;
};

/// HalfSpaceK minus the closed ball of radius R about the vertex.
struct ExteriorBallK {
  int k = 0;
  Point vertex;
  Frame frame;
  double radius = 1.0;
};

/// {P + r w : w in section, r_min < r < r_max}.
struct TruncatedCone {
  Point vertex;
  CrossSection section;
  double r_min = 0.0;
  double r_max = 1.0;
};

/// Simple counter-clockwise polygon.
struct Polygon2D {
  std::vector<Eigen::Vector2d> vertices;
};

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

/// {origin + t * direction : t > 0}, direction = +1 or -1.
struct HalfLine {
  double origin = 0.0;
  int direction = 1;
};

class DomainSpec {
 public:
  using Kind = std::variant<FreeSpace, HalfSpaceK, Ball, BallK, ExteriorBallK, TruncatedCone,
                            Polygon2D, Interval, HalfLine>;

  /// Validates the invariants of the chosen kind; throws std::invalid_argument.
  explicit DomainSpec(Kind kind);

  int dim() const { return dim_; }
  const Kind& kind() const { return kind_; }
  std::string_view kind_name() const;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  bool bounded() const;

  /// Open-set membership.
  bool contains(const Point& x) const;

  /// Membership in the closure, with slack `tol`.
  bool contains_closure(const Point& x, double tol = 1e-12) const;

 private:
  Kind kind_;
  int dim_;
};

/// Identity frame of dimension n.
Frame identity_frame(int n);

// Convenience constructors.
DomainSpec make_half_space_k(int n, int k, Point vertex = {}, Frame frame = {});
DomainSpec make_ball(Point center, double radius);
DomainSpec make_ball_k(int n, int k, double radius, Point vertex = {}, Frame frame = {});
DomainSpec make_exterior_ball_k(int n, int k, double radius, Point vertex = {},
                                Frame frame = {});
DomainSpec make_polygon(std::vector<Eigen::Vector2d> vertices);

// ---------------------------------------------------------------------------
// Polygon helpers
// ---------------------------------------------------------------------------

double polygon_signed_area(const std::vector<Eigen::Vector2d>& v);
bool polygon_is_simple(const std::vector<Eigen::Vector2d>& v);
/// Strict interior test (even-odd rule).
bool polygon_contains(const std::vector<Eigen::Vector2d>& v, const Eigen::Vector2d& x);
double polygon_boundary_distance(const std::vector<Eigen::Vector2d>& v,
                                 const Eigen::Vector2d& x);

// ---------------------------------------------------------------------------
// Cross-sections, distances, classification
// ---------------------------------------------------------------------------

/// d = inf |x - P| and rho = sup |x - P| over the domain.
struct RadialExtent {
  double d = 0.0;
  double rho = kInf;
};

RadialExtent radial_extent(const DomainSpec& dom, const Point& center);

/// r^{-1}((S_r(P) cap Omega) - P). Throws std::invalid_argument for r <= 0.
CrossSection cross_section(const DomainSpec& dom, const Point& center, double r);

/// Deterministic set of `count` unit directions of R^n (n = 1 yields {-1, +1}).
PointList direction_grid(int n, int count);

enum class MssTag { InnerGRC, OuterGRC, Both, Neither };

std::string_view to_string(MssTag tag);

struct MssClassification {
  MssTag tag = MssTag::Neither;
  Point center;
  double d_omega = 0.0;
  double rho_omega = kInf;
};

struct MssOptions {
  int directions = 2048;
  double disagreement_tol = 1e-10;
};

/// Tests monotone inclusion of sampled cross-sections over `r_grid`.
MssClassification classify_mss(const DomainSpec& dom, const Point& center,
                               const std::vector<double>& r_grid, MssOptions opts = {});

/// Parameter intervals {t >= 0 : x + t dir in Omega}. The last interval may
/// end at +inf for unbounded domains.
std::vector<std::pair<double, double>> ray_intervals(const DomainSpec& dom, const Point& x,
                                                     const Point& dir);

}  // namespace conekit
