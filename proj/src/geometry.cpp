#include "conekit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace conekit {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

bool finite(const Point& p) { return p.allFinite(); }

void check_frame(const Frame& frame, int n) {
  require(frame.rows() == n && frame.cols() == n, "frame must be n x n");
  const double err = (frame.transpose() * frame - Frame::Identity(n, n)).cwiseAbs().maxCoeff();
  require(err <= 1e-12, "frame must be orthonormal to 1e-12");
}

// Local cone coordinates z = O^T (x - P).
Eigen::VectorXd local(const Frame& frame, const Point& vertex, const Point& x) {
  return frame.transpose() * (x - vertex);
}

bool in_orthant(const Eigen::VectorXd& z, int k, double slack) {
  for (int i = 0; i < k; ++i) {
    if (!(z(i) > -slack)) return false;
    if (slack == 0.0 && z(i) <= 0.0) return false;
  }
  return true;
}

// max w.q over unit w with w_i >= 0 for i < k (local coordinates).
double max_dot_on_orthant_cap(const Eigen::VectorXd& q, int k) {
  Eigen::VectorXd c = q;
  for (int i = 0; i < k; ++i) c(i) = std::max(0.0, c(i));
  const double nc = c.norm();
  if (nc > 0) return nc;
  if (k == 0) return 0.0;
  double best = -kInf;
  for (int i = 0; i < k; ++i) best = std::max(best, q(i));
  return best;
}

double seg_point_distance(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                          const Eigen::Vector2d& x) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (x - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - x).norm();
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
  const double d1 = cross2(q2 - q1, p1 - q1);
  const double d2 = cross2(q2 - q1, p2 - q1);
  const double d3 = cross2(p2 - p1, q1 - p1);
  const double d4 = cross2(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_seg = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return std::min(a.x(), b.x()) <= c.x() && c.x() <= std::max(a.x(), b.x()) &&
           std::min(a.y(), b.y()) <= c.y() && c.y() <= std::max(a.y(), b.y());
  };
  if (d1 == 0 && on_seg(q1, q2, p1)) return true;
  if (d2 == 0 && on_seg(q1, q2, p2)) return true;
  if (d3 == 0 && on_seg(p1, p2, q1)) return true;
  if (d4 == 0 && on_seg(p1, p2, q2)) return true;
  return false;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a;
}

// Intersection of [lo, hi] with the ray-parameter constraints of an orthant
// cone z(t) = z0 + t w, z_i(t) > 0 for i < k.
std::pair<double, double> orthant_ray(const Eigen::VectorXd& z0, const Eigen::VectorXd& w, int k,
                                      double lo, double hi) {
  for (int i = 0; i < k; ++i) {
    if (w(i) > 0) {
      lo = std::max(lo, -z0(i) / w(i));
    } else if (w(i) < 0) {
      hi = std::min(hi, -z0(i) / w(i));
    } else if (z0(i) <= 0) {
      return {1.0, 0.0};
    }
  }
  return {lo, hi};
}

// Chord of the sphere |x + t d - c| = R; returns (t1, t2) or an empty pair.
std::pair<double, double> sphere_chord(const Point& x, const Point& d, const Point& c, double R) {
  const Point q = x - c;
  const double b = d.dot(q);
  const double disc = b * b - (q.squaredNorm() - R * R);
  if (disc <= 0) return {1.0, 0.0};
  const double sq = std::sqrt(disc);
  return {-b - sq, -b + sq};
}

void push_interval(std::vector<std::pair<double, double>>& out, double lo, double hi) {
  lo = std::max(lo, 0.0);
  if (hi > lo) out.emplace_back(lo, hi);
}

}  // namespace

// ---------------------------------------------------------------------------

Point signed_reflection(const Point& y, std::uint32_t mask, const Frame& frame,
                        const Point& center) {
  const int n = static_cast<int>(y.size());
  require(center.size() == n, "signed_reflection: dimension mismatch");
  require(frame.rows() == n && frame.cols() == n, "signed_reflection: frame must be n x n");
  require(n >= 32 || (mask >> n) == 0, "signed_reflection: mask selects an axis beyond n");
  Eigen::VectorXd z = frame.transpose() * (y - center);
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) z(i) = -z(i);
  }
  return center + frame * z;
}

// ---------------------------------------------------------------------------

CrossSection::CrossSection(int dim, Repr repr, bool empty)
    : dim_(dim), repr_(std::move(repr)), empty_(empty) {
  require(dim >= 1, "CrossSection: dim must be >= 1");
}

CrossSection CrossSection::full(int dim) {
  if (dim == 1) return CrossSection(1, SignSet{true, true});
  return CrossSection(dim, SphericalCapProduct{0, identity_frame(dim), std::nullopt});
}

CrossSection CrossSection::none(int dim) {
  if (dim == 1) return CrossSection(1, SignSet{false, false}, true);
  return CrossSection(dim, SphericalCapProduct{0, identity_frame(dim), std::nullopt}, true);
}

bool CrossSection::contains(const Point& w) const {
  if (empty_) return false;
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SphericalCapProduct>) {
          if (r.k > 0) {
            const Eigen::VectorXd z = r.frame.transpose() * w;
            if (!in_orthant(z, r.k, 0.0)) return false;
          }
          if (r.cap && !(w.dot(r.cap->axis) > r.cap->cos_half_angle)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, ArcUnion>) {
          const double a = wrap_angle(std::atan2(w(1), w(0)));
          for (const auto& arc : r.arcs) {
            const double off = wrap_angle(a - arc.start);
            if (arc.length >= 2 * kPi) return true;
            if (off > 0 && off < arc.length) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, SignSet>) {
          return w(0) < 0 ? r.negative : r.positive;
        } else {
          return r.domain->contains(r.center + r.radius * w);
        }
      },
      repr_);
}

// ---------------------------------------------------------------------------

Frame identity_frame(int n) { return Frame::Identity(n, n); }

DomainSpec::DomainSpec(Kind kind) : kind_(std::move(kind)), dim_(0) {
  dim_ = std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          require(d.dim >= 1, "FreeSpace: dim must be >= 1");
          return d.dim;
        } else if constexpr (std::is_same_v<T, HalfSpaceK>) {
          const int n = static_cast<int>(d.vertex.size());
          require(n >= 1 && finite(d.vertex), "HalfSpaceK: vertex must be finite");
          require(d.k >= 1 && d.k <= n, "HalfSpaceK: need 1 <= k <= n");
          check_frame(d.frame, n);
          return n;
        } else if constexpr (std::is_same_v<T, Ball>) {
          require(d.center.size() >= 1 && finite(d.center), "Ball: center must be finite");
          require(d.radius > 0 && std::isfinite(d.radius), "Ball: radius must be positive");
          return static_cast<int>(d.center.size());
        } else if constexpr (std::is_same_v<T, BallK> || std::is_same_v<T, ExteriorBallK>) {
          const int n = static_cast<int>(d.vertex.size());
          require(n >= 1 && finite(d.vertex), "BallK: vertex must be finite");
          require(d.k >= 0 && d.k <= n, "BallK: need 0 <= k <= n");
          require(d.radius > 0 && std::isfinite(d.radius), "BallK: radius must be positive");
          check_frame(d.frame, n);
          return n;
        } else if constexpr (std::is_same_v<T, TruncatedCone>) {
          const int n = static_cast<int>(d.vertex.size());
          require(n >= 1 && finite(d.vertex), "TruncatedCone: vertex must be finite");
          require(d.section.dim() == n, "TruncatedCone: section dimension mismatch");
          require(d.r_min >= 0 && d.r_min < d.r_max, "TruncatedCone: need 0 <= r_min < r_max");
          return n;
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          require(d.vertices.size() >= 3, "Polygon2D: need at least 3 vertices");
          for (const auto& v : d.vertices) require(v.allFinite(), "Polygon2D: finite vertices");
          require(polygon_signed_area(d.vertices) > 0, "Polygon2D: must be positively oriented");
          require(polygon_is_simple(d.vertices), "Polygon2D: must be simple");
          return 2;
        } else if constexpr (std::is_same_v<T, Interval>) {
          require(std::isfinite(d.a) && std::isfinite(d.b) && d.a < d.b, "Interval: need a < b");
          return 1;
        } else {
          require(std::isfinite(d.origin), "HalfLine: origin must be finite");
          require(d.direction == 1 || d.direction == -1, "HalfLine: direction must be +1 or -1");
          return 1;
        }
      },
      kind_);
}

std::string_view DomainSpec::kind_name() const {
  static constexpr std::string_view names[] = {"FreeSpace", "HalfSpaceK",    "Ball",
                                               "BallK",     "ExteriorBallK", "TruncatedCone",
                                               "Polygon2D", "Interval",      "HalfLine"};
  return names[kind_.index()];
}

bool DomainSpec::bounded() const {
  return std::holds_alternative<Ball>(kind_) || std::holds_alternative<BallK>(kind_) ||
         std::holds_alternative<TruncatedCone>(kind_) ||
         std::holds_alternative<Polygon2D>(kind_) || std::holds_alternative<Interval>(kind_);
}

bool DomainSpec::contains(const Point& x) const {
  if (x.size() != dim_) throw std::invalid_argument("contains: dimension mismatch");
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          return true;
        } else if constexpr (std::is_same_v<T, HalfSpaceK>) {
          return in_orthant(local(d.frame, d.vertex, x), d.k, 0.0);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (x - d.center).norm() < d.radius;
        } else if constexpr (std::is_same_v<T, BallK>) {
          return (x - d.vertex).norm() < d.radius && in_orthant(local(d.frame, d.vertex, x), d.k, 0.0);
        } else if constexpr (std::is_same_v<T, ExteriorBallK>) {
          return (x - d.vertex).norm() > d.radius && in_orthant(local(d.frame, d.vertex, x), d.k, 0.0);
        } else if constexpr (std::is_same_v<T, TruncatedCone>) {
          const double r = (x - d.vertex).norm();
          if (!(r > d.r_min && r < d.r_max) || r == 0.0) return false;
          return d.section.contains((x - d.vertex) / r);
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          const Eigen::Vector2d p(x(0), x(1));
          if (polygon_boundary_distance(d.vertices, p) == 0.0) return false;
          return polygon_contains(d.vertices, p);
        } else if constexpr (std::is_same_v<T, Interval>) {
          return d.a < x(0) && x(0) < d.b;
        } else {
          return d.direction * (x(0) - d.origin) > 0;
        }
      },
      kind_);
}

bool DomainSpec::contains_closure(const Point& x, double tol) const {
  if (x.size() != dim_) throw std::invalid_argument("contains_closure: dimension mismatch");
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          return true;
        } else if constexpr (std::is_same_v<T, HalfSpaceK>) {
          return in_orthant(local(d.frame, d.vertex, x), d.k, tol);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (x - d.center).norm() <= d.radius + tol;
        } else if constexpr (std::is_same_v<T, BallK>) {
          return (x - d.vertex).norm() <= d.radius + tol &&
                 in_orthant(local(d.frame, d.vertex, x), d.k, tol);
        } else if constexpr (std::is_same_v<T, ExteriorBallK>) {
          return (x - d.vertex).norm() >= d.radius - tol &&
                 in_orthant(local(d.frame, d.vertex, x), d.k, tol);
        } else if constexpr (std::is_same_v<T, TruncatedCone>) {
          const double r = (x - d.vertex).norm();
          if (r < d.r_min - tol || r > d.r_max + tol) return false;
          if (r <= tol) return d.r_min <= tol;
          // Closure of the section is approximated by a small angular probe.
          const Point w = (x - d.vertex) / r;
          if (d.section.contains(w)) return true;
          for (const Point& e : direction_grid(static_cast<int>(x.size()), 64)) {
            Point v = w + 1e-9 * e;
            if (d.section.contains(v.normalized())) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          const Eigen::Vector2d p(x(0), x(1));
          return polygon_contains(d.vertices, p) || polygon_boundary_distance(d.vertices, p) <= tol;
        } else if constexpr (std::is_same_v<T, Interval>) {
          return d.a - tol <= x(0) && x(0) <= d.b + tol;
        } else {
          return d.direction * (x(0) - d.origin) >= -tol;
        }
      },
      kind_);
}

namespace {
Point zero_if_empty(Point p, int n) { return p.size() == 0 ? Point(Point::Zero(n)) : p; }
Frame identity_if_empty(Frame f, int n) { return f.size() == 0 ? identity_frame(n) : f; }
}  // namespace

DomainSpec make_half_space_k(int n, int k, Point vertex, Frame frame) {
  return DomainSpec(HalfSpaceK{k, zero_if_empty(std::move(vertex), n),
                               identity_if_empty(std::move(frame), n)});
}

DomainSpec make_ball(Point center, double radius) {
  return DomainSpec(Ball{std::move(center), radius});
}

DomainSpec make_ball_k(int n, int k, double radius, Point vertex, Frame frame) {
  return DomainSpec(BallK{k, zero_if_empty(std::move(vertex), n),
                          identity_if_empty(std::move(frame), n), radius});
}

DomainSpec make_exterior_ball_k(int n, int k, double radius, Point vertex, Frame frame) {
  return DomainSpec(ExteriorBallK{k, zero_if_empty(std::move(vertex), n),
                                  identity_if_empty(std::move(frame), n), radius});
}

DomainSpec make_polygon(std::vector<Eigen::Vector2d> vertices) {
  return DomainSpec(Polygon2D{std::move(vertices)});
}

// ---------------------------------------------------------------------------

double polygon_signed_area(const std::vector<Eigen::Vector2d>& v) {
  double a = 0.0;
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i) a += cross2(v[i], v[(i + 1) % m]);
  return 0.5 * a;
}

bool polygon_is_simple(const std::vector<Eigen::Vector2d>& v) {
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i) {
    if ((v[i] - v[(i + 1) % m]).norm() == 0.0) return false;
    for (std::size_t j = i + 1; j < m; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m])) return false;
    }
  }
  return true;
}

bool polygon_contains(const std::vector<Eigen::Vector2d>& v, const Eigen::Vector2d& x) {
  bool inside = false;
  const std::size_t m = v.size();
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    const auto& a = v[i];
    const auto& b = v[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

double polygon_boundary_distance(const std::vector<Eigen::Vector2d>& v, const Eigen::Vector2d& x) {
  double best = kInf;
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i) best = std::min(best, seg_point_distance(v[i], v[(i + 1) % m], x));
  return best;
}

// ---------------------------------------------------------------------------

RadialExtent radial_extent(const DomainSpec& dom, const Point& P) {
  if (P.size() != dom.dim()) throw std::invalid_argument("radial_extent: dimension mismatch");
  return std::visit(
      [&](const auto& d) -> RadialExtent {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          return {0.0, kInf};
        } else if constexpr (std::is_same_v<T, HalfSpaceK>) {
          Eigen::VectorXd z = local(d.frame, d.vertex, P);
          double s = 0.0;
          for (int i = 0; i < d.k; ++i) s += std::pow(std::min(0.0, z(i)), 2);
          return {std::sqrt(s), kInf};
        } else if constexpr (std::is_same_v<T, Ball>) {
          const double c = (P - d.center).norm();
          return {std::max(0.0, c - d.radius), c + d.radius};
        } else if constexpr (std::is_same_v<T, BallK>) {
          const Eigen::VectorXd q = local(d.frame, d.vertex, P);
          Eigen::VectorXd proj = q;
          for (int i = 0; i < d.k; ++i) proj(i) = std::max(0.0, proj(i));
          const double np = proj.norm();
          if (np > d.radius) proj *= d.radius / np;
          const double m = max_dot_on_orthant_cap(-q, d.k);
          const double far = std::sqrt(std::max(0.0, d.radius * d.radius + q.squaredNorm() + 2 * d.radius * m));
          return {(q - proj).norm(), std::max(q.norm(), far)};
        } else if constexpr (std::is_same_v<T, ExteriorBallK>) {
          const Eigen::VectorXd q = local(d.frame, d.vertex, P);
          Eigen::VectorXd proj = q;
          for (int i = 0; i < d.k; ++i) proj(i) = std::max(0.0, proj(i));
          if (proj.norm() >= d.radius) return {(q - proj).norm(), kInf};
          const double m = max_dot_on_orthant_cap(q, d.k);
          return {std::sqrt(std::max(0.0, d.radius * d.radius + q.squaredNorm() - 2 * d.radius * m)), kInf};
        } else if constexpr (std::is_same_v<T, TruncatedCone>) {
          if ((P - d.vertex).norm() == 0.0) return {d.r_min, d.r_max};
          // Sampled estimate for off-vertex centers.
          double lo = kInf, hi = 0.0;
          const int n = static_cast<int>(P.size());
          for (const Point& w : direction_grid(n, 4096)) {
            if (!d.section.contains(w)) continue;
            for (int i = 0; i <= 64; ++i) {
              const double r = d.r_min + (d.r_max - d.r_min) * i / 64.0;
              const double dist = (d.vertex + r * w - P).norm();
              lo = std::min(lo, dist);
              hi = std::max(hi, dist);
            }
          }
          return {dom.contains_closure(P) ? 0.0 : lo, hi};
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          const Eigen::Vector2d p(P(0), P(1));
          double far = 0.0;
          for (const auto& v : d.vertices) far = std::max(far, (v - p).norm());
          const double near = polygon_contains(d.vertices, p) ? 0.0 : polygon_boundary_distance(d.vertices, p);
          return {near, far};
        } else if constexpr (std::is_same_v<T, Interval>) {
          const double x = P(0);
          const double near = (x >= d.a && x <= d.b) ? 0.0 : std::min(std::abs(x - d.a), std::abs(x - d.b));
          return {near, std::max(std::abs(x - d.a), std::abs(x - d.b))};
        } else {
          const double t = d.direction * (P(0) - d.origin);
          return {t >= 0 ? 0.0 : -t, kInf};
        }
      },
      dom.kind());
}

namespace {

CrossSection polygon_section(const Polygon2D& poly, const Eigen::Vector2d& p, double r) {
  std::vector<double> angles;
  const std::size_t m = poly.vertices.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector2d a = poly.vertices[i] - p;
    const Eigen::Vector2d e = poly.vertices[(i + 1) % m] - poly.vertices[i];
    // |a + t e|^2 = r^2
    const double A = e.squaredNorm();
    const double B = a.dot(e);
    const double C = a.squaredNorm() - r * r;
    const double disc = B * B - A * C;
    if (disc < 0) continue;
    const double sq = std::sqrt(disc);
    for (double t : {(-B - sq) / A, (-B + sq) / A}) {
      if (t >= 0.0 && t <= 1.0) {
        const Eigen::Vector2d q = a + t * e;
        angles.push_back(wrap_angle(std::atan2(q.y(), q.x())));
      }
    }
  }
  auto inside_at = [&](double th) {
    return polygon_contains(poly.vertices, p + r * Eigen::Vector2d(std::cos(th), std::sin(th)));
  };
  if (angles.empty()) {
    if (inside_at(0.0)) return CrossSection(2, ArcUnion{{{0.0, 2 * kPi}}});
    return CrossSection(2, ArcUnion{}, true);
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-15; }),
               angles.end());
  ArcUnion arcs;
  const std::size_t q = angles.size();
  for (std::size_t i = 0; i < q; ++i) {
    const double a0 = angles[i];
    double len = (i + 1 < q ? angles[i + 1] : angles[0] + 2 * kPi) - a0;
    if (q == 1) len = 2 * kPi;
    if (len <= 0) continue;
    if (inside_at(a0 + 0.5 * len)) {
      if (!arcs.arcs.empty()) {
        auto& last = arcs.arcs.back();
        if (std::abs(last.start + last.length - a0) < 1e-15) {
          last.length += len;
          continue;
        }
      }
      arcs.arcs.push_back({a0, len});
    }
  }
  // Merge wrap-around pieces.
  if (arcs.arcs.size() >= 2) {
    auto& first = arcs.arcs.front();
    auto& last = arcs.arcs.back();
    if (std::abs(wrap_angle(last.start + last.length) - first.start) < 1e-15) {
      last.length += first.length;
      arcs.arcs.erase(arcs.arcs.begin());
    }
  }
  const bool empty = arcs.arcs.empty();
  return CrossSection(2, std::move(arcs), empty);
}

}  // namespace

CrossSection cross_section(const DomainSpec& dom, const Point& P, double r) {
  if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("cross_section: r must be positive");
  if (P.size() != dom.dim()) throw std::invalid_argument("cross_section: dimension mismatch");
  const int n = dom.dim();
  auto indicator = [&]() {
    return CrossSection(n, IndicatorSection{std::make_shared<const DomainSpec>(dom), P, r});
  };
  return std::visit(
      [&](const auto& d) -> CrossSection {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          return CrossSection::full(n);
        } else if constexpr (std::is_same_v<T, HalfSpaceK>) {
          if ((P - d.vertex).norm() != 0.0) return indicator();
          return CrossSection(n, SphericalCapProduct{d.k, d.frame, std::nullopt});
        } else if constexpr (std::is_same_v<T, Ball>) {
          const double c = (P - d.center).norm();
          if (c == 0.0) return r < d.radius ? CrossSection::full(n) : CrossSection::none(n);
          const double cosv = (r * r + c * c - d.radius * d.radius) / (2 * r * c);
          if (cosv >= 1.0) return CrossSection::none(n);
          if (n == 1) {
            const double dir = (d.center(0) - P(0)) / c;
            return CrossSection(1, SignSet{-dir > cosv, dir > cosv});
          }
          if (cosv < -1.0) return CrossSection::full(n);
          return CrossSection(n, SphericalCapProduct{0, identity_frame(n),
                                                     SphericalCap{(d.center - P) / c, cosv}});
        } else if constexpr (std::is_same_v<T, BallK>) {
          if ((P - d.vertex).norm() != 0.0) return indicator();
          if (r >= d.radius) return CrossSection::none(n);
          return CrossSection(n, SphericalCapProduct{d.k, d.frame, std::nullopt});
        } else if constexpr (std::is_same_v<T, ExteriorBallK>) {
          if ((P - d.vertex).norm() != 0.0) return indicator();
          if (r <= d.radius) return CrossSection::none(n);
          return CrossSection(n, SphericalCapProduct{d.k, d.frame, std::nullopt});
        } else if constexpr (std::is_same_v<T, TruncatedCone>) {
          if ((P - d.vertex).norm() != 0.0) return indicator();
          if (!(r > d.r_min && r < d.r_max)) return CrossSection::none(n);
          return d.section;
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          return polygon_section(d, Eigen::Vector2d(P(0), P(1)), r);
        } else {
          Point lo = P, hi = P;
          lo(0) -= r;
          hi(0) += r;
          const bool neg = dom.contains(lo), pos = dom.contains(hi);
          return CrossSection(1, SignSet{neg, pos}, !neg && !pos);
        }
      },
      dom.kind());
}

PointList direction_grid(int n, int count) {
  if (n < 1) throw std::invalid_argument("direction_grid: n must be >= 1");
  PointList dirs;
  if (n == 1) {
    dirs.push_back(Point::Constant(1, -1.0));
    dirs.push_back(Point::Constant(1, 1.0));
    return dirs;
  }
  if (count < 1) throw std::invalid_argument("direction_grid: count must be >= 1");
  dirs.reserve(count);
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2 * kPi * (i + 0.5) / count;
      Point w(2);
      w << std::cos(a), std::sin(a);
      dirs.push_back(w);
    }
  } else if (n == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * i;
      Point w(3);
      w << rho * std::cos(a), rho * std::sin(a), z;
      dirs.push_back(w);
    }
  } else {
    std::mt19937_64 rng(0x5eed5eedULL + n);
    std::normal_distribution<double> g;
    for (int i = 0; i < count; ++i) {
      Point w(n);
      for (int j = 0; j < n; ++j) w(j) = g(rng);
      dirs.push_back(w.normalized());
    }
  }
  return dirs;
}

std::string_view to_string(MssTag tag) {
  switch (tag) {
    case MssTag::InnerGRC: return "InnerGRC";
    case MssTag::OuterGRC: return "OuterGRC";
    case MssTag::Both: return "Both";
    case MssTag::Neither: return "Neither";
  }
  return "Neither";
}

MssClassification classify_mss(const DomainSpec& dom, const Point& P,
                               const std::vector<double>& r_grid, MssOptions opts) {
  if (r_grid.empty()) throw std::invalid_argument("classify_mss: empty r_grid");
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) {
    throw std::invalid_argument("classify_mss: r_grid must be sorted ascending");
  }
  if (P.size() != dom.dim()) throw std::invalid_argument("classify_mss: dimension mismatch");
  const RadialExtent ext = radial_extent(dom, P);
  MssClassification out{MssTag::Neither, P, ext.d, ext.rho};
  if (dom.as<FreeSpace>()) {
    out.tag = MssTag::Both;
    return out;
  }

  const PointList dirs = direction_grid(dom.dim(), opts.directions);
  auto indicator = [&](double r) {
    const CrossSection cs = cross_section(dom, P, r);
    std::vector<char> ind(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) ind[i] = cs.contains(dirs[i]) ? 1 : 0;
    return ind;
  };
  // decreasing: later sections contained in earlier ones.
  auto monotone = [&](double lo, double hi, bool decreasing) {
    std::vector<char> prev;
    for (double r : r_grid) {
      if (!(r > lo && r < hi) || r <= 0) continue;
      std::vector<char> cur = indicator(r);
      if (!prev.empty()) {
        std::size_t bad = 0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
          bad += decreasing ? (cur[i] && !prev[i]) : (prev[i] && !cur[i]);
        }
        if (static_cast<double>(bad) / cur.size() > opts.disagreement_tol) return false;
      }
      prev = std::move(cur);
    }
    return true;
  };

  const bool inner = dom.contains_closure(P) && monotone(0.0, ext.rho, true);
  const bool outer = !dom.contains(P) && monotone(ext.d, kInf, false);
  out.tag = inner && outer ? MssTag::Both
          : inner          ? MssTag::InnerGRC
          : outer          ? MssTag::OuterGRC
                           : MssTag::Neither;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> ray_intervals(const DomainSpec& dom, const Point& x,
                                                     const Point& dir) {
  if (x.size() != dom.dim() || dir.size() != dom.dim()) {
    throw std::invalid_argument("ray_intervals: dimension mismatch");
  }
  std::vector<std::pair<double, double>> out;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FreeSpace>) {
          out.emplace_back(0.0, kInf);
        } else if constexpr (std::is_same_v<T, HalfSpaceK>) {
          auto [lo, hi] = orthant_ray(local(d.frame, d.vertex, x), d.frame.transpose() * dir, d.k, 0.0, kInf);
          push_interval(out, lo, hi);
        } else if constexpr (std::is_same_v<T, Ball>) {
          auto [t1, t2] = sphere_chord(x, dir, d.center, d.radius);
          push_interval(out, t1, t2);
        } else if constexpr (std::is_same_v<T, BallK>) {
          auto [t1, t2] = sphere_chord(x, dir, d.vertex, d.radius);
          if (t2 > t1) {
            auto [lo, hi] = orthant_ray(local(d.frame, d.vertex, x), d.frame.transpose() * dir, d.k, t1, t2);
            push_interval(out, lo, hi);
          }
        } else if constexpr (std::is_same_v<T, ExteriorBallK>) {
          auto [lo, hi] = orthant_ray(local(d.frame, d.vertex, x), d.frame.transpose() * dir, d.k, 0.0, kInf);
          if (!(hi > lo)) return;
          auto [t1, t2] = sphere_chord(x, dir, d.vertex, d.radius);
          if (!(t2 > t1)) {
            push_interval(out, lo, hi);
          } else {
            push_interval(out, lo, std::min(hi, t1));
            push_interval(out, std::max(lo, t2), hi);
          }
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          const Eigen::Vector2d p(x(0), x(1)), w(dir(0), dir(1));
          std::vector<double> ts{0.0};
          const std::size_t m = d.vertices.size();
          for (std::size_t i = 0; i < m; ++i) {
            const Eigen::Vector2d a = d.vertices[i], e = d.vertices[(i + 1) % m] - a;
            const double den = cross2(w, e);
            if (den == 0.0) continue;
            const Eigen::Vector2d ap = a - p;
            const double t = cross2(ap, e) / den;
            const double u = cross2(ap, w) / den;
            if (t > 0 && u >= 0 && u <= 1) ts.push_back(t);
          }
          std::sort(ts.begin(), ts.end());
          ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
          for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            const double mid = 0.5 * (ts[i] + ts[i + 1]);
            if (polygon_contains(d.vertices, p + mid * w)) {
              if (!out.empty() && out.back().second == ts[i]) {
                out.back().second = ts[i + 1];
              } else {
                out.emplace_back(ts[i], ts[i + 1]);
              }
            }
          }
        } else if constexpr (std::is_same_v<T, Interval>) {
          const double s = dir(0);
          push_interval(out, s > 0 ? d.a - x(0) : x(0) - d.b, s > 0 ? d.b - x(0) : x(0) - d.a);
        } else if constexpr (std::is_same_v<T, HalfLine>) {
          const double s = dir(0) * d.direction;
          const double t0 = d.direction * (d.origin - x(0));  // boundary parameter along +direction
          if (s > 0) push_interval(out, t0, kInf);
          else push_interval(out, 0.0, -t0);
        } else {
          // TruncatedCone: radial shell chord intersected with sampled section membership.
          auto [t1, t2] = sphere_chord(x, dir, d.vertex, d.r_max);
          if (!(t2 > t1)) return;
          t1 = std::max(t1, 0.0);
          const int steps = 4096;
          const double h = (t2 - t1) / steps;
          auto in = [&](double t) { return dom.contains(x + t * dir); };
          auto refine = [&](double a, double b, bool a_in) {
            for (int it = 0; it < 60; ++it) {
              const double m = 0.5 * (a + b);
              (in(m) == a_in ? a : b) = m;
            }
            return 0.5 * (a + b);
          };
          bool prev = in(t1 + 0.5 * h * 1e-6);
          double start = t1;
          for (int i = 1; i <= steps; ++i) {
            const double t = (i == steps) ? t2 - 1e-12 * (t2 - t1) : t1 + i * h;
            const bool cur = in(t);
            if (cur != prev) {
              const double edge = refine(t - h, t, prev);
              if (prev) push_interval(out, start, edge);
              else start = edge;
              prev = cur;
            }
          }
          if (prev) push_interval(out, start, t2);
        }
      },
      dom.kind());
  return out;
}

}  // namespace conekit
