#include "conekit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conekit {

namespace {

struct RuleBuilder {
  int n;
  std::vector<double> coords;
  std::vector<double> weights;

  void add(const Eigen::Ref<const Eigen::VectorXd>& x, double w) {
    coords.insert(coords.end(), x.data(), x.data() + n);
    weights.push_back(w);
  }

  QuadratureRule finish() const {
    QuadratureRule rule;
    const int m = static_cast<int>(weights.size());
    rule.nodes = Eigen::Map<const Eigen::MatrixXd>(coords.data(), n, m);
    rule.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), m);
    return rule;
  }
};

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Collapsed (Duffy) Gauss rule on the triangle (a, b, c); the collapsed
// vertex is a, so an integrable point singularity at a is resolved.
void add_triangle(RuleBuilder& rb, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                  const Eigen::Vector2d& c, const Eigen::VectorXd& gx, const Eigen::VectorXd& gw) {
  const double area2 = std::abs(cross2(b - a, c - a));
  if (area2 <= 1e-300) return;
  for (int i = 0; i < gx.size(); ++i) {
    const double u = gx(i);
    for (int j = 0; j < gx.size(); ++j) {
      const double v = gx(j);
      const Eigen::Vector2d p = a + u * ((1 - v) * (b - a) + v * (c - a));
      rb.add(p, gw(i) * gw(j) * area2 * u);
    }
  }
}

QuadratureRule polygon_rule(const Polygon2D& poly, int order, const std::optional<Point>& sing) {
  const auto [gx, gw] = gauss_legendre(order, 0.0, 1.0);
  RuleBuilder rb{2, {}, {}};
  const auto& v = poly.vertices;
  for (const auto& tri : triangulate_polygon(v)) {
    const Eigen::Vector2d a = v[tri[0]], b = v[tri[1]], c = v[tri[2]];
    bool split = false;
    Eigen::Vector2d s;
    if (sing) {
      s = Eigen::Vector2d((*sing)(0), (*sing)(1));
      const double scale = std::abs(cross2(b - a, c - a));
      const double d1 = cross2(b - a, s - a), d2 = cross2(c - b, s - b), d3 = cross2(a - c, s - c);
      const double tol = -1e-14 * scale;
      split = d1 >= tol && d2 >= tol && d3 >= tol;
    }
    if (split) {
      add_triangle(rb, s, a, b, gx, gw);
      add_triangle(rb, s, b, c, gx, gw);
      add_triangle(rb, s, c, a, gx, gw);
    } else {
      add_triangle(rb, a, b, c, gx, gw);
    }
  }
  return rb.finish();
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  Eigen::VectorXd x(order), w(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (z * p1 - p0) / (z * z - 1.0);
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x(i) = -z;
    x(order - 1 - i) = z;
    w(i) = wi;
    w(order - 1 - i) = wi;
  }
  const double half_len = 0.5 * (b - a), mid = 0.5 * (a + b);
  return {(mid + half_len * x.array()).matrix(), half_len * w};
}

QuadratureRule sphere_rule(int n, int order) {
  if (n < 1) throw std::invalid_argument("sphere_rule: n must be >= 1");
  if (order < 1) throw std::invalid_argument("sphere_rule: order must be >= 1");
  RuleBuilder rb{n, {}, {}};
  if (n == 1) {
    rb.add(Eigen::VectorXd::Constant(1, -1.0), 1.0);
    rb.add(Eigen::VectorXd::Constant(1, 1.0), 1.0);
  } else if (n == 2) {
    const int m = 2 * order;
    for (int j = 0; j < m; ++j) {
      const double phi = 2 * kPi * (j + 0.5) / m;
      rb.add(Eigen::Vector2d(std::cos(phi), std::sin(phi)), 2 * kPi / m);
    }
  } else if (n == 3) {
    const auto [cx, cw] = gauss_legendre(order);
    const int m = 2 * order;
    for (int i = 0; i < order; ++i) {
      const double st = std::sqrt(std::max(0.0, 1.0 - cx(i) * cx(i)));
      for (int j = 0; j < m; ++j) {
        const double phi = 2 * kPi * (j + 0.5) / m;
        rb.add(Eigen::Vector3d(st * std::cos(phi), st * std::sin(phi), cx(i)), cw(i) * 2 * kPi / m);
      }
    }
  } else {
    // w = (t, sqrt(1 - t^2) v), v in S^{n-2}, dS = (1 - t^2)^{(n-3)/2} dt dS_{n-2}.
    const QuadratureRule sub = sphere_rule(n - 1, order);
    Eigen::VectorXd tx(order), tw(order);
    if ((n - 3) % 2 == 0) {
      const auto [gx, gw] = gauss_legendre(order);
      tx = gx;
      tw = gw.array() * (1.0 - gx.array().square()).pow((n - 3) / 2);
    } else {
      // Second-kind Chebyshev rule for the weight sqrt(1 - t^2).
      for (int i = 0; i < order; ++i) {
        const double th = kPi * (i + 1) / (order + 1);
        tx(i) = std::cos(th);
        const double st2 = std::sin(th) * std::sin(th);
        tw(i) = kPi / (order + 1) * st2 * std::pow(st2, (n - 4) / 2);
      }
    }
    Eigen::VectorXd w(n);
    for (int i = 0; i < order; ++i) {
      const double st = std::sqrt(std::max(0.0, 1.0 - tx(i) * tx(i)));
      for (int q = 0; q < sub.size(); ++q) {
        w(0) = tx(i);
        w.tail(n - 1) = st * sub.nodes.col(q);
        rb.add(w, tw(i) * sub.weights(q));
      }
    }
  }
  return rb.finish();
}

QuadratureRule polar_rule(const DomainSpec& dom, const Point& center, const PolarOptions& opts) {
  const int n = dom.dim();
  if (center.size() != n) throw std::invalid_argument("polar_rule: dimension mismatch");
  if (opts.order < 1 || opts.layers < 0) throw std::invalid_argument("polar_rule: bad options");
  const double trunc = opts.truncation.value_or(kInf);
  const QuadratureRule dirs = sphere_rule(n, opts.order);
  const auto [gx, gw] = gauss_legendre(opts.order, 0.0, 1.0);
  RuleBuilder rb{n, {}, {}};
  Eigen::VectorXd y(n);

  auto add_panel = [&](const Eigen::VectorXd& w, double wdir, double a, double b) {
    for (int i = 0; i < gx.size(); ++i) {
      const double t = a + (b - a) * gx(i);
      y = center + t * w;
      rb.add(y, wdir * gw(i) * (b - a) * std::pow(t, n - 1));
    }
  };

  for (int d = 0; d < dirs.size(); ++d) {
    const Eigen::VectorXd w = dirs.nodes.col(d);
    const double wdir = dirs.weights(d);
    for (auto [lo, hi] : ray_intervals(dom, center, w)) {
      hi = std::min(hi, trunc);
      if (!(hi > lo)) continue;
      if (!std::isfinite(hi)) {
        throw std::invalid_argument("polar_rule: unbounded ray requires a truncation radius");
      }
      if (lo <= 0.0) {
        double top = hi;
        for (int k = 0; k < opts.layers; ++k) {
          add_panel(w, wdir, 0.5 * top, top);
          top *= 0.5;
        }
        // Innermost panel with t = top * tau^3.
        for (int i = 0; i < gx.size(); ++i) {
          const double tau = gx(i);
          const double t = top * tau * tau * tau;
          y = center + t * w;
          rb.add(y, wdir * gw(i) * 3.0 * top * tau * tau * std::pow(t, n - 1));
        }
      } else {
        double a = lo;
        while (hi > 4.0 * a) {
          add_panel(w, wdir, a, 4.0 * a);
          a *= 4.0;
        }
        add_panel(w, wdir, a, hi);
      }
    }
  }
  return rb.finish();
}

QuadratureRule quadrature_for(const DomainSpec& dom, int order, const QuadOptions& opts) {
  if (order < 1) throw std::invalid_argument("quadrature_for: order must be >= 1");
  if (!dom.bounded() && !opts.truncation) {
    throw std::invalid_argument("quadrature_for: unbounded domain requires a truncation radius");
  }
  if (const auto* poly = dom.as<Polygon2D>()) return polygon_rule(*poly, order, opts.singular_point);
  PolarOptions po{order, opts.layers, opts.truncation};
  if (opts.singular_point) return polar_rule(dom, *opts.singular_point, po);
  if (const auto* iv = dom.as<Interval>()) {
    const auto [gx, gw] = gauss_legendre(order, iv->a, iv->b);
    QuadratureRule rule;
    rule.nodes = gx.transpose();
    rule.weights = gw;
    return rule;
  }
  const int n = dom.dim();
  Point c = Point::Zero(n);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ball>) {
          c = d.center;
        } else if constexpr (std::is_same_v<T, BallK> || std::is_same_v<T, ExteriorBallK> ||
                             std::is_same_v<T, HalfSpaceK> || std::is_same_v<T, TruncatedCone>) {
          c = d.vertex;
        } else if constexpr (std::is_same_v<T, HalfLine>) {
          c(0) = d.origin;
        }
      },
      dom.kind());
  return polar_rule(dom, c, po);
}

std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Eigen::Vector2d>& v) {
  std::vector<int> idx(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) idx[i] = static_cast<int>(i);
  if (polygon_signed_area(v) < 0) std::reverse(idx.begin(), idx.end());
  std::vector<std::array<int, 3>> tris;
  auto inside_tri = [&](const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                        const Eigen::Vector2d& c) {
    return cross2(b - a, p - a) >= 0 && cross2(c - b, p - b) >= 0 && cross2(a - c, p - c) >= 0;
  };
  std::size_t guard = 0;
  while (idx.size() > 3) {
    const std::size_t m = idx.size();
    bool clipped = false;
    for (std::size_t i = 0; i < m; ++i) {
      const int ia = idx[(i + m - 1) % m], ib = idx[i], ic = idx[(i + 1) % m];
      const Eigen::Vector2d &a = v[ia], &b = v[ib], &c = v[ic];
      if (cross2(b - a, c - b) <= 0) continue;
      bool ear = true;
      for (int j : idx) {
        if (j == ia || j == ib || j == ic) continue;
        if (v[j] == a || v[j] == b || v[j] == c) continue;
        if (inside_tri(v[j], a, b, c)) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped || ++guard > 4 * v.size()) {
      throw std::invalid_argument("triangulate_polygon: polygon is not simple");
    }
  }
  if (idx.size() == 3) tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

}  // namespace conekit
