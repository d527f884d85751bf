#include "conekit/blowup.hpp"

#include "conekit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conekit {

namespace {

using Vec2 = Eigen::Vector2d;

double wrap(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double polygon_scale(const Polygon2D& dom) {
  double s = 1.0;
  for (const auto& v : dom.vertices) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

double seg_distance(const Vec2& a, const Vec2& b, const Vec2& x) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0 ? std::clamp((x - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - x).norm();
}

// Boundary of a planar set inside the closed unit disk: segments and arcs of
// the unit circle.
struct Pieces {
  std::vector<std::pair<Vec2, Vec2>> segments;
  std::vector<std::pair<double, double>> arcs;  // start, length

  double distance(const Vec2& x) const {
    double d = kInf;
    for (const auto& [a, b] : segments) d = std::min(d, seg_distance(a, b, x));
    const double r = x.norm();
    const double phi = wrap(std::atan2(x.y(), x.x()));
    for (const auto& [st, len] : arcs) {
      if (r > 0 && wrap(phi - st) <= len) {
        d = std::min(d, std::abs(r - 1.0));
      } else {
        d = std::min(d, (x - Vec2(std::cos(st), std::sin(st))).norm());
        d = std::min(d, (x - Vec2(std::cos(st + len), std::sin(st + len))).norm());
      }
    }
    return d;
  }

  std::vector<Vec2> samples(int per_piece) const {
    std::vector<Vec2> out;
    for (const auto& [a, b] : segments) {
      for (int i = 0; i <= per_piece; ++i) out.push_back(a + (b - a) * (static_cast<double>(i) / per_piece));
    }
    for (const auto& [st, len] : arcs) {
      for (int i = 0; i <= per_piece; ++i) {
        const double t = st + len * i / per_piece;
        out.emplace_back(std::cos(t), std::sin(t));
      }
    }
    return out;
  }
};

// Part of segment [a, b] inside the closed unit disk.
void add_clipped(Pieces& P, const Vec2& a, const Vec2& b) {
  const Vec2 e = b - a;
  const double A = e.squaredNorm();
  if (A == 0) return;
  const double B = a.dot(e), C = a.squaredNorm() - 1.0;
  const double disc = B * B - A * C;
  if (disc <= 0) return;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(0.0, (-B - sq) / A), t1 = std::min(1.0, (-B + sq) / A);
  if (t1 > t0) P.segments.emplace_back(a + t0 * e, a + t1 * e);
}

Pieces polygon_pieces(const Polygon2D& poly) {
  Pieces P;
  const std::size_t m = poly.vertices.size();
  for (std::size_t i = 0; i < m; ++i) add_clipped(P, poly.vertices[i], poly.vertices[(i + 1) % m]);
  const CrossSection cs = cross_section(DomainSpec(poly), Point::Zero(2), 1.0);
  if (!cs.empty()) {
    if (const auto* arcs = std::get_if<ArcUnion>(&cs.repr())) {
      for (const auto& a : arcs->arcs) P.arcs.emplace_back(a.start, a.length);
    }
  }
  return P;
}

Pieces cone_pieces(const ConeDescription& c) {
  Pieces P;
  const Vec2 u1(std::cos(c.start), std::sin(c.start));
  const Vec2 u2(std::cos(c.start + c.angle), std::sin(c.start + c.angle));
  P.segments.emplace_back(Vec2::Zero(), u1);
  P.segments.emplace_back(Vec2::Zero(), u2);
  P.arcs.emplace_back(c.start, c.angle);
  return P;
}

double fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

bool ConeDescription::contains(const Vec2& x) const {
  if (x.squaredNorm() == 0) return false;
  const double rel = wrap(std::atan2(x.y(), x.x()) - start);
  return rel > 0 && rel < angle;
}

bool ConeDescription::contains_closure(const Vec2& x, double tol) const {
  if (x.norm() <= tol) return true;
  if (contains(x)) return true;
  const Vec2 u1(std::cos(start), std::sin(start)), u2(std::cos(start + angle), std::sin(start + angle));
  return seg_distance(Vec2::Zero(), 2 * x.norm() * u1, x) <= tol ||
         seg_distance(Vec2::Zero(), 2 * x.norm() * u2, x) <= tol;
}

Polygon2D rescale_domain(const Polygon2D& dom, const Vec2& anchor, double rho) {
  if (!(rho > 0)) throw std::invalid_argument("rescale_domain: rho must be positive");
  const double tol = 1e-12 * std::max(1.0, anchor.norm());
  if (polygon_boundary_distance(dom.vertices, anchor) > tol) {
    throw std::invalid_argument("rescale_domain: anchor is not on the boundary");
  }
  Polygon2D out;
  out.vertices.reserve(dom.vertices.size());
  for (const auto& v : dom.vertices) out.vertices.push_back((v - anchor) / rho);
  return out;
}

ConeDescription limit_cone(const Polygon2D& dom, const Vec2& x0) {
  const auto& v = dom.vertices;
  const int m = static_cast<int>(v.size());
  const double tol = 1e-12 * polygon_scale(dom);
  for (int i = 0; i < m; ++i) {
    if ((v[i] - x0).norm() <= tol) {
      const Vec2 e1 = v[(i + 1) % m] - v[i], e2 = v[(i + m - 1) % m] - v[i];
      ConeDescription c;
      c.start = wrap(std::atan2(e1.y(), e1.x()));
      c.angle = wrap(std::atan2(cross(e1, e2), e1.dot(e2)));
      c.vertex_index = i;
      return c;
    }
  }
  for (int i = 0; i < m; ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % m];
    if (seg_distance(a, b, x0) <= tol) {
      ConeDescription c;
      c.start = wrap(std::atan2((b - a).y(), (b - a).x()));
      c.angle = kPi;
      return c;
    }
  }
  throw std::invalid_argument("limit_cone: x0 is not on the boundary");
}

double interior_angle_by_turning(const Polygon2D& dom, int i) {
  const auto& v = dom.vertices;
  const int m = static_cast<int>(v.size());
  if (i < 0 || i >= m) throw std::invalid_argument("interior_angle_by_turning: bad index");
  const Vec2 in = v[i] - v[(i + m - 1) % m], out = v[(i + 1) % m] - v[i];
  const double turn = std::atan2(cross(in, out), in.dot(out));
  return kPi - turn;
}

BcbReport bcb_check(const Polygon2D& dom, const Vec2& x0, const std::vector<double>& rhos,
                    const BcbOptions& opts) {
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0) || (i > 0 && !(rhos[i] < rhos[i - 1]))) {
      throw std::invalid_argument("bcb_check: rho list must be positive and strictly decreasing");
    }
  }
  if (opts.grid < 2) throw std::invalid_argument("bcb_check: grid must be >= 2");
  BcbReport rep;
  rep.cone = limit_cone(dom, x0);
  const int g = opts.grid;
  const double h = 2.0 / (g - 1);
  std::vector<Vec2> grid;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const Vec2 p(-1 + i * h, -1 + j * h);
      if (p.squaredNorm() <= 1.0) grid.push_back(p);
    }
  }
  std::vector<char> in_cone(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) in_cone[q] = rep.cone.contains(grid[q]);
  const Pieces cone_b = cone_pieces(rep.cone);

  rep.entries.resize(rhos.size());
  parallel_for(static_cast<int>(rhos.size()), [&](int k) {
    const double rho = rhos[k];
    Vec2 anchor = x0;
    if (opts.approach) anchor = x0 + rho * rho * *opts.approach;
    const Polygon2D scaled = rescale_domain(dom, anchor, rho);
    BcbEntry e;
    e.rho = rho;
    e.grid_resolution = h;
    // Grid indicator distance.
    std::vector<char> in_dom(grid.size());
    for (std::size_t q = 0; q < grid.size(); ++q) in_dom[q] = polygon_contains(scaled.vertices, grid[q]);
    auto directed = [&](const std::vector<char>& A, const std::vector<char>& B) {
      bool any_b = false;
      for (char b : B) any_b = any_b || b;
      double worst = 0.0;
      for (std::size_t q = 0; q < grid.size(); ++q) {
        if (!A[q] || B[q]) continue;
        if (!any_b) return 2.0;
        double best = kInf;
        for (std::size_t r = 0; r < grid.size(); ++r) {
          if (B[r]) best = std::min(best, (grid[q] - grid[r]).norm());
        }
        worst = std::max(worst, best);
      }
      return worst;
    };
    e.hausdorff = std::max(directed(in_dom, in_cone), directed(in_cone, in_dom));
    // Boundary-sampled distance between the closed sets.
    const Pieces dom_b = polygon_pieces(scaled);
    const double tol = 1e-12;
    auto in_dom_closure = [&](const Vec2& x) {
      return x.norm() <= 1 + tol &&
             (polygon_contains(scaled.vertices, x) || polygon_boundary_distance(scaled.vertices, x) <= tol);
    };
    auto in_cone_closure = [&](const Vec2& x) { return x.norm() <= 1 + tol && rep.cone.contains_closure(x, tol); };
    double hb = 0.0;
    for (const Vec2& a : dom_b.samples(opts.boundary_samples)) {
      if (!in_cone_closure(a)) hb = std::max(hb, cone_b.distance(a));
    }
    for (const Vec2& b : cone_b.samples(opts.boundary_samples)) {
      if (!in_dom_closure(b)) hb = std::max(hb, dom_b.distance(b));
    }
    e.hausdorff_boundary = hb;
    rep.entries[k] = e;
  });
  std::vector<double> xs, ys;
  for (const auto& e : rep.entries) {
    if (e.hausdorff_boundary > 0) {
      xs.push_back(e.rho);
      ys.push_back(e.hausdorff_boundary);
    }
  }
  if (xs.size() >= 2) rep.boundary_slope = fit_loglog(xs, ys);
  return rep;
}

nlohmann::json to_json(const BcbReport& r) {
  nlohmann::json j;
  j["cone_angle"] = r.cone.angle;
  j["cone_start"] = r.cone.start;
  j["vertex_index"] = r.cone.vertex_index;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"rho", e.rho},
                       {"hausdorff", e.hausdorff},
                       {"hausdorff_boundary", e.hausdorff_boundary},
                       {"grid_resolution", e.grid_resolution},
                       {"cone_angle", r.cone.angle}});
  }
  j["entries"] = entries;
  j["boundary_slope"] = r.boundary_slope ? nlohmann::json(*r.boundary_slope) : nlohmann::json(nullptr);
  return j;
}

double blowup_scale(double m_j, double p, double s) {
  if (!(m_j > 0)) throw std::invalid_argument("blowup_scale: m_j must be positive");
  if (!(s > 0)) throw std::invalid_argument("blowup_scale: s must be positive");
  return std::pow(m_j, (1 - p) / (2 * s));
}

GridFunction rescale_solution(const GridFunction& u, const Point& x_j, double m_j, double p, double s) {
  if (!(p > 1)) throw std::invalid_argument("rescale_solution: p must exceed 1");
  const double lambda = blowup_scale(m_j, p, s);
  return u.transformed(x_j, lambda, 1.0 / m_j);
}

}  // namespace conekit
