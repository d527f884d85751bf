#include "conekit/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conekit {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

bool strictly_increasing(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (!(v(i) > v(i - 1))) return false;
  }
  return true;
}

// Index i with v(i) <= t <= v(i+1), or -1 when t is out of range (slack
// relative to the span).
int locate(const Eigen::VectorXd& v, double t) {
  const Eigen::Index m = v.size();
  const double slack = 1e-12 * std::max(1.0, std::abs(v(m - 1) - v(0)));
  if (t < v(0) - slack || t > v(m - 1) + slack) return -1;
  if (m == 1) return 0;
  const auto it = std::upper_bound(v.data(), v.data() + m, t);
  int i = static_cast<int>(it - v.data()) - 1;
  return std::clamp(i, 0, static_cast<int>(m) - 2);
}

// Moments M = S u of the cubic spline through (r_i, u_i).
Eigen::MatrixXd spline_moment_matrix(const Eigen::VectorXd& r) {
  const int m = static_cast<int>(r.size());
  if (m < 3) return Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m), B = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd h = r.tail(m - 1) - r.head(m - 1);
  for (int i = 1; i < m - 1; ++i) {
    A(i, i - 1) = h(i - 1);
    A(i, i) = 2 * (h(i - 1) + h(i));
    A(i, i + 1) = h(i);
    B(i, i - 1) = 6 / h(i - 1);
    B(i, i) = -6 / h(i - 1) - 6 / h(i);
    B(i, i + 1) = 6 / h(i);
  }
  if (m < 4) {
    A(0, 0) = 1;
    A(m - 1, m - 1) = 1;
  } else {
    if (r(0) == 0.0) {
      A(0, 0) = 2 * h(0);
      A(0, 1) = h(0);
      B(0, 0) = -6 / h(0);
      B(0, 1) = 6 / h(0);
    } else {
      A(0, 0) = h(1);
      A(0, 1) = -(h(0) + h(1));
      A(0, 2) = h(0);
    }
    A(m - 1, m - 3) = h(m - 2);
    A(m - 1, m - 2) = -(h(m - 3) + h(m - 2));
    A(m - 1, m - 1) = h(m - 3);
  }
  return A.partialPivLu().solve(B);
}

// Calls val(j, w) / mom(j, w) with the interpolation weights at x.
template <typename V, typename M>
bool interp_weights(const GridLayout& L, const Point& x, V&& val, M&& mom) {
  switch (L.interp) {
    case Interp::PiecewiseLinear1D: {
      const Eigen::VectorXd xs = L.nodes.row(0).transpose();
      const int i = locate(xs, x(0));
      if (i < 0) return false;
      if (xs.size() == 1) {
        val(0, 1.0);
        return true;
      }
      const double t = std::clamp((x(0) - xs(i)) / (xs(i + 1) - xs(i)), 0.0, 1.0);
      val(i, 1 - t);
      val(i + 1, t);
      return true;
    }
    case Interp::RadialCubic: {
      const double r = (x - L.center).norm();
      const int i = locate(L.radii, r);
      if (i < 0) return false;
      if (L.radii.size() == 1) {
        val(0, 1.0);
        return true;
      }
      const double h = L.radii(i + 1) - L.radii(i);
      const double b = std::clamp((r - L.radii(i)) / h, 0.0, 1.0), a = 1 - b;
      val(i, a);
      val(i + 1, b);
      const double c = h * h / 6.0;
      mom(i, (a * a * a - a) * c);
      mom(i + 1, (b * b * b - b) * c);
      return true;
    }
    case Interp::BilinearPolar: {
      const Point d = x - L.center;
      const double r = d.norm();
      const int i = locate(L.radii, r);
      if (i < 0) return false;
      const int nr = static_cast<int>(L.radii.size()), na = static_cast<int>(L.angles.size());
      double phi = std::atan2(d(1), d(0));
      if (phi < 0) phi += 2 * kPi;
      int j0, j1;
      double ta;
      if (na == 1) {
        j0 = j1 = 0;
        ta = 0;
      } else if (L.periodic) {
        double p = phi;
        if (p < L.angles(0)) p += 2 * kPi;
        j0 = static_cast<int>(std::upper_bound(L.angles.data(), L.angles.data() + na, p) - L.angles.data()) - 1;
        j0 = std::clamp(j0, 0, na - 1);
        j1 = (j0 + 1) % na;
        double a1 = L.angles(j1);
        if (j1 == 0) a1 += 2 * kPi;
        ta = std::clamp((p - L.angles(j0)) / (a1 - L.angles(j0)), 0.0, 1.0);
      } else {
        const int j = locate(L.angles, phi);
        if (j < 0) return false;
        j0 = j;
        j1 = j + 1;
        ta = std::clamp((phi - L.angles(j0)) / (L.angles(j1) - L.angles(j0)), 0.0, 1.0);
      }
      double tr = 0.0;
      int i1 = i;
      if (nr > 1) {
        i1 = i + 1;
        tr = std::clamp((r - L.radii(i)) / (L.radii(i1) - L.radii(i)), 0.0, 1.0);
      }
      val(i * na + j0, (1 - tr) * (1 - ta));
      val(i * na + j1, (1 - tr) * ta);
      val(i1 * na + j0, tr * (1 - ta));
      val(i1 * na + j1, tr * ta);
      return true;
    }
  }
  return false;
}

}  // namespace

std::string_view to_string(Interp interp) {
  switch (interp) {
    case Interp::RadialCubic: return "RadialCubic";
    case Interp::BilinearPolar: return "BilinearPolar";
    case Interp::PiecewiseLinear1D: return "PiecewiseLinear1D";
  }
  return "?";
}

GridLayoutPtr radial_layout(const Point& center, const Eigen::VectorXd& radii, const Point& direction) {
  const int n = static_cast<int>(center.size());
  require(n >= 1, "radial_layout: empty center");
  require(radii.size() >= 1 && radii(0) >= 0 && strictly_increasing(radii),
          "radial_layout: radii must be non-negative and strictly increasing");
  Point e = direction.size() ? direction : Point(Point::Unit(n, 0));
  require(e.size() == n && e.norm() > 0, "radial_layout: bad direction");
  e.normalize();
  auto L = std::make_shared<GridLayout>();
  L->interp = Interp::RadialCubic;
  L->center = center;
  L->radii = radii;
  L->nodes.resize(n, radii.size());
  for (Eigen::Index i = 0; i < radii.size(); ++i) L->nodes.col(i) = center + radii(i) * e;
  L->spline_moments = spline_moment_matrix(radii);
  return L;
}

GridLayoutPtr polar_layout(const Point& center, const Eigen::VectorXd& radii,
                           const Eigen::VectorXd& angles, bool periodic) {
  require(center.size() == 2, "polar_layout: requires n = 2");
  require(radii.size() >= 1 && radii(0) >= 0 && strictly_increasing(radii),
          "polar_layout: radii must be non-negative and strictly increasing");
  require(angles.size() >= 1 && strictly_increasing(angles) && angles(0) >= 0 &&
              angles(angles.size() - 1) < 2 * kPi,
          "polar_layout: angles must be increasing in [0, 2 pi)");
  auto L = std::make_shared<GridLayout>();
  L->interp = Interp::BilinearPolar;
  L->center = center;
  L->radii = radii;
  L->angles = angles;
  L->periodic = periodic;
  L->nodes.resize(2, radii.size() * angles.size());
  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    for (Eigen::Index j = 0; j < angles.size(); ++j) {
      L->nodes.col(i * angles.size() + j) =
          center + radii(i) * Eigen::Vector2d(std::cos(angles(j)), std::sin(angles(j)));
    }
  }
  return L;
}

GridLayoutPtr linear_layout(const Eigen::VectorXd& x) {
  require(x.size() >= 1 && strictly_increasing(x), "linear_layout: abscissae must increase");
  auto L = std::make_shared<GridLayout>();
  L->interp = Interp::PiecewiseLinear1D;
  L->nodes = x.transpose();
  L->center = Point::Zero(1);
  return L;
}

Eigen::VectorXd InterpolationAccumulator::finish(const GridLayout& layout) const {
  if (layout.interp != Interp::RadialCubic) return value_row;
  return value_row + layout.spline_moments.transpose() * moment_row;
}

GridFunction::GridFunction(GridLayoutPtr layout, Eigen::VectorXd values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  require(layout_ != nullptr, "GridFunction: null layout");
  require(values_.size() == layout_->size(), "GridFunction: one value per node required");
  require(values_.allFinite(), "GridFunction: values must be finite");
  if (layout_->interp == Interp::RadialCubic) moments_ = layout_->spline_moments * values_;
}

double GridFunction::operator()(const Point& x) const {
  if (x.size() != dim()) throw std::invalid_argument("GridFunction: dimension mismatch");
  double acc = 0.0;
  const bool ok = interp_weights(
      *layout_, x, [&](int j, double w) { acc += w * values_(j); },
      [&](int j, double w) { acc += w * moments_(j); });
  if (!ok) {
    if (fill_) return *fill_;
    throw std::domain_error("GridFunction: point outside the sampled region");
  }
  return acc;
}

bool GridFunction::accumulate(const Point& x, double scale, InterpolationAccumulator& acc) const {
  return interp_weights(
      *layout_, x, [&](int j, double w) { acc.value_row(j) += scale * w; },
      [&](int j, double w) { acc.moment_row(j) += scale * w; });
}

GridFunction GridFunction::with_values(Eigen::VectorXd values) const {
  GridFunction g(layout_, std::move(values));
  g.fill_ = fill_;
  return g;
}

GridFunction GridFunction::transformed(const Point& shift, double scale, double value_scale) const {
  require(scale > 0, "GridFunction::transformed: scale must be positive");
  const GridLayout& L = *layout_;
  GridLayoutPtr out;
  switch (L.interp) {
    case Interp::RadialCubic: {
      Point e = (L.nodes.col(L.size() - 1) - L.center);
      if (e.norm() == 0) e = Point::Unit(L.dim(), 0);
      out = radial_layout((L.center - shift) / scale, L.radii / scale, e);
      break;
    }
    case Interp::BilinearPolar:
      out = polar_layout((L.center - shift) / scale, L.radii / scale, L.angles, L.periodic);
      break;
    case Interp::PiecewiseLinear1D:
      out = linear_layout((L.nodes.row(0).transpose().array() - shift(0)) / scale);
      break;
  }
  GridFunction g(out, value_scale * values_);
  if (fill_) g.fill_ = value_scale * *fill_;
  return g;
}

}  // namespace conekit
