#include "conekit/kernels.hpp"

#include "conekit/quadrature.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conekit {

namespace {

bool is_positive_integer(double s) { return s >= 1 && std::floor(s) == s; }

void check_pair(const DomainSpec& dom, const Point& x, const Point& y, const char* who) {
  const int n = dom.dim();
  if (x.size() != n || y.size() != n) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
  if (x == y) throw std::domain_error(std::string(who) + ": x = y is singular");
  const double tol_x = 1e-12 * (1.0 + x.norm()), tol_y = 1e-12 * (1.0 + y.norm());
  if (!dom.contains_closure(x, tol_x) || !dom.contains_closure(y, tol_y)) {
    throw std::domain_error(std::string(who) + ": point outside the closed domain");
  }
}

struct ConeData {
  int k;
  Point vertex;
  Frame frame;
  double radius;  // +inf for the unbounded cone
};

std::optional<ConeData> cone_data(const DomainSpec& dom) {
  if (const auto* d = dom.as<HalfSpaceK>()) return ConeData{d->k, d->vertex, d->frame, kInf};
  if (const auto* d = dom.as<BallK>()) return ConeData{d->k, d->vertex, d->frame, d->radius};
  if (const auto* d = dom.as<ExteriorBallK>()) return ConeData{d->k, d->vertex, d->frame, d->radius};
  if (const auto* d = dom.as<Ball>()) {
    return ConeData{0, d->center, identity_frame(dom.dim()), d->radius};
  }
  return std::nullopt;
}

// Signed images sum in local coordinates; R = +inf drops the Kelvin images.
template <typename G>
double images_sum(const Eigen::VectorXd& zx, const Eigen::VectorXd& zy, int k, double R,
                  const G& gamma_r2) {
  const int n = static_cast<int>(zx.size());
  const double ny = zy.norm();
  const double ax = std::isfinite(R) ? ny / R : 0.0;
  const double ay = (std::isfinite(R) && ny > 0) ? R / ny : 0.0;
  double sum = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    double d1 = 0.0, d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double yi = (mask & (1u << i)) ? -zy(i) : zy(i);
      const double e1 = zx(i) - yi;
      d1 += e1 * e1;
      if (std::isfinite(R)) {
        const double e2 = ax * zx(i) - ay * yi;
        d2 += e2 * e2;
      }
    }
    double term = gamma_r2(d1);
    if (std::isfinite(R)) term -= gamma_r2(ny > 0 ? d2 : R * R);
    sum += (std::popcount(mask) % 2 ? -term : term);
  }
  return sum;
}

}  // namespace

std::string_view to_string(Normalization norm) {
  return norm == Normalization::Angular ? "Angular" : "PaperCycles";
}

Normalization normalization_from_string(std::string_view name) {
  if (name == "Angular" || name == "angular") return Normalization::Angular;
  if (name == "PaperCycles" || name == "paper_cycles" || name == "paper-cycles") {
    return Normalization::PaperCycles;
  }
  throw std::invalid_argument("unknown normalization: " + std::string(name));
}

double fundamental_constant(double s, int n, Normalization norm) {
  if (!(s > 0) || n < 1 || 2 * s > n) {
    throw std::invalid_argument("fundamental_constant: requires 0 < 2s <= n");
  }
  double c;
  if (2 * s == n) {
    c = 1.0 / (std::pow(2.0, n - 1) * std::pow(kPi, 0.5 * n) * std::tgamma(0.5 * n));
  } else {
    c = std::tgamma(0.5 * n - s) / (std::pow(4.0, s) * std::pow(kPi, 0.5 * n) * std::tgamma(s));
  }
  if (norm == Normalization::PaperCycles) c *= std::pow(2 * kPi, 2 * s);
  return c;
}

double fundamental_profile(double s, int n, double r, Normalization norm) {
  if (!(r > 0)) throw std::domain_error("fundamental_profile: r must be positive");
  const double c = fundamental_constant(s, n, norm);
  return 2 * s == n ? c * std::log(1.0 / r) : c / std::pow(r, n - 2 * s);
}

double fundamental(double s, int n, const Point& x, const Point& y, Normalization norm) {
  if (x.size() != n || y.size() != n) throw std::invalid_argument("fundamental: dimension mismatch");
  const double r = (x - y).norm();
  if (r == 0.0) throw std::domain_error("fundamental: x = y is singular");
  return fundamental_profile(s, n, r, norm);
}

// ---------------------------------------------------------------------------

GreenKernel::GreenKernel(double s, DomainSpec dom, Normalization norm, std::optional<double> constant)
    : s_(s), dom_(std::move(dom)), norm_(norm), c_(0.0), critical_(false) {
  const int n = dom_.dim();
  if (!(s > 0)) throw std::invalid_argument("GreenKernel: s must be positive");
  const bool log_kind = dom_.as<Interval>() || dom_.as<HalfLine>();
  if (log_kind) {
    if (s != 0.5) throw std::invalid_argument("GreenKernel: interval kernels require s = 1/2");
    c_ = constant.value_or(1.0);
    critical_ = true;
    return;
  }
  if (2 * s > n) throw std::invalid_argument("GreenKernel: requires 2s <= n");
  if (!dom_.as<FreeSpace>()) {
    if (!cone_data(dom_)) {
      throw std::invalid_argument("GreenKernel: no explicit Green function for this domain kind");
    }
    if (!is_positive_integer(s)) {
      throw std::invalid_argument("GreenKernel: images kernels require a positive integer s");
    }
  }
  c_ = constant.value_or(fundamental_constant(s, n, norm));
  critical_ = (2 * s == n);
}

double GreenKernel::gamma_r2(double r2) const {
  const int n = dom_.dim();
  if (critical_) return -0.5 * c_ * std::log(r2);
  return c_ * std::pow(r2, -0.5 * (n - 2 * s_));
}

double GreenKernel::gamma(const Point& x, const Point& y) const {
  const double r2 = (x - y).squaredNorm();
  if (r2 == 0.0) throw std::domain_error("GreenKernel::gamma: x = y is singular");
  return gamma_r2(r2);
}

double GreenKernel::operator()(const Point& x, const Point& y) const {
  check_pair(dom_, x, y, "GreenKernel");
  return eval(x, y);
}

double GreenKernel::eval(const Point& x, const Point& y) const {
  if (dom_.as<FreeSpace>()) return gamma_r2((x - y).squaredNorm());
  if (const auto* iv = dom_.as<Interval>()) {
    const double al = x(0) - iv->a, be = iv->b - x(0), ga = y(0) - iv->a, de = iv->b - y(0);
    const double r = 0.5 * (iv->b - iv->a);
    const double num = 0.5 * (be * ga + al * de) + std::sqrt(std::max(0.0, al * be * ga * de));
    return c_ * std::log(num / (r * std::abs(x(0) - y(0))));
  }
  if (const auto* hl = dom_.as<HalfLine>()) {
    const double xt = std::max(0.0, hl->direction * (x(0) - hl->origin));
    const double yt = std::max(0.0, hl->direction * (y(0) - hl->origin));
    const double sx = std::sqrt(xt), sy = std::sqrt(yt);
    return c_ * (2.0 * std::log(sx + sy) - std::log(std::abs(x(0) - y(0))));
  }
  const ConeData cd = *cone_data(dom_);
  Eigen::VectorXd zx = cd.frame.transpose() * (x - cd.vertex);
  Eigen::VectorXd zy = cd.frame.transpose() * (y - cd.vertex);
  auto g = [this](double r2) { return gamma_r2(r2); };
  if (dom_.as<ExteriorBallK>()) {
    const double R2 = cd.radius * cd.radius;
    const double nx2 = zx.squaredNorm(), ny2 = zy.squaredNorm();
    const int n = dom_.dim();
    const double pref = std::pow(R2 / std::sqrt(nx2 * ny2), n - 2 * s_);
    zx *= R2 / nx2;
    zy *= R2 / ny2;
    return pref * images_sum(zx, zy, cd.k, cd.radius, g);
  }
  return images_sum(zx, zy, cd.k, cd.radius, g);
}

double green_images(const GreenKernel& kernel, const Point& x, const Point& y) {
  const DomainSpec& d = kernel.domain();
  if (!(d.as<HalfSpaceK>() || d.as<BallK>() || d.as<Ball>())) {
    throw std::invalid_argument("green_images: requires HalfSpaceK, BallK or Ball");
  }
  return kernel(x, y);
}

double green_exterior(const GreenKernel& kernel, const Point& x, const Point& y) {
  if (!kernel.domain().as<ExteriorBallK>()) {
    throw std::invalid_argument("green_exterior: requires ExteriorBallK");
  }
  return kernel(x, y);
}

double green_interval_half(const GreenKernel& kernel, const Point& x, const Point& y) {
  const DomainSpec& d = kernel.domain();
  if (!(d.as<Interval>() || d.as<HalfLine>())) {
    throw std::invalid_argument("green_interval_half: requires Interval or HalfLine");
  }
  return kernel(x, y);
}

// ---------------------------------------------------------------------------

IteratedKernel::IteratedKernel(std::shared_ptr<const Kernel> base, int steps, int order, int layers)
    : base_(std::move(base)), steps_(steps), quad_order_(order), layers_(layers) {
  if (!base_) throw std::invalid_argument("IteratedKernel: null base kernel");
  if (steps < 2) throw std::invalid_argument("IteratedKernel: steps must be >= 2");
  if (!base_->domain().bounded()) {
    throw std::invalid_argument("IteratedKernel: bounded domain required");
  }
  inner_ = steps == 2 ? base_ : std::make_shared<IteratedKernel>(base_, steps - 1, order, layers);
}

double IteratedKernel::operator()(const Point& x, const Point& y) const {
  check_pair(domain(), x, y, "IteratedKernel");
  return eval(x, y);
}

double IteratedKernel::eval(const Point& x0, const Point& y0) const {
  // Both orderings use the same two rules, so the result is symmetric when
  // the inner kernel is.
  const bool swap = steps_ == 2 &&
                    std::lexicographical_compare(y0.data(), y0.data() + y0.size(), x0.data(),
                                                 x0.data() + x0.size());
  const Point& x = swap ? y0 : x0;
  const Point& y = swap ? x0 : y0;
  const PolarOptions po{quad_order_, layers_, std::nullopt};
  auto weight_x = [&](const Point& z) {
    const double a = (z - x).squaredNorm(), b = (z - y).squaredNorm();
    return b * b / (a * a + b * b);
  };
  double part_x = 0.0, part_y = 0.0;
  const QuadratureRule rx = polar_rule(domain(), x, po);
  Point z(x.size());
  for (int q = 0; q < rx.size(); ++q) {
    z = rx.nodes.col(q);
    const double w = weight_x(z);
    if (w == 0.0) continue;
    part_x += rx.weights(q) * w * base_->eval(x, z) * inner_->eval(z, y);
  }
  const QuadratureRule ry = polar_rule(domain(), y, po);
  for (int q = 0; q < ry.size(); ++q) {
    z = ry.nodes.col(q);
    const double w = 1.0 - weight_x(z);
    if (w == 0.0) continue;
    part_y += ry.weights(q) * w * base_->eval(x, z) * inner_->eval(z, y);
  }
  return swap ? part_y + part_x : part_x + part_y;
}

std::shared_ptr<const Kernel> green_iterated(std::shared_ptr<const Kernel> base, int steps, int order,
                                             int layers) {
  if (!base) throw std::invalid_argument("green_iterated: null base kernel");
  if (steps < 1) throw std::invalid_argument("green_iterated: steps must be >= 1");
  if (!base->domain().bounded()) throw std::invalid_argument("green_iterated: bounded domain required");
  if (steps == 1) return base;
  return std::make_shared<IteratedKernel>(std::move(base), steps, order, layers);
}

}  // namespace conekit
